#pragma once

#include "momdyn/moment_algebra.hpp"

namespace momdyn {

// Independent oracle for moment brackets: expands Weyl-ordered central
// monomials over the canonical commutator algebra (exact Gaussian-rational
// arithmetic), applies {<A>,<B>} = <[A,B]>/(i hbar) with the chain rule over
// raw expectation symbols, re-centers, and collects the result as a
// MomentPolynomial. Works for 1 or 2 DOF. Throws DegreeTooLarge beyond total
// degree 6 per monomial.
MomentPolynomial weyl_bracket_oracle(const MomentIndex& A, const MomentIndex& B);

}  // namespace momdyn
