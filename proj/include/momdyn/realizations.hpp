#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "momdyn/chart.hpp"
#include "momdyn/moment_algebra.hpp"

namespace momdyn {

// A named map from moment indices to chart functions over a Casimir-Darboux
// chart. Base moments are registered closed forms; higher moments are
// generated on demand through Delta(q^(m-1) pi^(n+1)) = -1/(2m) {Delta(pi^2),
// Delta(q^m pi^n)} and cached, so each moment has a single definition.
class Realization {
  public:
    const std::string& name() const { return name_; }
    const std::shared_ptr<const CanonicalChart>& chart() const { return chart_; }
    int dofs() const { return dofs_; }
    int order() const { return order_; }

    // Chart function for a moment, generating and caching if not registered.
    ChartFunction moment(const MomentIndex& idx) const;
    bool has_registered(const MomentIndex& idx) const { return base_.count(idx) > 0; }

    // All moment indices of order 2..order() (for 1 DOF) or the ten
    // second-order moments (2 DOF).
    std::vector<MomentIndex> moment_indices() const;

    // True away from chart singularities (s_i = 0, s_i = s_j, sin(beta) = 0,
    // |p3| = 1/2, negative discriminant).
    bool regular(const ChartPoint& x) const { return regular_(x); }
    void check_regular(const ChartPoint& x) const;

    // Evaluate every moment; throws SingularChart outside the domain.
    MomentState realize(const ChartPoint& x, double hbar = 1.0) const;

    ChartPoint sample_regular(std::mt19937& rng) const { return sample_(rng); }

    ChartPoint point(std::vector<double> values) const { return ChartPoint(chart_, std::move(values)); }

  private:
    friend const Realization& realization(const std::string& name);
    friend struct RealizationFactory;

    std::string name_;
    std::shared_ptr<const CanonicalChart> chart_;
    int dofs_ = 1;
    int order_ = 2;
    std::map<MomentIndex, ChartFunction> base_;
    std::function<bool(const ChartPoint&)> regular_;
    std::function<ChartPoint(std::mt19937&)> sample_;

    mutable std::unique_ptr<std::mutex> cache_mu_ = std::make_unique<std::mutex>();
    mutable std::map<MomentIndex, ChartFunction> cache_;
};

// Catalog lookup: order2, order3_systematic, order3_ansatz, order4_ansatz,
// twodof_order2.
const Realization& realization(const std::string& name);
std::vector<std::string> realization_names();

// Recursive moment generation (public wrapper over Realization::moment with
// the spec's precondition checks).
ChartFunction generate_moment(const Realization& R, const MomentIndex& target);

struct ClosureReport {
    int pairs_checked = 0;
    int points = 0;
    double max_rel = 0.0;
    std::string worst_pair;
};

// Certifies that the canonical brackets of all realized moment pairs match
// the commutator-oracle algebra truncated at the realization's order, at
// random regular chart points. With only_second_order_pairs, pairs of two
// third-or-higher moments are skipped (the ansatz realizations close those
// only up to truncation order).
ClosureReport closure_certificate(const Realization& R, int npoints, std::mt19937& rng,
                                  bool only_second_order_pairs = false);

// Convenience entry points mirroring the per-realization operations.
MomentState realize_order2(const ChartPoint& x, double hbar = 1.0);
MomentState realize_order3_systematic(const ChartPoint& x, double hbar = 1.0);
MomentState realize_order3_ansatz(const ChartPoint& x, double hbar = 1.0);
MomentState realize_order4_ansatz(const ChartPoint& x, double hbar = 1.0);
MomentState realize_twodof(const ChartPoint& x, double hbar = 1.0);

}  // namespace momdyn
