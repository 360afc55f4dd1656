#pragma once

#include <cmath>
#include <type_traits>

namespace momdyn {

// Forward-mode dual scalar. Nesting Dual<Dual<...>> gives exact higher
// derivatives; chart functions are evaluated on these, never differenced.
template <class T>
struct Dual {
    T a{};  // value
    T b{};  // derivative

    Dual() = default;
    Dual(double v) : a(v), b() {}
    Dual(T v, T d) : a(std::move(v)), b(std::move(d)) {}
    template <class U = T, class = std::enable_if_t<!std::is_same_v<U, double>>>
    Dual(T v) : a(std::move(v)), b() {}
};

template <class T>
struct dual_depth {
    static constexpr int value = 0;
};
template <class T>
struct dual_depth<Dual<T>> {
    static constexpr int value = 1 + dual_depth<T>::value;
};

inline double scalar_value(double x) { return x; }
template <class T>
double scalar_value(const Dual<T>& x) {
    return scalar_value(x.a);
}

template <class T>
Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) {
    return {x.a + y.a, x.b + y.b};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) {
    return {x.a - y.a, x.b - y.b};
}
template <class T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
    return {x.a * y.a, x.a * y.b + x.b * y.a};
}
template <class T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
    T q = x.a / y.a;
    return {q, (x.b - q * y.b) / y.a};
}
template <class T>
Dual<T> operator-(const Dual<T>& x) {
    return {-x.a, -x.b};
}
template <class T>
Dual<T> operator+(const Dual<T>& x) {
    return x;
}

template <class T>
Dual<T> operator+(const Dual<T>& x, double c) {
    return {x.a + c, x.b};
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& x) {
    return {x.a + c, x.b};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, double c) {
    return {x.a - c, x.b};
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& x) {
    return {c - x.a, -x.b};
}
template <class T>
Dual<T> operator*(const Dual<T>& x, double c) {
    return {x.a * c, x.b * c};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& x) {
    return {x.a * c, x.b * c};
}
template <class T>
Dual<T> operator/(const Dual<T>& x, double c) {
    return {x.a / c, x.b / c};
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& x) {
    return Dual<T>(c) / x;
}

template <class T>
bool operator<(const Dual<T>& x, double c) {
    return scalar_value(x) < c;
}
template <class T>
bool operator>(const Dual<T>& x, double c) {
    return scalar_value(x) > c;
}

using std::abs;
using std::atan;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
    T r = sqrt(x.a);
    return {r, x.b / (2.0 * r)};
}
template <class T>
Dual<T> sin(const Dual<T>& x) {
    return {sin(x.a), x.b * cos(x.a)};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
    return {cos(x.a), -(x.b * sin(x.a))};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
    T e = exp(x.a);
    return {e, x.b * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
    return {log(x.a), x.b / x.a};
}
template <class T>
Dual<T> atan(const Dual<T>& x) {
    return {atan(x.a), x.b / (1.0 + x.a * x.a)};
}
template <class T>
Dual<T> tanh(const Dual<T>& x) {
    T t = tanh(x.a);
    return {t, x.b * (1.0 - t * t)};
}
// |x| with subgradient sign(x); undefined at 0 (callers keep kinks off the path).
template <class T>
Dual<T> abs(const Dual<T>& x) {
    return scalar_value(x.a) < 0 ? -x : x;
}
template <class T>
Dual<T> pow(const Dual<T>& x, int n) {
    if (n == 0) return Dual<T>(1.0);
    if (n < 0) return 1.0 / pow(x, -n);
    Dual<T> r = x;
    for (int i = 1; i < n; ++i) r = r * x;
    return r;
}
template <class T>
Dual<T> pow(const Dual<T>& x, double e) {
    T p = pow(x.a, e);
    return {p, x.b * (e * pow(x.a, e - 1.0))};
}

template <class T>
bool dual_finite(const T& x) {
    return std::isfinite(x);
}
template <class T>
bool dual_finite(const Dual<T>& x) {
    return dual_finite(x.a) && dual_finite(x.b);
}

}  // namespace momdyn
