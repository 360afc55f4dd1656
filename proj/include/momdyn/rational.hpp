#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace momdyn {

// Exact rational arithmetic for moment-bracket coefficients. Desk scale:
// numerators stay tiny (binomials and factorials up to 6!), but intermediate
// products go through 128 bit to be safe.
class Rat {
  public:
    constexpr Rat() = default;
    constexpr Rat(std::int64_t n) : num_(n), den_(1) {}
    Rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) { reduce(); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    using i128 = __int128;

    static Rat make(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr i128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rat: overflow");
        Rat r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
    void reduce() { *this = make(num_, den_); }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace momdyn
