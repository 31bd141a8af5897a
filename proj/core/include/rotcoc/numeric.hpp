#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rotcoc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

// floor(a/b) for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && a < 0) --q;
    return q;
}

inline Int rat_floor(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }
inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// 2^-k as a rational.
inline Rat pow2_inv(unsigned k) {
    Int d = Int(1) << k;
    return Rat(1, d);
}

// Nearest integer; ties round down (only the interval logic cares).
inline Int rat_round(const Rat& r) { return rat_floor(r + Rat(1, 2)); }

double to_double(const Rat& r);

// Decimal string with `digits` places, rounded toward -inf (down) or +inf (up).
std::string decimal_string(const Rat& r, unsigned digits, bool round_up);

// A closed interval [lo, hi] with rational endpoints.
struct Interval {
    Rat lo, hi;

    Interval() = default;
    Interval(Rat v) : lo(v), hi(std::move(v)) {}
    Interval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {}

    Rat width() const { return hi - lo; }
    Rat center() const { return (lo + hi) / 2; }
    Rat radius() const { return (hi - lo) / 2; }
    bool is_point() const { return lo == hi; }

    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains_integer() const { return rat_floor(hi) >= rat_ceil(lo); }

    Interval operator+(const Interval& o) const { return {lo + o.lo, hi + o.hi}; }
    Interval operator-(const Interval& o) const { return {lo - o.hi, hi - o.lo}; }
    Interval operator-() const { return {-hi, -lo}; }
    Interval scaled(const Rat& c) const {
        return c >= 0 ? Interval{lo * c, hi * c} : Interval{hi * c, lo * c};
    }
    // Interval of |x|.
    Interval abs() const {
        if (lo >= 0) return *this;
        if (hi <= 0) return {-hi, -lo};
        Rat m = rat_abs(lo) > hi ? rat_abs(lo) : hi;
        return {Rat(0), m};
    }
    // Distance to the nearest integer, as an interval.
    Interval dist_to_Z() const;
};

// Spec-mandated error conditions.

struct UndecidableAtCap : std::runtime_error {
    explicit UndecidableAtCap(const std::string& what) : std::runtime_error(what) {}
};

struct PrecisionExhausted : std::runtime_error {
    explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyPartition : std::runtime_error {
    explicit EmptyPartition(const std::string& what) : std::runtime_error(what) {}
};

struct SubsequenceExhausted : std::runtime_error {
    explicit SubsequenceExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct AuditFailure : std::runtime_error {
    Int n, k;
    AuditFailure(const std::string& what, Int n_, Int k_)
        : std::runtime_error(what), n(std::move(n_)), k(std::move(k_)) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rotcoc
