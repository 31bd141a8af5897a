#pragma once

#include "rotcoc/linear_form.hpp"
#include "rotcoc/session.hpp"

#include <cstdint>
#include <vector>

namespace rotcoc {

// One orbit point x_t + s*k*alpha mod 1 (s = +1 or -1), carrying enough to
// reconstruct its exact form: position = base[type] + s*k*alpha - floor_part.
struct OrbitPoint {
    u128 key;                 // fixed-point circle position, error <= slack
    std::int64_t floor_part;  // certified floor(base + s*k*alpha)
    std::uint32_t type;
    std::uint32_t k;
};

// Sorted orbits of finitely many base points under the rotation. The bulk
// path works in 128-bit fixed point; pairs closer than the slack are
// re-ordered by certified exact comparison, and symbolically coincident
// points raise UndecidableAtCap (an undeclared relation).
class CircleOrbit {
public:
    CircleOrbit(const Session& sess, std::vector<LinearForm> base_points, int k_sign);

    const std::vector<LinearForm>& base() const { return base_; }
    int k_sign() const { return k_sign_; }

    // All {base[t] + s k alpha : 0 <= k < counts[t]} sorted around the circle.
    std::vector<OrbitPoint> sorted(const std::vector<std::uint64_t>& counts) const;
    std::vector<OrbitPoint> sorted(std::uint64_t n) const;  // same count for every type

    LinearForm point_form(const OrbitPoint& pt) const;

    // Exact gap form between two circle-adjacent points (right - left >= 0),
    // using the stored floor parts; `wrap` adds 1 for the closing gap.
    LinearForm gap_form(const OrbitPoint& left, const OrbitPoint& right, bool wrap) const;

private:
    const Session* sess_;
    std::vector<LinearForm> base_;
    int k_sign_;
    std::vector<u128> base_keys_;
    u128 alpha_key_;
};

}  // namespace rotcoc
