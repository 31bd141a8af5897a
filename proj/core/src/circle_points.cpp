#include "rotcoc/circle_points.hpp"

#include <algorithm>

namespace rotcoc {

namespace {

constexpr u128 kSlack = Session::kKeySlackUlps;
constexpr u128 kBand = kSlack << 6;  // wrap-boundary band

}  // namespace

CircleOrbit::CircleOrbit(const Session& sess, std::vector<LinearForm> base_points, int k_sign)
    : sess_(&sess), base_(std::move(base_points)), k_sign_(k_sign) {
    if (k_sign_ != 1 && k_sign_ != -1) throw std::invalid_argument("k_sign must be +-1");
    alpha_key_ = sess_->alpha_key128();
    base_keys_.reserve(base_.size());
    for (const auto& b : base_) base_keys_.push_back(sess_->key128(b));
}

LinearForm CircleOrbit::point_form(const OrbitPoint& pt) const {
    LinearForm f = base_[pt.type] + LinearForm::alpha(Rat(k_sign_) * Rat(Int(pt.k)));
    if (pt.floor_part != 0) f -= LinearForm(Rat(pt.floor_part));
    return f;
}

LinearForm CircleOrbit::gap_form(const OrbitPoint& left, const OrbitPoint& right,
                                 bool wrap) const {
    LinearForm g = point_form(right) - point_form(left);
    if (wrap) g += LinearForm(Rat(1));
    return g;
}

std::vector<OrbitPoint> CircleOrbit::sorted(std::uint64_t n) const {
    return sorted(std::vector<std::uint64_t>(base_.size(), n));
}

std::vector<OrbitPoint> CircleOrbit::sorted(const std::vector<std::uint64_t>& counts) const {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    std::vector<OrbitPoint> pts;
    pts.reserve(total);

    // Positions live in [0,1) exactly (floor parts are certified), but the
    // fixed-point key may drift across the wrap by the accumulated error.
    // Points whose key lands in the boundary band get their side pinned by
    // an exact comparison so that linear key order equals circle order.
    auto canonical_key = [&](u128 w, const OrbitPoint& pt) -> u128 {
        if (w > kBand && w < u128(0) - kBand) return w;
        bool small_side =
            sess_->compare(point_form(pt), LinearForm(Rat(1, 2))) == Ordering::Less;
        if (small_side && w >= u128(0) - kBand) return 0;            // drifted below 0
        if (!small_side && w <= kBand) return u128(0) - 1;           // drifted above 1
        return w;
    };

    for (std::uint32_t t = 0; t < base_.size(); ++t) {
        u128 w = base_keys_[t];
        std::int64_t fl = 0;
        for (std::uint64_t k = 0; k < counts[t]; ++k) {
            OrbitPoint cur{w, fl, t, static_cast<std::uint32_t>(k)};
            cur.key = canonical_key(w, cur);
            w = cur.key;
            pts.push_back(cur);
            if (k + 1 == counts[t]) break;
            if (k_sign_ < 0) {
                // next = cur - alpha; the floor drops iff frac(cur) < alpha
                u128 v = w - alpha_key_;  // wrapped when borrowing
                bool ambiguous = v <= 2 * kSlack || v >= u128(0) - 2 * kSlack;
                bool borrow = ambiguous
                                  ? sess_->compare(point_form(cur), LinearForm::alpha()) ==
                                        Ordering::Less
                                  : v > w;
                w = v;
                if (borrow) --fl;
            } else {
                // next = cur + alpha; the floor rises iff frac(cur) >= 1 - alpha
                u128 v = w + alpha_key_;  // wrapped when carrying
                bool ambiguous = v <= 2 * kSlack || v >= u128(0) - 2 * kSlack;
                bool carry;
                if (ambiguous) {
                    LinearForm one_minus_alpha = LinearForm(Rat(1)) - LinearForm::alpha();
                    carry = sess_->compare(point_form(cur), one_minus_alpha) != Ordering::Less;
                } else {
                    carry = v < w;
                }
                w = v;
                if (carry) ++fl;
            }
        }
    }

    std::sort(pts.begin(), pts.end(),
              [](const OrbitPoint& a, const OrbitPoint& b) { return a.key < b.key; });

    // Resolve runs of near-equal keys by exact comparison; symbolically
    // coincident points signal an undeclared relation.
    auto exact_less = [&](const OrbitPoint& a, const OrbitPoint& b) {
        Ordering o = sess_->compare(point_form(a), point_form(b));
        if (o == Ordering::Equal)
            throw UndecidableAtCap(
                "coincident circle points: type " + std::to_string(a.type) +
                " k=" + std::to_string(a.k) + " equals type " + std::to_string(b.type) +
                " k=" + std::to_string(b.k));
        return o == Ordering::Less;
    };
    std::size_t i = 0;
    while (i + 1 < pts.size()) {
        std::size_t j = i;
        while (j + 1 < pts.size() && pts[j + 1].key - pts[j].key <= 4 * kSlack) ++j;
        if (j > i)
            std::sort(pts.begin() + static_cast<std::ptrdiff_t>(i),
                      pts.begin() + static_cast<std::ptrdiff_t>(j + 1), exact_less);
        i = j + 1;
    }
    // Coincidence across the wrap (first and last are circular neighbours).
    if (pts.size() >= 2) {
        u128 around = pts.front().key + ((u128(0) - 1) - pts.back().key) + 1;
        if (around <= 4 * kSlack) {
            if (sess_->compare(point_form(pts.front()) + LinearForm(Rat(1)),
                               point_form(pts.back())) == Ordering::Equal)
                throw UndecidableAtCap("coincident circle points across the wrap");
        }
    }
    return pts;
}

}  // namespace rotcoc
