#pragma once

#include "rotcoc/circle_points.hpp"
#include "rotcoc/step_cocycle.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace rotcoc {

inline constexpr std::uint64_t kDefaultPieceBudget = 24'000'000;

// One atom of the exact law of Phi_n under Lebesgue measure.
struct Atom {
    FormVec value;
    LinearForm mass;
    std::vector<Rat> u_offset;  // value - v_base, rational (fast path only)
    double mass_approx = 0.0;
    std::vector<double> value_approx;
};

struct PushforwardDistribution {
    Int n;
    std::uint64_t piece_count = 0;
    std::vector<Atom> atoms;  // sorted by value, lexicographic
    // Two symbolically distinct atoms closer than 1e-9 in some coordinate:
    // closeness at scale ||q_n beta|| is data, not noise.
    bool near_pair_flag = false;
};

// Exact law of Phi_n: sort the D*n discontinuities, walk the circle
// accumulating jumps, pin the base value through the zero-mean identity, and
// merge atoms by their (exact) jump offsets. O(Dn log Dn).
PushforwardDistribution pushforward(const StepCocycle& phi, const Int& n,
                                    std::uint64_t piece_budget = kDefaultPieceBudget);

// Exact max-norm audit of the Denjoy-Koksma inequality over pushforward atoms
// at the convergent denominators q_n for n in n_list.
struct DkRow {
    int n = 0;
    Int q;
    bool ok = false;
};
struct DkReport {
    std::vector<DkRow> rows;
    bool all_ok = true;
};
DkReport denjoy_koksma_audit(const StepCocycle& phi, const std::vector<int>& n_list,
                             std::uint64_t piece_budget = kDefaultPieceBudget);

// mu(A_{q,l}) with A_{q,l} = intersection over 1<=s<=l of
// {x : Phi_q(x) = Phi_q(x + s q alpha)}, computed exactly, together with the
// lower bound 1 - 2 D q l ||q alpha|| and the restriction of the law of
// Phi_q to A (needed by the qn00 scan).
struct MesuResult {
    Int q, ell;
    LinearForm measure;
    LinearForm bound;
    bool bound_vacuous = false;  // bound <= 0
    bool bound_holds = false;    // measure > bound (always true unless vacuous)
    std::vector<Atom> atoms_on_A;  // law of Phi_q restricted (not normalized)
};
MesuResult mesu_measure(const StepCocycle& phi, const Int& q, const Int& ell,
                        std::uint64_t piece_budget = kDefaultPieceBudget,
                        bool want_atoms = true);

// The full step structure of Phi_n (sorted breakpoints + per-piece values),
// for witness searches at moderate n.
struct TimeSlice {
    std::uint64_t n = 0;
    Int valden;
    FormVec v_base;
    std::vector<OrbitPoint> pts;
    // offsets[l] * (1/valden) + v_base = value on [pts[l], pts[l+1])
    std::vector<std::array<std::int64_t, 4>> offsets;
    CircleOrbit orbit;
};
TimeSlice time_slice(const StepCocycle& phi, std::uint64_t n,
                     std::uint64_t piece_budget = kDefaultPieceBudget);

}  // namespace rotcoc
