#pragma once

#include "rotcoc/linear_form.hpp"
#include "rotcoc/numeric.hpp"
#include "rotcoc/partial_quotients.hpp"

#include <vector>

namespace rotcoc {

// One convergent p_n/q_n together with theta_n = q_n alpha - p_n.
// sign(theta_n) = (-1)^n and |theta_n| = ||q_n alpha||.
struct Convergent {
    int n = 0;
    Int p, q;
    LinearForm theta;  // q_n * alpha - p_n
};

// The exact p_n/q_n ladder of an alpha given by its partial quotients.
// Seeds: p_{-1}=1, p_0=0, q_{-1}=0, q_0=1.
class ConvergentLadder {
public:
    explicit ConvergentLadder(PartialQuotients pq);

    const PartialQuotients& pq() const { return pq_; }

    // Largest index available (grows on demand; finite for rational alpha).
    int max_index() const;
    bool is_rational_alpha() const { return pq_.is_finite(); }

    void ensure(int n) const;

    Int a(int n) const;  // partial quotient a_n, n >= 1
    Int p(int n) const;  // n >= -1
    Int q(int n) const;  // n >= -1
    Convergent convergent(int n) const;
    std::vector<Convergent> convergents(int n) const;  // k = 0..n

    // theta_n = q_n alpha - p_n as an exact form.
    LinearForm theta_form(int n) const;
    // ||q_n alpha|| = (-1)^n theta_n as an exact form.
    LinearForm norm_q_alpha_form(int n) const;

    // Exact rational enclosure of alpha with width <= eps.
    Interval alpha_interval(const Rat& eps) const;
    // Enclosure of |theta_n| without descending further than needed.
    Interval norm_q_alpha_interval(int n, const Rat& eps) const;

    // Index of the largest q_n <= bound (at least 0). For rational alpha the
    // ladder may end first.
    int last_index_with_q_at_most(const Int& bound) const;

private:
    void grow_to(int n) const;

    PartialQuotients pq_;
    // ladder_[i] holds (p, q) for index n = i - 1 (so ladder_[0] is n = -1).
    mutable std::vector<std::pair<Int, Int>> ladder_;
    mutable bool exhausted_ = false;
    mutable int alpha_idx_hint_ = 0;  // monotone start for alpha_interval's search
};

// Continued-fraction expansion of a rational x in (0,1), canonical form
// (final digit >= 2). Returns at most `depth` digits; rational expansions
// terminate early.
std::vector<Int> cf_expand_rational(const Rat& x, int depth);

// Audit report for the exact continued-fraction identities (determinant
// identity, 1 = q_n ||q_{n+1} a|| + q_{n+1} ||q_n a||, the two-sided bounds
// on ||q_n alpha||, and best approximation among 1 <= |k| < q_{n+1} checked
// exhaustively at small n).
struct CfAuditRow {
    int n = 0;
    Int p, q;
    bool determinant_ok = false;
    bool f1_ok = false;
    bool f3_ok = false;
    bool f4_checked = false;  // exhaustive scan only run while q_{n+1} is small
    bool f4_ok = false;
};

struct CfAuditReport {
    std::vector<CfAuditRow> rows;
    bool all_ok = true;
};

class Session;
CfAuditReport cf_identity_audit(const Session& sess, int N, const Int& f4_scan_bound = Int(4096));

}  // namespace rotcoc
