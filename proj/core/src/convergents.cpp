#include "rotcoc/convergents.hpp"

#include "rotcoc/session.hpp"

#include <limits>

namespace rotcoc {

ConvergentLadder::ConvergentLadder(PartialQuotients pq) : pq_(std::move(pq)) {
    ladder_.push_back({Int(1), Int(0)});  // n = -1
    ladder_.push_back({Int(0), Int(1)});  // n = 0
}

void ConvergentLadder::grow_to(int n) const {
    while (static_cast<int>(ladder_.size()) - 2 < n && !exhausted_) {
        int next = static_cast<int>(ladder_.size()) - 1;  // index being added
        Int an;
        try {
            an = pq_.digit(static_cast<std::size_t>(next));
        } catch (const std::out_of_range&) {
            exhausted_ = true;
            break;
        }
        const auto& [p1, q1] = ladder_[ladder_.size() - 1];
        const auto& [p2, q2] = ladder_[ladder_.size() - 2];
        ladder_.push_back({an * p1 + p2, an * q1 + q2});
    }
}

void ConvergentLadder::ensure(int n) const {
    grow_to(n);
    if (static_cast<int>(ladder_.size()) - 2 < n)
        throw std::out_of_range("convergent index beyond rational alpha's expansion");
}

int ConvergentLadder::max_index() const {
    if (auto len = pq_.finite_length()) {
        grow_to(static_cast<int>(*len));
        return static_cast<int>(*len);
    }
    return std::numeric_limits<int>::max();
}

Int ConvergentLadder::a(int n) const {
    if (n < 1) throw std::out_of_range("partial quotient index starts at 1");
    ensure(n);
    return pq_.digit(static_cast<std::size_t>(n));
}

Int ConvergentLadder::p(int n) const {
    if (n < -1) throw std::out_of_range("convergent index starts at -1");
    ensure(n);
    return ladder_[static_cast<std::size_t>(n + 1)].first;
}

Int ConvergentLadder::q(int n) const {
    if (n < -1) throw std::out_of_range("convergent index starts at -1");
    ensure(n);
    return ladder_[static_cast<std::size_t>(n + 1)].second;
}

LinearForm ConvergentLadder::theta_form(int n) const {
    return LinearForm::alpha(Rat(q(n))) - LinearForm(Rat(p(n)));
}

LinearForm ConvergentLadder::norm_q_alpha_form(int n) const {
    LinearForm t = theta_form(n);
    return (n % 2 == 0) ? t : -t;
}

Convergent ConvergentLadder::convergent(int n) const {
    return Convergent{n, p(n), q(n), theta_form(n)};
}

std::vector<Convergent> ConvergentLadder::convergents(int n) const {
    std::vector<Convergent> out;
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) out.push_back(convergent(k));
    return out;
}

Interval ConvergentLadder::alpha_interval(const Rat& eps) const {
    // alpha lies strictly between consecutive convergents, and
    // |p_n/q_n - p_{n+1}/q_{n+1}| = 1/(q_n q_{n+1}).
    Int need = rat_ceil(Rat(1) / eps);
    int n = alpha_idx_hint_;
    while (true) {
        grow_to(n + 1);
        if (exhausted_ && static_cast<int>(ladder_.size()) - 2 <= n + 1) {
            // Rational alpha: the last convergent is exact.
            int last = static_cast<int>(ladder_.size()) - 2;
            Rat v(p(last), q(last));
            return {v, v};
        }
        if (q(n) * q(n + 1) >= need) break;
        ++n;
    }
    alpha_idx_hint_ = n;
    Rat a(p(n), q(n)), b(p(n + 1), q(n + 1));
    return a < b ? Interval{a, b} : Interval{b, a};
}

Interval ConvergentLadder::norm_q_alpha_interval(int n, const Rat& eps) const {
    // |theta_n| = |q_n alpha - p_n|; enclose via alpha's interval.
    Interval a = alpha_interval(eps / (Rat(q(n)) + 1));
    Interval t = a.scaled(Rat(q(n))) - Interval(Rat(p(n)));
    return t.abs();
}

int ConvergentLadder::last_index_with_q_at_most(const Int& bound) const {
    int n = 0;
    while (true) {
        grow_to(n + 1);
        bool have_next = static_cast<int>(ladder_.size()) - 2 >= n + 1;
        if (!have_next || q(n + 1) > bound) return n;
        ++n;
    }
}

std::vector<Int> cf_expand_rational(const Rat& x, int depth) {
    if (x <= 0 || x >= 1) throw std::domain_error("cf_expand requires x in (0,1)");
    std::vector<Int> digits;
    Int num = rat_num(x), den = rat_den(x);
    // x = num/den in (0,1): expand 1/x repeatedly (Euclid).
    Int a_cur = den, b_cur = num;  // expanding a/b with a > b
    while (b_cur != 0 && static_cast<int>(digits.size()) < depth) {
        digits.push_back(a_cur / b_cur);
        Int r = a_cur % b_cur;
        a_cur = b_cur;
        b_cur = r;
    }
    return digits;
}

CfAuditReport cf_identity_audit(const Session& sess, int N, const Int& f4_scan_bound) {
    const ConvergentLadder& lad = sess.ladder();
    CfAuditReport report;
    for (int n = 0; n <= N; ++n) {
        lad.ensure(n + 1);
        CfAuditRow row;
        row.n = n;
        row.p = lad.p(n);
        row.q = lad.q(n);

        // (-1)^n = p_{n-1} q_n - p_n q_{n-1}, exact in integers.
        Int det = lad.p(n - 1) * lad.q(n) - lad.p(n) * lad.q(n - 1);
        row.determinant_ok = det == ((n % 2 == 0) ? Int(1) : Int(-1));

        // 1 = q_n ||q_{n+1} a|| + q_{n+1} ||q_n a||. With ||q_k a|| = (-1)^k
        // (q_k a - p_k) this is an exact identity in p, q; the alpha terms
        // cancel, so it reduces to rational arithmetic on the forms.
        LinearForm f1 = LinearForm::symbol(kAlphaSymbol, Rat(0));
        f1 += lad.norm_q_alpha_form(n + 1) * Rat(lad.q(n));
        f1 += lad.norm_q_alpha_form(n) * Rat(lad.q(n + 1));
        row.f1_ok = (f1 == LinearForm(Rat(1)));

        // 1/(q_{n+1}+q_n) <= ||q_n a|| <= 1/q_{n+1}: certified comparisons.
        LinearForm norm_n = lad.norm_q_alpha_form(n);
        bool lo_ok = sess.compare(LinearForm(Rat(1, lad.q(n + 1) + lad.q(n))), norm_n) !=
                     Ordering::Greater;
        bool hi_ok = sess.compare(norm_n, LinearForm(Rat(1, lad.q(n + 1)))) != Ordering::Greater;
        row.f3_ok = lo_ok && hi_ok;

        // ||q_n a|| <= ||k a|| for 1 <= |k| < q_{n+1}: exhaustive scan while
        // q_{n+1} stays within the scan bound (negative k mirror positives).
        if (lad.q(n + 1) <= f4_scan_bound) {
            row.f4_checked = true;
            row.f4_ok = true;
            for (Int k = 1; k < lad.q(n + 1); ++k) {
                LinearForm ka = LinearForm::alpha(Rat(k));
                LinearForm norm_k = sess.dist_to_Z_form(ka);
                if (sess.compare(norm_n, norm_k) == Ordering::Greater) {
                    row.f4_ok = false;
                    report.all_ok = false;
                    break;
                }
            }
        }

        if (!row.determinant_ok || !row.f1_ok || !row.f3_ok) report.all_ok = false;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace rotcoc
