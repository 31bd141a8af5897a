#pragma once

#include "rotcoc/linear_form.hpp"
#include "rotcoc/session.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotcoc {

struct CocyclePiece {
    LinearForm lo, hi;  // half-open [lo, hi) in [0,1]
    FormVec value;      // R^d value on the piece
};

struct Discontinuity {
    LinearForm x;  // position in [0,1)
    FormVec jump;  // value(x+) - value(x-)
};

// An R^d-valued step cocycle over the session's rotation, canonicalized:
// pieces partition [0,1), adjacent equal-valued pieces merged, zero mean
// enforced at construction by subtracting the exact mean (reported).
class StepCocycle {
public:
    static StepCocycle make(const Session& sess, int d, std::vector<CocyclePiece> pieces);

    // 1_{[0,beta)} - beta.
    static StepCocycle indicator(const Session& sess, const LinearForm& beta);
    // Phi_d = (1_{[0,beta_j)} - beta_j)_{j=1..d}.
    static StepCocycle phi_d(const Session& sess, const FormVec& betas);
    // The quotient cocycle of Psi_{d+1} by the diagonal:
    // (1_{[0,1-beta_j)} - 1 + beta_j)_{j=1..d}.
    static StepCocycle diagonal_quotient(const Session& sess, const FormVec& betas);
    // Rational linear combinations sum_i coeffs[i] * parts[i] (values mapped,
    // partitions refined). All parts must share the session.
    static StepCocycle combine(const Session& sess, const std::vector<Rat>& coeffs,
                               const std::vector<const StepCocycle*>& parts);
    // Coordinate image under a rational matrix M (rows x cols = dout x d).
    StepCocycle apply_matrix(const std::vector<std::vector<Rat>>& m) const;

    const Session& session() const { return *sess_; }
    int dim() const { return d_; }
    const std::vector<CocyclePiece>& pieces() const { return pieces_; }
    const std::vector<Discontinuity>& discontinuities() const { return discs_; }
    int D() const { return static_cast<int>(discs_.size()); }
    const FormVec& subtracted_mean() const { return mean_shift_; }

    // V(phi^j) = sum of |jump_j| over discontinuities.
    LinearForm variation(int j) const;
    // The integer window F = {|l| <= L+1} with L = max_j ceil(V(phi^j)).
    Int window_bound() const;

    // Value at a continuity point (certified lookup; throws UndecidableAtCap
    // at a discontinuity that cannot be resolved).
    FormVec value_at(const LinearForm& x) const;

    // Exact Birkhoff sum phi_n(x); negative n via the cocycle identity.
    FormVec birkhoff(const Int& n, const LinearForm& x) const;

    bool all_values_rational() const;

    std::string describe() const;

private:
    StepCocycle() = default;

    const Session* sess_ = nullptr;
    int d_ = 0;
    std::vector<CocyclePiece> pieces_;
    std::vector<Discontinuity> discs_;
    FormVec mean_shift_;
};

// Remark-notAlpha normalization: whenever two discontinuities differ by a
// *symbolically visible* element of Z alpha + Z, one of them is removed by
// adding the explicit coboundary of 1_{[x_k, x_i)} - mu; the log records each
// subtraction so the original can be reconstructed.
struct TransferLogEntry {
    LinearForm removed, kept;
    FormVec jump;        // jump transferred
    LinearForm arc_len;  // mu of the arc used
};

struct NormalizeResult {
    StepCocycle cocycle;
    std::vector<TransferLogEntry> log;
};

NormalizeResult normalize_discontinuities(const StepCocycle& phi);

// Rationality analysis per coordinate (values in a coset of Q decided
// symbolically).
struct CoordinateRationality {
    bool rational = false;
    LinearForm coset_rep;       // w with t_i in w + Q
    std::vector<Rat> c;         // rational coefficients per piece (t_i = w + c_i... c_i = t_i - w)
    LinearForm beta_literal;    // phi^j = sum c_i 1_{I_i} - beta_literal
    Int multiplier = 1;         // minimal integer making the c_i integral
};

struct RationalityReport {
    std::vector<CoordinateRationality> coords;
    bool all_rational = false;
    Int global_multiplier = 1;  // lcm over coordinates (1 when not all rational)
};

RationalityReport rationality_analysis(const StepCocycle& phi);

}  // namespace rotcoc
