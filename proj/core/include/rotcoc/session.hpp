#pragma once

#include "rotcoc/convergents.hpp"
#include "rotcoc/linear_form.hpp"
#include "rotcoc/numeric.hpp"
#include "rotcoc/partial_quotients.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotcoc {

enum class Ordering { Less, Equal, Greater };

using u128 = unsigned __int128;

// How a registered beta is evaluated numerically. Betas declared as rational
// combinations of {1, alpha} never become symbols: registration returns the
// combination directly and the symbol is eliminated.
struct BetaDef {
    enum class Eval { Rational, Sqrt, ThetaSum };

    std::string name;
    Eval kind = Eval::Rational;
    Rat rational;                              // Eval::Rational
    Rat radicand;                              // Eval::Sqrt: value = sqrt(radicand) + shift
    Rat shift;
    std::vector<std::pair<int, Int>> digits;   // Eval::ThetaSum: sum b_n theta_n mod 1
    Rat h_alpha, h_unit;                       // ThetaSum reduced value = h_alpha*alpha + h_unit
    bool not_in_Zalpha = false;                // declared beta not in Z alpha + Z
    bool independent = false;                  // declared independent of {1, alpha} over Q

    // Evaluation cache.
    mutable Interval cached;
    mutable bool has_cached = false;
};

// One alpha plus a registry of circle points (betas) with their numeric
// evaluators and declared relations. All exact evaluation, certified
// comparison and fixed-point key extraction for the whole library routes
// through here. Immutable values; refinement only tightens caches, so a
// Session is safe to share across read-only scans.
class Session {
public:
    explicit Session(PartialQuotients pq, unsigned precision_cap_bits = 256);

    const ConvergentLadder& ladder() const { return ladder_; }
    const PartialQuotients& pq() const { return ladder_.pq(); }
    unsigned precision_cap_bits() const { return cap_bits_; }
    Rat precision_cap() const { return pow2_inv(cap_bits_); }

    // --- beta registration ---------------------------------------------

    // Declared as an exact combination of {1, alpha}: eliminated on the spot.
    LinearForm declare_beta(const std::string& name, const LinearForm& combination);

    LinearForm register_rational_beta(const std::string& name, const Rat& value,
                                      bool not_in_Zalpha = false, bool independent = false);
    LinearForm register_sqrt_beta(const std::string& name, const Rat& radicand, const Rat& shift,
                                  bool not_in_Zalpha = false, bool independent = false);
    // beta = { sum_n b_n theta_n } (reduced into [0,1)); digit data retained
    // for Ostrowski-side diagnostics. The relation to Z alpha + Z stays
    // undeclared unless `reveal` is set.
    LinearForm register_theta_sum_beta(const std::string& name,
                                       std::vector<std::pair<int, Int>> digits);

    const BetaDef* beta_def(SymbolId id) const;
    std::vector<std::string> symbol_names() const;
    std::string form_to_string(const LinearForm& f) const { return f.to_string(symbol_names()); }

    // Parse a beta value spec: "p/q" | "sqrt:r[:shift]" | "theta:n" |
    // "thetasum:n0-n1" | "alpha*c+d" via declare. See README for the grammar.
    LinearForm parse_beta(const std::string& name, const std::string& value_spec,
                          const std::string& relation_spec = {});

    // --- evaluation ------------------------------------------------------

    // Enclosure of the form's value with width <= eps.
    Interval eval(const LinearForm& f, const Rat& eps) const;

    // Certified three-way comparison. Equal only on symbolic equality;
    // otherwise refines down to the cap and throws UndecidableAtCap if the
    // enclosures never separate.
    Ordering compare(const LinearForm& a, const LinearForm& b) const;
    Ordering compare(const LinearForm& a, const LinearForm& b, unsigned cap_bits) const;

    int sign(const LinearForm& f) const;  // -1, 0 (symbolic only), +1
    bool less(const LinearForm& a, const LinearForm& b) const {
        return compare(a, b) == Ordering::Less;
    }
    bool less_eq(const LinearForm& a, const LinearForm& b) const {
        return compare(a, b) != Ordering::Greater;
    }

    // Certified integer part / fractional part (throws UndecidableAtCap when
    // the value sits on an integer that is not symbolically visible).
    Int floor_certified(const LinearForm& f) const;
    LinearForm mod1(const LinearForm& f) const { return f - LinearForm(Rat(floor_certified(f))); }

    // ||f|| = distance to the nearest integer, as an enclosure of width <= eps.
    Interval dist_to_Z_interval(const LinearForm& f, const Rat& eps) const;
    // Exact form of ||f||: s * (f - m) for certified m and sign s. Throws when
    // f is symbolically half-integral-ambiguous only at the cap.
    LinearForm dist_to_Z_form(const LinearForm& f) const;

    // --- fixed-point keys --------------------------------------------------

    // floor-approximation of frac(f) * 2^128 with absolute error <= kKeySlackUlps.
    static constexpr u128 kKeySlackUlps = (u128(1) << 44);
    u128 key128(const LinearForm& f) const;
    u128 alpha_key128() const;  // cached floor(alpha * 2^128), error <= 1 ulp

private:
    friend class AdaptiveReal;

    Interval symbol_interval(SymbolId id, const Rat& eps) const;
    bool enclosure_strict(const LinearForm& f) const;

    ConvergentLadder ladder_;
    unsigned cap_bits_;
    std::vector<BetaDef> betas_;  // symbol id = index + 2
    mutable std::optional<u128> alpha_key_;
};

}  // namespace rotcoc
