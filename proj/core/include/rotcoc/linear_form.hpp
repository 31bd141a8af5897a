#pragma once

#include "rotcoc/numeric.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rotcoc {

using SymbolId = std::uint32_t;

inline constexpr SymbolId kUnitSymbol = 0;   // the constant 1
inline constexpr SymbolId kAlphaSymbol = 1;  // the rotation number

// Exact rational combination over the session's symbol basis {1, alpha,
// beta_1, ...}. Terms are kept sorted by symbol id with no zero coefficients,
// so two forms are symbolically equal iff their term vectors are equal.
class LinearForm {
public:
    LinearForm() = default;
    LinearForm(Rat constant) {  // implicit: rationals embed as constants
        if (constant != 0) terms_.emplace_back(kUnitSymbol, std::move(constant));
    }
    LinearForm(int constant) : LinearForm(Rat(constant)) {}

    static LinearForm symbol(SymbolId id, Rat coeff = Rat(1)) {
        LinearForm f;
        if (coeff != 0) f.terms_.emplace_back(id, std::move(coeff));
        return f;
    }
    static LinearForm alpha(Rat coeff = Rat(1)) { return symbol(kAlphaSymbol, std::move(coeff)); }

    const std::vector<std::pair<SymbolId, Rat>>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    // True when the form is a plain rational constant.
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].first == kUnitSymbol);
    }
    Rat rational_value() const {  // requires is_rational()
        return terms_.empty() ? Rat(0) : terms_[0].second;
    }
    // True when supported on {1, alpha} only.
    bool in_Q_alpha_Q() const {
        for (const auto& [id, c] : terms_)
            if (id != kUnitSymbol && id != kAlphaSymbol) return false;
        return true;
    }
    // True when of the form m*alpha + k with m, k integers.
    bool in_Z_alpha_Z() const {
        for (const auto& [id, c] : terms_) {
            if (id != kUnitSymbol && id != kAlphaSymbol) return false;
            if (rat_den(c) != 1) return false;
        }
        return true;
    }

    Rat coeff(SymbolId id) const {
        for (const auto& [s, c] : terms_)
            if (s == id) return c;
        return Rat(0);
    }

    LinearForm& operator+=(const LinearForm& o);
    LinearForm& operator-=(const LinearForm& o);
    LinearForm& operator*=(const Rat& c);
    friend LinearForm operator+(LinearForm a, const LinearForm& b) { return a += b; }
    friend LinearForm operator-(LinearForm a, const LinearForm& b) { return a -= b; }
    friend LinearForm operator*(LinearForm a, const Rat& c) { return a *= c; }
    friend LinearForm operator*(const Rat& c, LinearForm a) { return a *= c; }
    LinearForm operator-() const { return LinearForm() - *this; }

    bool operator==(const LinearForm& o) const { return terms_ == o.terms_; }
    bool operator!=(const LinearForm& o) const { return !(*this == o); }

    // Total order usable as a map key (lexicographic on terms).
    bool key_less(const LinearForm& o) const;

    std::string to_string(const std::vector<std::string>& symbol_names = {}) const;

private:
    std::vector<std::pair<SymbolId, Rat>> terms_;
};

using FormVec = std::vector<LinearForm>;

}  // namespace rotcoc
