#pragma once

#include "rotcoc/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rotcoc {

// The partial-quotient sequence a_1, a_2, ... of an irrational (or, for
// finite lists, rational) alpha in (0,1). alpha is never held as a float:
// every numeric question routes through the convergent ladder built on top
// of this generator.
//
// Spec grammar accepted by parse():
//   golden                  a_n = 1
//   sqrt2m1                 a_n = 2            (alpha = sqrt(2) - 1)
//   periodic:[a1,...,ak]    eventually periodic, repeating the block
//   list:[a1,...,an]        finite list => rational alpha
//   formula:poly:c0,c1,...  a_n = max(1, round(c0 + c1 n + c2 n^2 + ...))
//   formula:pow2            a_n = 2^n
class PartialQuotients {
public:
    enum class Kind { Periodic, List, Poly, Pow2 };

    static PartialQuotients golden() { return periodic({Int(1)}, "golden"); }
    static PartialQuotients sqrt2m1() { return periodic({Int(2)}, "sqrt2m1"); }
    static PartialQuotients periodic(std::vector<Int> block, std::string label = {});
    static PartialQuotients list(std::vector<Int> digits);
    static PartialQuotients poly(std::vector<Rat> coeffs);
    static PartialQuotients pow2();

    static PartialQuotients parse(const std::string& spec);

    // a_n for n >= 1. Throws std::out_of_range past the end of a finite list.
    Int digit(std::size_t n) const;

    // Number of digits for a finite (rational) spec; nullopt when infinite.
    std::optional<std::size_t> finite_length() const;
    bool is_finite() const { return finite_length().has_value(); }

    // True when the sequence is known to be bounded.
    bool bounded_hint() const { return bounded_; }

    const std::string& spec_string() const { return spec_; }

private:
    PartialQuotients() = default;

    Kind kind_ = Kind::Periodic;
    std::vector<Int> block_;   // Periodic / List
    std::vector<Rat> coeffs_;  // Poly
    bool bounded_ = false;
    std::string spec_;
};

}  // namespace rotcoc
