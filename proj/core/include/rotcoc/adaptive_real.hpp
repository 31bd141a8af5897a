#pragma once

#include "rotcoc/linear_form.hpp"
#include "rotcoc/session.hpp"

namespace rotcoc {

// A real number with an on-demand enclosure: a rational center/radius pair
// that can be refined below any requested eps. Backed either by a linear
// form over the session basis or by ||form||.
class AdaptiveReal {
public:
    AdaptiveReal() = default;
    AdaptiveReal(const Session& sess, LinearForm form)
        : sess_(&sess), form_(std::move(form)), dist_(false) {}

    static AdaptiveReal dist_to_Z(const Session& sess, LinearForm form) {
        AdaptiveReal r(sess, std::move(form));
        r.dist_ = true;
        return r;
    }

    // Enclosure of width <= eps (true value always inside).
    Interval at(const Rat& eps) const {
        if (!sess_) return Interval(Rat(0));
        return dist_ ? sess_->dist_to_Z_interval(form_, eps) : sess_->eval(form_, eps);
    }

    Rat center(const Rat& eps) const { return at(eps).center(); }
    Rat radius(const Rat& eps) const { return at(eps).radius(); }

    // Symbolic zero test (exact; used by dist_to_Z(u) == 0 iff u is an
    // integer constant).
    bool known_zero() const {
        if (!sess_) return true;
        if (!dist_) return form_.is_zero();
        return form_.is_rational() && rat_den(form_.rational_value()) == 1;
    }

    const LinearForm& form() const { return form_; }
    bool is_dist() const { return dist_; }
    const Session* session() const { return sess_; }

private:
    const Session* sess_ = nullptr;
    LinearForm form_;
    bool dist_ = false;
};

// cf_expand for adaptive inputs: digits of the continued fraction of x in
// (0,1), certified by refinement. Rational x terminates (canonical form,
// final digit >= 2); otherwise exactly `depth` digits are produced or
// PrecisionExhausted is thrown.
std::vector<Int> cf_expand(const AdaptiveReal& x, int depth, unsigned cap_bits = 256);

}  // namespace rotcoc
