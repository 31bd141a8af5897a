#include "rotcoc/numeric.hpp"

#include <sstream>

namespace rotcoc {

double to_double(const Rat& r) {
    return r.convert_to<double>();
}

std::string decimal_string(const Rat& r, unsigned digits, bool round_up) {
    Int scale = 1;
    for (unsigned i = 0; i < digits; ++i) scale *= 10;
    Rat scaled = r * Rat(scale);
    Int q = round_up ? rat_ceil(scaled) : rat_floor(scaled);
    bool neg = q < 0;
    Int absq = neg ? Int(-q) : q;
    std::string ds = absq.str();
    if (ds.size() <= digits) ds.insert(0, digits + 1 - ds.size(), '0');
    ds.insert(ds.size() - digits, ".");
    if (neg) ds.insert(0, "-");
    return ds;
}

Interval Interval::dist_to_Z() const {
    if (hi - lo >= 1) return {Rat(0), Rat(1, 2)};
    auto point_dist = [](const Rat& x) {
        Rat f = x - Rat(rat_floor(x));
        Rat d = f <= Rat(1, 2) ? f : Rat(1) - f;
        return d;
    };
    Rat dlo = point_dist(lo), dhi = point_dist(hi);
    Rat out_lo = contains_integer() ? Rat(0) : (dlo < dhi ? dlo : dhi);
    // The max of dist(.,Z) on the interval is 1/2 if a half-integer is inside,
    // otherwise it is attained at an endpoint.
    Rat half_lo = lo - Rat(1, 2);
    bool half_inside = rat_floor(hi - Rat(1, 2)) >= rat_ceil(half_lo);
    Rat out_hi = half_inside ? Rat(1, 2) : (dlo > dhi ? dlo : dhi);
    return {out_lo, out_hi};
}

}  // namespace rotcoc
