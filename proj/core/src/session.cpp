#include "rotcoc/session.hpp"

#include "rotcoc/adaptive_real.hpp"

#include <boost/multiprecision/integer.hpp>

#include <sstream>

namespace rotcoc {

namespace {

// floor(sqrt(v) * 2^bits exact-direction enclosure) for rational v >= 0.
Interval sqrt_interval(const Rat& v, unsigned bits) {
    if (v == 0) return Interval(Rat(0));
    // sqrt(a/b) = sqrt(a*b)/b. Work with s = isqrt(a*b*4^k).
    Int a = rat_num(v), b = rat_den(v);
    Int scaled = a * b;
    scaled <<= 2 * bits;
    Int s = boost::multiprecision::sqrt(scaled);  // floor sqrt
    Int den = b << bits;
    return {Rat(s, den), Rat(s + 1, den)};
}

u128 wrap_u128(const Int& v) {
    Int m = v & ((Int(1) << 128) - 1);
    u128 lo = static_cast<std::uint64_t>((m & Int(0xffffffffffffffffULL)).convert_to<std::uint64_t>());
    u128 hi = static_cast<std::uint64_t>(((m >> 64) & Int(0xffffffffffffffffULL)).convert_to<std::uint64_t>());
    return (hi << 64) | lo;
}

}  // namespace

Session::Session(PartialQuotients pq, unsigned precision_cap_bits)
    : ladder_(std::move(pq)), cap_bits_(precision_cap_bits) {}

LinearForm Session::declare_beta(const std::string& name, const LinearForm& combination) {
    (void)name;  // declared betas are eliminated; nothing to register
    if (!combination.in_Q_alpha_Q())
        throw ParseError("declared beta must be a combination of {1, alpha}");
    return combination;
}

LinearForm Session::register_rational_beta(const std::string& name, const Rat& value,
                                           bool not_in_Zalpha, bool independent) {
    if (!not_in_Zalpha && !independent) return LinearForm(value);
    BetaDef def;
    def.name = name;
    def.kind = BetaDef::Eval::Rational;
    def.rational = value;
    def.not_in_Zalpha = not_in_Zalpha;
    def.independent = independent;
    betas_.push_back(std::move(def));
    return LinearForm::symbol(static_cast<SymbolId>(betas_.size() + 1));
}

LinearForm Session::register_sqrt_beta(const std::string& name, const Rat& radicand,
                                       const Rat& shift, bool not_in_Zalpha, bool independent) {
    if (radicand < 0) throw ParseError("sqrt beta needs a nonnegative radicand");
    {
        // Perfect squares collapse to rationals.
        Int a = rat_num(radicand), b = rat_den(radicand);
        Int sa = boost::multiprecision::sqrt(a), sb = boost::multiprecision::sqrt(b);
        if (sa * sa == a && sb * sb == b) return LinearForm(Rat(sa, sb) + shift);
    }
    BetaDef def;
    def.name = name;
    def.kind = BetaDef::Eval::Sqrt;
    def.radicand = radicand;
    def.shift = shift;
    def.not_in_Zalpha = not_in_Zalpha;
    def.independent = independent;
    betas_.push_back(std::move(def));
    return LinearForm::symbol(static_cast<SymbolId>(betas_.size() + 1));
}

LinearForm Session::register_theta_sum_beta(const std::string& name,
                                            std::vector<std::pair<int, Int>> digits) {
    BetaDef def;
    def.name = name;
    def.kind = BetaDef::Eval::ThetaSum;
    def.digits = std::move(digits);
    // Reduce sum b_n theta_n = M alpha - K into [0,1) once, exactly.
    Rat m(0), k(0);
    for (const auto& [n, b] : def.digits) {
        m += Rat(b * ladder_.q(n));
        k += Rat(b * ladder_.p(n));
    }
    LinearForm hidden = LinearForm::alpha(m) - LinearForm(k);
    Int fl = floor_certified(hidden);
    def.h_alpha = m;
    def.h_unit = -k - Rat(fl);
    betas_.push_back(std::move(def));
    return LinearForm::symbol(static_cast<SymbolId>(betas_.size() + 1));
}

const BetaDef* Session::beta_def(SymbolId id) const {
    if (id < 2 || id - 2 >= betas_.size()) return nullptr;
    return &betas_[id - 2];
}

std::vector<std::string> Session::symbol_names() const {
    std::vector<std::string> names(betas_.size() + 2);
    names[kUnitSymbol] = "1";
    names[kAlphaSymbol] = "alpha";
    for (std::size_t i = 0; i < betas_.size(); ++i) names[i + 2] = betas_[i].name;
    return names;
}

Interval Session::symbol_interval(SymbolId id, const Rat& eps) const {
    if (id == kUnitSymbol) return Interval(Rat(1));
    if (id == kAlphaSymbol) return ladder_.alpha_interval(eps);
    const BetaDef* def = beta_def(id);
    if (!def) throw std::out_of_range("unknown symbol id");
    if (def->has_cached && def->cached.width() <= eps) return def->cached;
    Interval out;
    switch (def->kind) {
        case BetaDef::Eval::Rational:
            out = Interval(def->rational);
            break;
        case BetaDef::Eval::Sqrt: {
            unsigned bits = 1;
            Rat e = Rat(1, 2);
            while (e > eps / 2) {
                ++bits;
                e /= 2;
            }
            Interval s = sqrt_interval(def->radicand, bits + 1);
            out = {s.lo + def->shift, s.hi + def->shift};
            break;
        }
        case BetaDef::Eval::ThetaSum: {
            Rat scale = rat_abs(def->h_alpha) + 1;
            Interval a = ladder_.alpha_interval(eps / scale);
            out = a.scaled(def->h_alpha) + Interval(def->h_unit);
            break;
        }
    }
    def->cached = out;
    def->has_cached = true;
    return out;
}

Interval Session::eval(const LinearForm& f, const Rat& eps) const {
    if (f.is_zero()) return Interval(Rat(0));
    Rat each = eps / Rat(Int(f.terms().size()));
    Interval acc(Rat(0));
    for (const auto& [id, c] : f.terms()) {
        if (id == kUnitSymbol) {
            acc = acc + Interval(c);
            continue;
        }
        Rat target = each / (rat_abs(c) + 1);
        acc = acc + symbol_interval(id, target).scaled(c);
    }
    return acc;
}

bool Session::enclosure_strict(const LinearForm& f) const {
    // eval() encloses strictly (true value in the open interval) as soon as
    // one symbol's enclosure is strict: alpha sits strictly between
    // consecutive convergents, and irrational betas come from strict
    // brackets. Symbols with exact rational values yield point intervals.
    for (const auto& [id, c] : f.terms()) {
        if (id == kAlphaSymbol) return true;
        if (const BetaDef* def = beta_def(id); def && def->kind != BetaDef::Eval::Rational)
            return true;
    }
    return false;
}

Ordering Session::compare(const LinearForm& a, const LinearForm& b) const {
    return compare(a, b, cap_bits_);
}

Ordering Session::compare(const LinearForm& a, const LinearForm& b, unsigned cap_bits) const {
    if (a == b) return Ordering::Equal;
    LinearForm d = a - b;
    if (d.is_rational()) return d.rational_value() > 0 ? Ordering::Greater : Ordering::Less;
    bool strict = enclosure_strict(d);
    unsigned bits = 24;
    while (true) {
        Interval v = eval(d, pow2_inv(bits));
        if (strict) {
            // value lies in the open interval (lo, hi)
            if (v.lo >= 0) return Ordering::Greater;
            if (v.hi <= 0) return Ordering::Less;
        } else {
            // all symbols exact: the interval is a point
            if (v.lo > 0) return Ordering::Greater;
            if (v.hi < 0) return Ordering::Less;
            throw UndecidableAtCap(
                "compare: symbolically distinct forms with exactly equal values: " +
                form_to_string(a) + " vs " + form_to_string(b) + " (declare the relation)");
        }
        if (bits >= cap_bits)
            throw UndecidableAtCap("compare: enclosures still overlap at 2^-" +
                                   std::to_string(cap_bits) + " for " + form_to_string(d) +
                                   " vs 0 (likely an undeclared relation)");
        bits *= 2;
        if (bits > cap_bits) bits = cap_bits;
    }
}

int Session::sign(const LinearForm& f) const {
    if (f.is_zero()) return 0;
    switch (compare(f, LinearForm())) {
        case Ordering::Less: return -1;
        case Ordering::Greater: return 1;
        default: return 0;
    }
}

Int Session::floor_certified(const LinearForm& f) const {
    if (f.is_rational()) return rat_floor(f.rational_value());
    bool strict = enclosure_strict(f);
    unsigned bits = 24;
    while (true) {
        Interval v = eval(f, pow2_inv(bits));
        Int flo = rat_floor(v.lo), fhi = rat_floor(v.hi);
        if (flo == fhi) return flo;
        // With a strict enclosure the value sits in (lo, hi); exact integer
        // endpoints are then excluded.
        if (strict && fhi == flo + 1 && v.hi == Rat(fhi)) return flo;
        if (strict && v.lo == Rat(flo) && v.hi == Rat(flo + 1)) return flo;
        if (!strict)
            throw UndecidableAtCap("floor: exactly-integer value of a symbolic form: " +
                                   form_to_string(f));
        if (bits >= cap_bits_)
            throw UndecidableAtCap("floor: value within 2^-" + std::to_string(cap_bits_) +
                                   " of an integer: " + form_to_string(f));
        bits *= 2;
        if (bits > cap_bits_) bits = cap_bits_;
    }
}

Interval Session::dist_to_Z_interval(const LinearForm& f, const Rat& eps) const {
    if (f.is_rational()) {
        Rat v = f.rational_value();
        Rat fr = v - Rat(rat_floor(v));
        Rat d = fr <= Rat(1, 2) ? fr : Rat(1) - fr;
        return Interval(d);
    }
    return eval(f, eps).dist_to_Z();
}

LinearForm Session::dist_to_Z_form(const LinearForm& f) const {
    if (f.is_rational()) {
        Rat v = f.rational_value();
        Rat fr = v - Rat(rat_floor(v));
        return LinearForm(fr <= Rat(1, 2) ? fr : Rat(1) - fr);
    }
    Int m = floor_certified(f + LinearForm(Rat(1, 2)));  // nearest integer
    LinearForm diff = f - LinearForm(Rat(m));
    int s = sign(diff);
    return s >= 0 ? diff : -diff;
}

u128 Session::key128(const LinearForm& f) const {
    static const Rat kKeyEps = pow2_inv(140);
    Interval v = eval(f, kKeyEps);
    Rat scaled = v.lo * Rat(Int(1) << 128);
    return wrap_u128(rat_floor(scaled));
}

u128 Session::alpha_key128() const {
    if (!alpha_key_) alpha_key_ = key128(LinearForm::alpha());
    return *alpha_key_;
}

namespace {

std::vector<std::string> split_colon(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ':') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Rat parse_rat_token(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return Rat(Int(tok));
    return Rat(Int(tok.substr(0, slash)), Int(tok.substr(slash + 1)));
}

// "c1*alpha+c0" | "c1*alpha-c0" | "c0" | "alpha" with rational tokens.
LinearForm parse_alpha_combo(const std::string& expr) {
    std::string s = expr;
    // Normalize: strip spaces.
    std::string t;
    for (char c : s)
        if (c != ' ') t += c;
    auto pos = t.find("alpha");
    if (pos == std::string::npos) return LinearForm(parse_rat_token(t));
    std::string coeff = t.substr(0, pos);
    if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
    Rat c1 = coeff.empty()   ? Rat(1)
             : coeff == "-"  ? Rat(-1)
                             : parse_rat_token(coeff);
    std::string rest = t.substr(pos + 5);
    Rat c0(0);
    if (!rest.empty()) {
        if (rest[0] == '+') c0 = parse_rat_token(rest.substr(1));
        else if (rest[0] == '-') c0 = -parse_rat_token(rest.substr(1));
        else throw ParseError("cannot parse beta relation: " + expr);
    }
    return LinearForm::alpha(c1) + LinearForm(c0);
}

}  // namespace

LinearForm Session::parse_beta(const std::string& name, const std::string& value_spec,
                               const std::string& relation_spec) {
    bool indep = false, notz = false;
    if (relation_spec == "indep") indep = true;
    else if (relation_spec == "notZalphaZ") notz = true;
    else if (!relation_spec.empty() && relation_spec[0] == '=') {
        std::string expr = relation_spec.substr(1);
        bool mod = expr.rfind("mod1:", 0) == 0;
        if (mod) expr = expr.substr(5);
        LinearForm combo = parse_alpha_combo(expr);
        if (mod) combo = mod1(combo);
        return declare_beta(name, combo);
    } else if (!relation_spec.empty()) {
        throw ParseError("unrecognized beta relation: " + relation_spec);
    }

    auto parts = split_colon(value_spec);
    if (parts[0] == "sqrt") {
        if (parts.size() < 2) throw ParseError("sqrt beta needs a radicand: " + value_spec);
        Rat shift = parts.size() > 2 ? parse_rat_token(parts[2]) : Rat(0);
        return register_sqrt_beta(name, parse_rat_token(parts[1]), shift, notz, indep);
    }
    if (parts[0] == "theta") {
        if (parts.size() != 2) throw ParseError("theta beta needs an index: " + value_spec);
        int n = std::stoi(parts[1]);
        return register_theta_sum_beta(name, {{n, Int(1)}});
    }
    if (parts[0] == "thetasum") {
        if (parts.size() != 2) throw ParseError("thetasum beta needs a range: " + value_spec);
        auto dash = parts[1].find('-');
        if (dash == std::string::npos)
            throw ParseError("thetasum range must be n0-n1: " + value_spec);
        int n0 = std::stoi(parts[1].substr(0, dash));
        int n1 = std::stoi(parts[1].substr(dash + 1));
        std::vector<std::pair<int, Int>> digits;
        for (int n = n0; n <= n1; ++n) digits.push_back({n, Int(1)});
        return register_theta_sum_beta(name, std::move(digits));
    }
    // Plain rational value.
    Rat v = parse_rat_token(value_spec);
    return register_rational_beta(name, v, notz, indep);
}

std::vector<Int> cf_expand(const AdaptiveReal& x, int depth, unsigned cap_bits) {
    if (x.session() && !x.is_dist() && x.form().is_rational())
        return cf_expand_rational(x.form().rational_value(), depth);
    if (!x.session()) throw std::domain_error("cf_expand: empty adaptive real");

    // Certified digit extraction: track x_k as an interval, refine the source
    // when a floor is ambiguous. Restart from scratch at higher precision
    // since the interval arithmetic here degrades multiplicatively.
    unsigned bits = 64;
    while (true) {
        Interval v = x.at(pow2_inv(bits));
        std::vector<Int> digits;
        bool ok = true;
        Interval cur = v;
        for (int i = 0; i < depth; ++i) {
            if (cur.lo <= 0) {
                ok = cur.hi > Rat(1, Int(1) << (bits / 2));  // can't certify positivity
                break;  // rational termination cannot be certified from an enclosure
            }
            // 1/cur
            Interval inv{Rat(1) / cur.hi, Rat(1) / cur.lo};
            Int flo = rat_floor(inv.lo), fhi = rat_floor(inv.hi);
            if (flo != fhi) {
                ok = false;
                break;
            }
            digits.push_back(flo);
            cur = {inv.lo - Rat(flo), inv.hi - Rat(flo)};
        }
        if (ok && static_cast<int>(digits.size()) == depth) return digits;
        if (bits >= cap_bits)
            throw PrecisionExhausted("cf_expand: refinement cap 2^-" + std::to_string(cap_bits) +
                                     " reached before " + std::to_string(depth) +
                                     " digits were certain");
        bits *= 2;
        if (bits > cap_bits) bits = cap_bits;
    }
}

}  // namespace rotcoc
