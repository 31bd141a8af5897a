#include "rotcoc/partial_quotients.hpp"

#include <sstream>

namespace rotcoc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Int> parse_int_list(const std::string& body, const std::string& spec) {
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw ParseError("expected [..] list in alpha spec: " + spec);
    std::vector<Int> vals;
    for (const auto& tok : split(body.substr(1, body.size() - 2), ',')) {
        if (tok.empty()) throw ParseError("empty entry in alpha spec: " + spec);
        Int v(tok);
        if (v < 1) throw ParseError("partial quotients must be >= 1: " + spec);
        vals.push_back(v);
    }
    if (vals.empty()) throw ParseError("empty list in alpha spec: " + spec);
    return vals;
}

Rat parse_rat(const std::string& tok) {
    auto slash = tok.find('/');
    if (slash == std::string::npos) return Rat(Int(tok));
    return Rat(Int(tok.substr(0, slash)), Int(tok.substr(slash + 1)));
}

}  // namespace

PartialQuotients PartialQuotients::periodic(std::vector<Int> block, std::string label) {
    PartialQuotients pq;
    pq.kind_ = Kind::Periodic;
    pq.block_ = std::move(block);
    pq.bounded_ = true;
    if (label.empty()) {
        std::ostringstream os;
        os << "periodic:[";
        for (std::size_t i = 0; i < pq.block_.size(); ++i)
            os << (i ? "," : "") << pq.block_[i];
        os << "]";
        label = os.str();
    }
    pq.spec_ = std::move(label);
    for (const Int& a : pq.block_)
        if (a < 1) throw ParseError("partial quotients must be >= 1");
    return pq;
}

PartialQuotients PartialQuotients::list(std::vector<Int> digits) {
    PartialQuotients pq;
    pq.kind_ = Kind::List;
    pq.block_ = std::move(digits);
    pq.bounded_ = true;
    std::ostringstream os;
    os << "list:[";
    for (std::size_t i = 0; i < pq.block_.size(); ++i)
        os << (i ? "," : "") << pq.block_[i];
    os << "]";
    pq.spec_ = os.str();
    for (const Int& a : pq.block_)
        if (a < 1) throw ParseError("partial quotients must be >= 1");
    return pq;
}

PartialQuotients PartialQuotients::poly(std::vector<Rat> coeffs) {
    PartialQuotients pq;
    pq.kind_ = Kind::Poly;
    pq.coeffs_ = std::move(coeffs);
    // Constant polynomials are bounded; anything else is presumed unbounded.
    pq.bounded_ = true;
    for (std::size_t i = 1; i < pq.coeffs_.size(); ++i)
        if (pq.coeffs_[i] != 0) pq.bounded_ = false;
    std::ostringstream os;
    os << "formula:poly:";
    for (std::size_t i = 0; i < pq.coeffs_.size(); ++i)
        os << (i ? "," : "") << rat_num(pq.coeffs_[i]);
    pq.spec_ = os.str();
    return pq;
}

PartialQuotients PartialQuotients::pow2() {
    PartialQuotients pq;
    pq.kind_ = Kind::Pow2;
    pq.bounded_ = false;
    pq.spec_ = "formula:pow2";
    return pq;
}

PartialQuotients PartialQuotients::parse(const std::string& spec) {
    if (spec == "golden") return golden();
    if (spec == "sqrt2m1") return sqrt2m1();
    if (spec.rfind("periodic:", 0) == 0)
        return periodic(parse_int_list(spec.substr(9), spec), spec);
    if (spec.rfind("list:", 0) == 0)
        return list(parse_int_list(spec.substr(5), spec));
    if (spec == "formula:pow2") return pow2();
    if (spec.rfind("formula:poly:", 0) == 0) {
        std::vector<Rat> coeffs;
        for (const auto& tok : split(spec.substr(13), ',')) {
            if (tok.empty()) throw ParseError("empty coefficient in alpha spec: " + spec);
            coeffs.push_back(parse_rat(tok));
        }
        return poly(std::move(coeffs));
    }
    throw ParseError("unrecognized alpha spec: " + spec);
}

Int PartialQuotients::digit(std::size_t n) const {
    if (n == 0) throw std::out_of_range("partial quotient index starts at 1");
    switch (kind_) {
        case Kind::Periodic:
            return block_[(n - 1) % block_.size()];
        case Kind::List:
            if (n > block_.size())
                throw std::out_of_range("finite partial-quotient list exhausted");
            return block_[n - 1];
        case Kind::Poly: {
            Rat v(0);
            Rat x(1);
            Rat nn{Int(n)};
            for (const Rat& c : coeffs_) {
                v += c * x;
                x *= nn;
            }
            Int r = rat_round(v);
            return r < 1 ? Int(1) : r;
        }
        case Kind::Pow2:
            return Int(1) << static_cast<unsigned>(n);
    }
    throw std::logic_error("unreachable");
}

std::optional<std::size_t> PartialQuotients::finite_length() const {
    if (kind_ == Kind::List) return block_.size();
    return std::nullopt;
}

}  // namespace rotcoc
