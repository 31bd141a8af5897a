#include "rotcoc/linear_form.hpp"

#include <algorithm>
#include <sstream>

namespace rotcoc {

LinearForm& LinearForm::operator+=(const LinearForm& o) {
    std::vector<std::pair<SymbolId, Rat>> out;
    out.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() || j < o.terms_.size()) {
        if (j == o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
            out.push_back(terms_[i++]);
        } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
            out.push_back(o.terms_[j++]);
        } else {
            Rat c = terms_[i].second + o.terms_[j].second;
            if (c != 0) out.emplace_back(terms_[i].first, std::move(c));
            ++i, ++j;
        }
    }
    terms_ = std::move(out);
    return *this;
}

LinearForm& LinearForm::operator-=(const LinearForm& o) {
    LinearForm neg = o;
    for (auto& [id, c] : neg.terms_) c = -c;
    return *this += neg;
}

LinearForm& LinearForm::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [id, v] : terms_) v *= c;
    return *this;
}

bool LinearForm::key_less(const LinearForm& o) const {
    std::size_t n = std::min(terms_.size(), o.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (terms_[i].first != o.terms_[i].first) return terms_[i].first < o.terms_[i].first;
        if (terms_[i].second != o.terms_[i].second) return terms_[i].second < o.terms_[i].second;
    }
    return terms_.size() < o.terms_.size();
}

std::string LinearForm::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [id, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        first = false;
        Rat a = rat_abs(c);
        std::string sym;
        if (id == kUnitSymbol) sym = "";
        else if (id == kAlphaSymbol) sym = "alpha";
        else if (id < names.size() && !names[id].empty()) sym = names[id];
        else sym = "b" + std::to_string(id);
        if (sym.empty()) {
            os << a;
        } else {
            if (a == 1) os << sym;
            else os << a << "*" << sym;
        }
    }
    return os.str();
}

}  // namespace rotcoc
