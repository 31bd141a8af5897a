#include "rotcoc/step_cocycle.hpp"

#include <algorithm>
#include <sstream>

namespace rotcoc {

namespace {

bool formvec_equal(const FormVec& a, const FormVec& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return false;
    return true;
}

bool formvec_zero(const FormVec& a) {
    for (const auto& f : a)
        if (!f.is_zero()) return false;
    return true;
}

}  // namespace

StepCocycle StepCocycle::make(const Session& sess, int d, std::vector<CocyclePiece> pieces) {
    if (pieces.empty()) throw EmptyPartition("a step cocycle needs at least one piece");
    for (const auto& pc : pieces)
        if (static_cast<int>(pc.value.size()) != d)
            throw std::invalid_argument("piece value dimension mismatch");

    std::sort(pieces.begin(), pieces.end(), [&](const CocyclePiece& a, const CocyclePiece& b) {
        return sess.compare(a.lo, b.lo) == Ordering::Less;
    });

    // Partition checks: starts at 0, ends at 1, endpoints chain symbolically.
    if (!pieces.front().lo.is_zero())
        throw EmptyPartition("pieces must start at 0 (got " +
                             sess.form_to_string(pieces.front().lo) + ")");
    if (pieces.back().hi != LinearForm(Rat(1)))
        throw EmptyPartition("pieces must end at 1 (got " +
                             sess.form_to_string(pieces.back().hi) + ")");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (pieces[i].hi != pieces[i + 1].lo) {
            // Endpoints must chain symbolically (numerically-equal but
            // differently-written endpoints signal an undeclared relation).
            throw EmptyPartition("pieces do not chain at " + sess.form_to_string(pieces[i].hi) +
                                 " vs " + sess.form_to_string(pieces[i + 1].lo));
        }
    }
    for (const auto& pc : pieces)
        if (sess.compare(pc.lo, pc.hi) != Ordering::Less)
            throw EmptyPartition("degenerate piece");

    // Merge adjacent pieces with symbolically equal values.
    std::vector<CocyclePiece> merged;
    for (auto& pc : pieces) {
        if (!merged.empty() && formvec_equal(merged.back().value, pc.value)) {
            merged.back().hi = pc.hi;
        } else {
            merged.push_back(std::move(pc));
        }
    }

    // Subtract the exact mean per coordinate.
    FormVec mean(static_cast<std::size_t>(d));
    for (const auto& pc : merged) {
        LinearForm len = pc.hi - pc.lo;
        for (int j = 0; j < d; ++j) {
            // mean_j += value_j * len: both are forms; products of two forms
            // are outside the linear-form algebra, so values must be taken
            // piecewise. Lengths are forms; values times lengths stay exact
            // only when one side is rational. Values are allowed symbols, so
            // multiply value coefficients by the *length form* instead:
            // mean = sum over pieces of value * mu(piece) demands a
            // bilinear product; restrict to the cases the library needs:
            // rational value or rational length.
            const LinearForm& v = pc.value[static_cast<std::size_t>(j)];
            if (v.is_rational()) {
                mean[static_cast<std::size_t>(j)] += len * v.rational_value();
            } else if ((pc.hi - pc.lo).is_rational()) {
                mean[static_cast<std::size_t>(j)] += v * (pc.hi - pc.lo).rational_value();
            } else {
                throw std::invalid_argument(
                    "zero-mean correction needs rational piece values or rational lengths; "
                    "got symbolic value on a symbolic-length piece");
            }
        }
    }

    StepCocycle out;
    out.sess_ = &sess;
    out.d_ = d;
    out.pieces_ = std::move(merged);
    for (auto& pc : out.pieces_)
        for (int j = 0; j < d; ++j) pc.value[static_cast<std::size_t>(j)] -= mean[static_cast<std::size_t>(j)];
    out.mean_shift_ = std::move(mean);

    // Effective discontinuities (cyclic; the one at 0 compares last vs first).
    const auto& ps = out.pieces_;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const FormVec& left = i == 0 ? ps.back().value : ps[i - 1].value;
        FormVec jump(static_cast<std::size_t>(d));
        bool nonzero = false;
        for (int j = 0; j < d; ++j) {
            jump[static_cast<std::size_t>(j)] =
                ps[i].value[static_cast<std::size_t>(j)] - left[static_cast<std::size_t>(j)];
            if (!jump[static_cast<std::size_t>(j)].is_zero()) nonzero = true;
        }
        if (nonzero) out.discs_.push_back(Discontinuity{ps[i].lo, std::move(jump)});
    }

    // Jumps telescope to zero per coordinate.
    FormVec total(static_cast<std::size_t>(d));
    for (const auto& dc : out.discs_)
        for (int j = 0; j < d; ++j) total[static_cast<std::size_t>(j)] += dc.jump[static_cast<std::size_t>(j)];
    if (!formvec_zero(total)) throw std::logic_error("jump sum must vanish");

    return out;
}

StepCocycle StepCocycle::indicator(const Session& sess, const LinearForm& beta) {
    return phi_d(sess, {beta});
}

StepCocycle StepCocycle::phi_d(const Session& sess, const FormVec& betas) {
    int d = static_cast<int>(betas.size());
    // Breakpoints: 0 and each beta_j; build the refined partition.
    std::vector<LinearForm> cuts{LinearForm(Rat(0)), LinearForm(Rat(1))};
    for (const auto& b : betas) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end(), [&](const LinearForm& a, const LinearForm& b) {
        return sess.compare(a, b) == Ordering::Less;
    });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<CocyclePiece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        CocyclePiece pc;
        pc.lo = cuts[i];
        pc.hi = cuts[i + 1];
        for (int j = 0; j < d; ++j) {
            // 1 on [0, beta_j): the piece lies inside iff hi <= beta_j.
            bool inside = sess.compare(pc.hi, betas[static_cast<std::size_t>(j)]) != Ordering::Greater;
            pc.value.push_back(inside ? LinearForm(Rat(1)) : LinearForm(Rat(0)));
        }
        pieces.push_back(std::move(pc));
    }
    return make(sess, d, std::move(pieces));  // zero-mean subtracts beta_j
}

StepCocycle StepCocycle::diagonal_quotient(const Session& sess, const FormVec& betas) {
    FormVec flipped;
    for (const auto& b : betas) flipped.push_back(LinearForm(Rat(1)) - b);
    return phi_d(sess, flipped);
}

StepCocycle StepCocycle::combine(const Session& sess, const std::vector<Rat>& coeffs,
                                 const std::vector<const StepCocycle*>& parts) {
    if (coeffs.size() != parts.size() || parts.empty())
        throw std::invalid_argument("combine: mismatched inputs");
    std::vector<LinearForm> cuts{LinearForm(Rat(0)), LinearForm(Rat(1))};
    for (const auto* p : parts)
        for (const auto& pc : p->pieces()) cuts.push_back(pc.lo);
    std::sort(cuts.begin(), cuts.end(), [&](const LinearForm& a, const LinearForm& b) {
        return sess.compare(a, b) == Ordering::Less;
    });
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    int d = parts[0]->dim();
    for (const auto* p : parts)
        if (p->dim() != d) throw std::invalid_argument("combine: dimension mismatch");

    std::vector<CocyclePiece> pieces;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        CocyclePiece pc;
        pc.lo = cuts[i];
        pc.hi = cuts[i + 1];
        pc.value.assign(static_cast<std::size_t>(d), LinearForm());
        pieces.push_back(std::move(pc));
    }
    for (std::size_t pi = 0; pi < parts.size(); ++pi) {
        const auto& src = parts[pi]->pieces();
        std::size_t si = 0;
        for (auto& pc : pieces) {
            while (sess.compare(src[si].hi, pc.lo) != Ordering::Greater) ++si;
            for (int j = 0; j < d; ++j)
                pc.value[static_cast<std::size_t>(j)] +=
                    src[si].value[static_cast<std::size_t>(j)] * coeffs[pi];
        }
    }
    return make(sess, d, std::move(pieces));
}

StepCocycle StepCocycle::apply_matrix(const std::vector<std::vector<Rat>>& m) const {
    int dout = static_cast<int>(m.size());
    std::vector<CocyclePiece> pieces = pieces_;
    for (auto& pc : pieces) {
        FormVec nv(static_cast<std::size_t>(dout));
        for (int r = 0; r < dout; ++r) {
            if (static_cast<int>(m[static_cast<std::size_t>(r)].size()) != d_)
                throw std::invalid_argument("matrix column count mismatch");
            for (int c = 0; c < d_; ++c)
                nv[static_cast<std::size_t>(r)] +=
                    pc.value[static_cast<std::size_t>(c)] * m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        }
        pc.value = std::move(nv);
    }
    return make(*sess_, dout, std::move(pieces));
}

LinearForm StepCocycle::variation(int j) const {
    LinearForm v;
    for (const auto& dc : discs_) {
        const LinearForm& piece = dc.jump[static_cast<std::size_t>(j)];
        if (piece.is_zero()) continue;
        int s = sess_->sign(piece);
        v += s >= 0 ? piece : -piece;
    }
    return v;
}

Int StepCocycle::window_bound() const {
    Int best = 0;
    for (int j = 0; j < d_; ++j) {
        Interval v = sess_->eval(variation(j), Rat(1, 16));
        Int up = rat_ceil(v.hi);
        if (up > best) best = up;
    }
    return best + 1;  // F = {|l| <= L+1}
}

FormVec StepCocycle::value_at(const LinearForm& x) const {
    LinearForm pos = sess_->mod1(x);
    // Binary search over piece lows.
    std::size_t lo = 0, hi = pieces_.size();  // invariant: pieces_[lo].lo <= pos
    while (lo + 1 < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (sess_->compare(pieces_[mid].lo, pos) != Ordering::Greater) lo = mid;
        else hi = mid;
    }
    return pieces_[lo].value;
}

FormVec StepCocycle::birkhoff(const Int& n, const LinearForm& x) const {
    FormVec acc(static_cast<std::size_t>(d_));
    if (n >= 0) {
        for (Int k = 0; k < n; ++k) {
            FormVec v = value_at(x + LinearForm::alpha(Rat(k)));
            for (int j = 0; j < d_; ++j) acc[static_cast<std::size_t>(j)] += v[static_cast<std::size_t>(j)];
        }
    } else {
        // phi_{-m}(x) = -phi_m(T^{-m} x)
        Int m = -n;
        LinearForm base = x - LinearForm::alpha(Rat(m));
        FormVec v = birkhoff(m, base);
        for (int j = 0; j < d_; ++j) acc[static_cast<std::size_t>(j)] = -v[static_cast<std::size_t>(j)];
    }
    return acc;
}

bool StepCocycle::all_values_rational() const {
    for (const auto& pc : pieces_)
        for (const auto& v : pc.value)
            if (!v.is_rational()) return false;
    return true;
}

std::string StepCocycle::describe() const {
    std::ostringstream os;
    os << "step cocycle d=" << d_ << " pieces=" << pieces_.size() << " D=" << discs_.size();
    return os.str();
}

NormalizeResult normalize_discontinuities(const StepCocycle& phi) {
    const Session& sess = phi.session();
    NormalizeResult res{phi, {}};
    bool changed = true;
    while (changed) {
        changed = false;
        const auto& discs = res.cocycle.discontinuities();
        for (std::size_t i = 0; i < discs.size() && !changed; ++i) {
            for (std::size_t k = 0; k < discs.size() && !changed; ++k) {
                if (i == k) continue;
                LinearForm diff = discs[i].x - discs[k].x;
                if (diff.is_zero() || !diff.in_Z_alpha_Z()) continue;
                // Remove x_i by adding jump_i * (1_{arc} - mu(arc)) where the
                // arc runs from x_k to x_i; the indicator of that arc minus
                // its length is a coboundary because x_i - x_k is in
                // Z alpha + Z (footnote identity).
                LinearForm a = discs[k].x, b = discs[i].x;
                FormVec jump = discs[i].jump;
                // Build the arc cocycle 1_{[a,b)} (possibly wrapping) with the
                // tensor value jump, then add.
                std::vector<CocyclePiece> arc_pieces;
                bool a_first = sess.compare(a, b) == Ordering::Less;
                auto mk = [&](int on) {
                    FormVec v;
                    for (int j = 0; j < res.cocycle.dim(); ++j)
                        v.push_back(on ? jump[static_cast<std::size_t>(j)] : LinearForm());
                    return v;
                };
                if (a_first) {
                    if (!a.is_zero())
                        arc_pieces.push_back({LinearForm(Rat(0)), a, mk(0)});
                    arc_pieces.push_back({a, b, mk(1)});
                    arc_pieces.push_back({b, LinearForm(Rat(1)), mk(0)});
                } else {
                    // wrap: [a,1) and [0,b)
                    if (!b.is_zero()) arc_pieces.push_back({LinearForm(Rat(0)), b, mk(1)});
                    arc_pieces.push_back({b, a, mk(0)});
                    arc_pieces.push_back({a, LinearForm(Rat(1)), mk(1)});
                }
                StepCocycle arc = StepCocycle::make(sess, res.cocycle.dim(), std::move(arc_pieces));
                LinearForm arc_len = a_first ? (b - a) : (LinearForm(Rat(1)) - (a - b));
                StepCocycle next = StepCocycle::combine(
                    sess, {Rat(1), Rat(1)}, {&res.cocycle, &arc});
                res.log.push_back(TransferLogEntry{b, a, jump, arc_len});
                res.cocycle = std::move(next);
                changed = true;
            }
        }
    }
    return res;
}

RationalityReport rationality_analysis(const StepCocycle& phi) {
    RationalityReport rep;
    rep.all_rational = true;
    Int global = 1;
    for (int j = 0; j < phi.dim(); ++j) {
        CoordinateRationality cr;
        const auto& pieces = phi.pieces();
        cr.coset_rep = pieces[0].value[static_cast<std::size_t>(j)];
        cr.rational = true;
        Int mult = 1;
        for (const auto& pc : pieces) {
            LinearForm diff = pc.value[static_cast<std::size_t>(j)] - cr.coset_rep;
            if (!diff.is_rational()) {
                cr.rational = false;
                break;
            }
            Rat c = diff.rational_value();
            cr.c.push_back(c);
            mult = boost::multiprecision::lcm(mult, rat_den(c));
        }
        if (cr.rational) {
            // phi^j = sum c_i 1_{I_i} - beta with c_i = t_i - w, beta = -w.
            cr.beta_literal = -cr.coset_rep;
            cr.multiplier = mult;
            global = boost::multiprecision::lcm(global, mult);
        } else {
            cr.c.clear();
            rep.all_rational = false;
        }
        rep.coords.push_back(std::move(cr));
    }
    rep.global_multiplier = rep.all_rational ? global : Int(1);
    return rep;
}

}  // namespace rotcoc
