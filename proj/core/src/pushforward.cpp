#include "rotcoc/pushforward.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace rotcoc {

namespace {

using OffsetKey = std::array<std::int64_t, 4>;

struct OffsetHash {
    std::size_t operator()(const OffsetKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (auto v : k) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

// Exact per-symbol channel decomposition of the discontinuity positions:
// every position is unit + alpha-part + sum of beta symbols, each channel
// scaled to a fixed common denominator so gap lengths accumulate as integers.
struct ChannelTable {
    std::vector<SymbolId> syms;  // symbols other than unit/alpha
    Int den_unit{1}, den_alpha{1};
    std::vector<Int> den_sym;
    std::vector<Int> unit_num, alpha_num;   // [type]
    std::vector<std::vector<Int>> sym_num;  // [type][sym index]

    static ChannelTable build(const std::vector<LinearForm>& bases) {
        ChannelTable ct;
        for (const auto& b : bases)
            for (const auto& [id, c] : b.terms())
                if (id != kUnitSymbol && id != kAlphaSymbol &&
                    std::find(ct.syms.begin(), ct.syms.end(), id) == ct.syms.end())
                    ct.syms.push_back(id);
        std::sort(ct.syms.begin(), ct.syms.end());
        ct.den_sym.assign(ct.syms.size(), Int(1));
        for (const auto& b : bases) {
            ct.den_unit = boost::multiprecision::lcm(ct.den_unit, rat_den(b.coeff(kUnitSymbol)));
            ct.den_alpha = boost::multiprecision::lcm(ct.den_alpha, rat_den(b.coeff(kAlphaSymbol)));
            for (std::size_t s = 0; s < ct.syms.size(); ++s)
                ct.den_sym[s] =
                    boost::multiprecision::lcm(ct.den_sym[s], rat_den(b.coeff(ct.syms[s])));
        }
        for (const auto& b : bases) {
            Rat u = b.coeff(kUnitSymbol), a = b.coeff(kAlphaSymbol);
            ct.unit_num.push_back(rat_num(u) * (ct.den_unit / rat_den(u)));
            ct.alpha_num.push_back(rat_num(a) * (ct.den_alpha / rat_den(a)));
            std::vector<Int> row;
            for (std::size_t s = 0; s < ct.syms.size(); ++s) {
                Rat c = b.coeff(ct.syms[s]);
                row.push_back(rat_num(c) * (ct.den_sym[s] / rat_den(c)));
            }
            ct.sym_num.push_back(std::move(row));
        }
        return ct;
    }
};

// Integer channel accumulator for sums of gap lengths.
struct LenAccum {
    Int unit{0}, alpha{0};
    std::vector<Int> sym;

    explicit LenAccum(std::size_t nsyms = 0) : sym(nsyms, Int(0)) {}

    LinearForm to_form(const ChannelTable& ct) const {
        LinearForm f(Rat(unit, ct.den_unit));
        if (alpha != 0) f += LinearForm::alpha(Rat(alpha, ct.den_alpha));
        for (std::size_t s = 0; s < ct.syms.size(); ++s)
            if (sym[s] != 0) f += LinearForm::symbol(ct.syms[s], Rat(sym[s], ct.den_sym[s]));
        return f;
    }
};

// Gap next - cur as channel deltas; k_sign is -1 (points x - k alpha).
struct GapDelta {
    Int unit, alpha;
    std::vector<Int> sym;
};

GapDelta gap_delta(const ChannelTable& ct, const OrbitPoint& cur, const OrbitPoint& next,
                   bool wrap) {
    GapDelta g;
    g.unit = ct.unit_num[next.type] - ct.unit_num[cur.type] -
             Int(next.floor_part - cur.floor_part) * ct.den_unit;
    if (wrap) g.unit += ct.den_unit;
    g.alpha = ct.alpha_num[next.type] - ct.alpha_num[cur.type] -
              (Int(next.k) - Int(cur.k)) * ct.den_alpha;
    g.sym.reserve(ct.syms.size());
    for (std::size_t s = 0; s < ct.syms.size(); ++s)
        g.sym.push_back(ct.sym_num[next.type][s] - ct.sym_num[cur.type][s]);
    return g;
}

struct FastWalkResult {
    Int valden;
    FormVec v_base;
    std::unordered_map<OffsetKey, LenAccum, OffsetHash> atoms;
    std::uint64_t piece_count = 0;
};

// Shared streaming walk for the fast (all-rational-values) path.
FastWalkResult fast_walk(const StepCocycle& phi, const std::vector<OrbitPoint>& pts,
                         const ChannelTable& ct) {
    const auto& discs = phi.discontinuities();
    int d = phi.dim();
    if (d > 4) throw std::invalid_argument("fast pushforward supports d <= 4");

    Int valden = 1;
    for (const auto& dc : discs)
        for (const auto& f : dc.jump)
            valden = boost::multiprecision::lcm(valden, rat_den(f.rational_value()));
    std::vector<OffsetKey> jump_int(discs.size(), OffsetKey{0, 0, 0, 0});
    for (std::size_t t = 0; t < discs.size(); ++t)
        for (int j = 0; j < d; ++j) {
            Rat c = discs[t].jump[static_cast<std::size_t>(j)].rational_value();
            Int v = rat_num(c) * (valden / rat_den(c));
            jump_int[t][static_cast<std::size_t>(j)] = v.convert_to<std::int64_t>();
        }

    FastWalkResult res;
    res.valden = valden;
    res.piece_count = pts.size();

    std::size_t M = pts.size();
    // v_base channel accumulators per coordinate.
    std::vector<LenAccum> vb(static_cast<std::size_t>(d), LenAccum(ct.syms.size()));

    OffsetKey o{0, 0, 0, 0};
    for (std::size_t l = 0; l < M; ++l) {
        const OrbitPoint& cur = pts[l];
        const OrbitPoint& next = pts[(l + 1) % M];
        bool wrap = l + 1 == M;
        GapDelta g = gap_delta(ct, cur, next, wrap);

        LenAccum& acc = res.atoms.try_emplace(o, ct.syms.size()).first->second;
        acc.unit += g.unit;
        acc.alpha += g.alpha;
        for (std::size_t s = 0; s < g.sym.size(); ++s) acc.sym[s] += g.sym[s];

        for (int j = 0; j < d; ++j) {
            std::int64_t oj = o[static_cast<std::size_t>(j)];
            if (oj == 0) continue;
            LenAccum& v = vb[static_cast<std::size_t>(j)];
            v.unit += g.unit * oj;
            v.alpha += g.alpha * oj;
            for (std::size_t s = 0; s < g.sym.size(); ++s) v.sym[s] += g.sym[s] * oj;
        }

        // Cross `next`: the value jumps by sigma(type(next)).
        const OffsetKey& jk = jump_int[next.type];
        for (int j = 0; j < d; ++j) o[static_cast<std::size_t>(j)] += jk[static_cast<std::size_t>(j)];
    }

    // Total length must telescope to exactly 1.
    LenAccum total(ct.syms.size());
    for (const auto& [k, acc] : res.atoms) {
        total.unit += acc.unit;
        total.alpha += acc.alpha;
        for (std::size_t s = 0; s < total.sym.size(); ++s) total.sym[s] += acc.sym[s];
    }
    if (total.unit != ct.den_unit || total.alpha != 0)
        throw std::logic_error("pushforward: gap lengths do not sum to 1");
    for (const auto& v : total.sym)
        if (v != 0) throw std::logic_error("pushforward: gap lengths do not sum to 1");

    // v_base_j = - sum over pieces of offset_j * length / valden.
    for (int j = 0; j < d; ++j) {
        LinearForm f = vb[static_cast<std::size_t>(j)].to_form(ct);
        f *= Rat(Int(-1), valden);
        res.v_base.push_back(std::move(f));
    }
    return res;
}

void finalize_atoms(const Session& sess, int d, const FastWalkResult& walk, const ChannelTable& ct,
                    PushforwardDistribution& out) {
    for (const auto& [key, acc] : walk.atoms) {
        Atom a;
        a.mass = acc.to_form(ct);
        for (int j = 0; j < d; ++j) {
            Rat off(Int(key[static_cast<std::size_t>(j)]), walk.valden);
            a.u_offset.push_back(off);
            a.value.push_back(walk.v_base[static_cast<std::size_t>(j)] + LinearForm(off));
        }
        out.atoms.push_back(std::move(a));
    }
    std::sort(out.atoms.begin(), out.atoms.end(), [](const Atom& x, const Atom& y) {
        for (std::size_t j = 0; j < x.value.size(); ++j) {
            if (x.value[j] != y.value[j]) return x.value[j].key_less(y.value[j]);
        }
        return false;
    });
    static const Rat kApproxEps(Int(1), Int(1) << 40);
    for (auto& a : out.atoms) {
        a.mass_approx = to_double(sess.eval(a.mass, kApproxEps).center());
        for (const auto& v : a.value) a.value_approx.push_back(to_double(sess.eval(v, kApproxEps).center()));
    }
    // Near-pair diagnostic at 1e-9.
    for (std::size_t i = 0; i + 1 < out.atoms.size() && !out.near_pair_flag; ++i)
        for (std::size_t k = i + 1; k < out.atoms.size(); ++k) {
            double dmax = 0;
            for (std::size_t j = 0; j < out.atoms[i].value_approx.size(); ++j)
                dmax = std::max(dmax,
                                std::abs(out.atoms[i].value_approx[j] - out.atoms[k].value_approx[j]));
            if (dmax < 1e-9) {
                out.near_pair_flag = true;
                break;
            }
        }
}

}  // namespace

PushforwardDistribution pushforward(const StepCocycle& phi, const Int& n,
                                    std::uint64_t piece_budget) {
    const Session& sess = phi.session();
    int d = phi.dim();
    PushforwardDistribution out;
    out.n = n;
    if (n < 0) throw std::invalid_argument("pushforward needs n >= 0");

    const auto& discs = phi.discontinuities();
    if (discs.empty() || n == 0) {
        Atom a;
        a.mass = LinearForm(Rat(1));
        a.mass_approx = 1.0;
        FormVec v = n == 0 ? FormVec(static_cast<std::size_t>(d))
                           : phi.birkhoff(n, LinearForm(Rat(1, 2)));
        a.value = v;
        for (const auto& f : v) a.value_approx.push_back(to_double(sess.eval(f, Rat(1, 1 << 30)).center()));
        for (int j = 0; j < d; ++j) a.u_offset.push_back(Rat(0));
        out.atoms.push_back(std::move(a));
        out.piece_count = 1;
        return out;
    }

    Int total_pieces = Int(discs.size()) * n;
    if (total_pieces > Int(piece_budget))
        throw BudgetExceeded("pushforward: D*n = " + total_pieces.str() + " exceeds budget " +
                             std::to_string(piece_budget));
    std::uint64_t nn = n.convert_to<std::uint64_t>();

    std::vector<LinearForm> bases;
    for (const auto& dc : discs) bases.push_back(dc.x);
    ChannelTable ct = ChannelTable::build(bases);
    CircleOrbit orbit(sess, bases, -1);
    std::vector<OrbitPoint> pts = orbit.sorted(nn);
    out.piece_count = pts.size();

    if (phi.all_values_rational()) {
        FastWalkResult walk = fast_walk(phi, pts, ct);
        finalize_atoms(sess, d, walk, ct, out);
        return out;
    }

    // Generic path (symbolic jump values): offsets are forms; the base value
    // is pinned by one direct Birkhoff evaluation at a continuity point.
    std::map<std::vector<std::string>, std::pair<FormVec, LenAccum>> atoms;  // keyed by printed offset
    FormVec cur_off(static_cast<std::size_t>(d));
    std::size_t M = pts.size();
    auto names = sess.symbol_names();
    for (std::size_t l = 0; l < M; ++l) {
        const OrbitPoint& cur = pts[l];
        const OrbitPoint& next = pts[(l + 1) % M];
        GapDelta g = gap_delta(ct, cur, next, l + 1 == M);
        std::vector<std::string> key;
        for (const auto& f : cur_off) key.push_back(f.to_string(names));
        auto it = atoms.find(key);
        if (it == atoms.end())
            it = atoms.emplace(key, std::make_pair(cur_off, LenAccum(ct.syms.size()))).first;
        it->second.second.unit += g.unit;
        it->second.second.alpha += g.alpha;
        for (std::size_t s = 0; s < g.sym.size(); ++s) it->second.second.sym[s] += g.sym[s];
        for (int j = 0; j < d; ++j)
            cur_off[static_cast<std::size_t>(j)] += discs[next.type].jump[static_cast<std::size_t>(j)];
    }
    // Base value at the midpoint of the first piece.
    LinearForm x0 = orbit.point_form(pts[0]);
    LinearForm x1 = orbit.point_form(pts[1 % M]) + (M == 1 ? LinearForm(Rat(1)) : LinearForm());
    LinearForm mid = (x0 + x1) * Rat(1, 2);
    FormVec base_val = phi.birkhoff(Int(nn), mid);
    for (auto& [key, entry] : atoms) {
        Atom a;
        a.mass = entry.second.to_form(ct);
        for (int j = 0; j < d; ++j)
            a.value.push_back(base_val[static_cast<std::size_t>(j)] +
                              entry.first[static_cast<std::size_t>(j)]);
        out.atoms.push_back(std::move(a));
    }
    std::sort(out.atoms.begin(), out.atoms.end(), [](const Atom& x, const Atom& y) {
        for (std::size_t j = 0; j < x.value.size(); ++j)
            if (x.value[j] != y.value[j]) return x.value[j].key_less(y.value[j]);
        return false;
    });
    static const Rat kApproxEps(Int(1), Int(1) << 40);
    for (auto& a : out.atoms) {
        a.mass_approx = to_double(sess.eval(a.mass, kApproxEps).center());
        for (const auto& v : a.value) a.value_approx.push_back(to_double(sess.eval(v, kApproxEps).center()));
    }
    return out;
}

DkReport denjoy_koksma_audit(const StepCocycle& phi, const std::vector<int>& n_list,
                             std::uint64_t piece_budget) {
    const Session& sess = phi.session();
    DkReport rep;
    FormVec variations;
    for (int j = 0; j < phi.dim(); ++j) variations.push_back(phi.variation(j));
    for (int n : n_list) {
        DkRow row;
        row.n = n;
        row.q = sess.ladder().q(n);
        PushforwardDistribution pf = pushforward(phi, row.q, piece_budget);
        row.ok = true;
        for (const auto& atom : pf.atoms) {
            for (int j = 0; j < phi.dim() && row.ok; ++j) {
                const LinearForm& v = atom.value[static_cast<std::size_t>(j)];
                const LinearForm& V = variations[static_cast<std::size_t>(j)];
                if (sess.compare(v, V) == Ordering::Greater ||
                    sess.compare(v, -V) == Ordering::Less)
                    row.ok = false;
            }
            if (!row.ok) break;
        }
        if (!row.ok) rep.all_ok = false;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

MesuResult mesu_measure(const StepCocycle& phi, const Int& q, const Int& ell,
                        std::uint64_t piece_budget, bool want_atoms) {
    const Session& sess = phi.session();
    int d = phi.dim();
    if (d > 4) throw std::invalid_argument("mesu_measure supports d <= 4");
    if (q < 1 || ell < 0) throw std::invalid_argument("mesu_measure needs q >= 1, ell >= 0");
    if (!phi.all_values_rational())
        throw std::invalid_argument("mesu_measure needs rational piece values");

    MesuResult res;
    res.q = q;
    res.ell = ell;

    LinearForm norm_q_alpha = sess.dist_to_Z_form(LinearForm::alpha(Rat(q)));
    res.bound = LinearForm(Rat(1)) -
                norm_q_alpha * (Rat(2 * Int(phi.D())) * Rat(q) * Rat(ell));
    res.bound_vacuous = sess.compare(res.bound, LinearForm()) != Ordering::Greater;

    const auto& discs = phi.discontinuities();
    if (discs.empty() || ell == 0) {
        res.measure = LinearForm(Rat(1));
        res.bound_holds = true;
        if (want_atoms) {
            PushforwardDistribution pf = pushforward(phi, ell == 0 ? Int(1) : q, piece_budget);
            res.atoms_on_A = std::move(pf.atoms);
        }
        return res;
    }

    Int total = Int(discs.size()) * q * (ell + 1);
    if (total > Int(piece_budget))
        throw BudgetExceeded("mesu: D*q*(l+1) = " + total.str() + " exceeds budget");
    std::uint64_t qq = q.convert_to<std::uint64_t>();
    std::uint64_t ll = ell.convert_to<std::uint64_t>();

    std::vector<LinearForm> bases;
    for (const auto& dc : discs) bases.push_back(dc.x);
    ChannelTable ct = ChannelTable::build(bases);
    CircleOrbit orbit(sess, bases, -1);
    std::vector<OrbitPoint> pts = orbit.sorted(qq * (ll + 1));

    Int valden = 1;
    for (const auto& dc : discs)
        for (const auto& f : dc.jump)
            valden = boost::multiprecision::lcm(valden, rat_den(f.rational_value()));
    std::vector<OffsetKey> jump_int(discs.size(), OffsetKey{0, 0, 0, 0});
    for (std::size_t t = 0; t < discs.size(); ++t)
        for (int j = 0; j < d; ++j) {
            Rat c = discs[t].jump[static_cast<std::size_t>(j)].rational_value();
            jump_int[t][static_cast<std::size_t>(j)] =
                (rat_num(c) * (valden / rat_den(c))).convert_to<std::int64_t>();
        }

    // Each shifted copy Phi_q(. + s q alpha) is a step function whose jumps
    // sit at the orbit points with k in [s q, (s+1) q); the walk tracks its
    // offsets o^(s) relative to the reference piece. Absolute values are
    // pinned per copy by the zero-mean identity, so the A-condition on a
    // piece reads o^(s) - o^(0) = Delta_s with Delta_s := valden*(vb_0-vb_s)
    // an integer vector (otherwise A is empty).
    std::size_t nbuckets = ll + 1;
    std::size_t M = pts.size();

    // Pass 1: per-bucket mean accumulators.
    std::vector<std::vector<LenAccum>> vb_acc(
        nbuckets, std::vector<LenAccum>(static_cast<std::size_t>(d), LenAccum(ct.syms.size())));
    {
        std::vector<OffsetKey> bucket(nbuckets, OffsetKey{0, 0, 0, 0});
        for (std::size_t l = 0; l < M; ++l) {
            const OrbitPoint& cur = pts[l];
            const OrbitPoint& next = pts[(l + 1) % M];
            GapDelta g = gap_delta(ct, cur, next, l + 1 == M);
            for (std::size_t s = 0; s < nbuckets; ++s)
                for (int j = 0; j < d; ++j) {
                    std::int64_t oj = bucket[s][static_cast<std::size_t>(j)];
                    if (oj == 0) continue;
                    LenAccum& v = vb_acc[s][static_cast<std::size_t>(j)];
                    v.unit += g.unit * oj;
                    v.alpha += g.alpha * oj;
                    for (std::size_t y = 0; y < g.sym.size(); ++y) v.sym[y] += g.sym[y] * oj;
                }
            std::size_t s = next.k / qq;
            const OffsetKey& jk = jump_int[next.type];
            for (int j = 0; j < d; ++j)
                bucket[s][static_cast<std::size_t>(j)] += jk[static_cast<std::size_t>(j)];
        }
    }

    // Delta_s = valden*(vb_0 - vb_s) = (VB_s - VB_0)/valden channel-wise;
    // all channels except the unit must vanish and the unit must divide out.
    std::vector<OffsetKey> delta(nbuckets, OffsetKey{0, 0, 0, 0});
    bool a_empty = false;
    for (std::size_t s = 1; s < nbuckets && !a_empty; ++s) {
        for (int j = 0; j < d && !a_empty; ++j) {
            const LenAccum& s0 = vb_acc[0][static_cast<std::size_t>(j)];
            const LenAccum& ss = vb_acc[s][static_cast<std::size_t>(j)];
            Int du = ss.unit - s0.unit;
            Int da = ss.alpha - s0.alpha;
            bool sym_zero = true;
            for (std::size_t y = 0; y < s0.sym.size(); ++y)
                if (ss.sym[y] != s0.sym[y]) sym_zero = false;
            // o^(s) - o^(0) = valden*(vb_0 - vb_s) = (VB_s - VB_0) as a form;
            // it must be the integer du/den_unit with all other channels zero.
            if (da != 0 || !sym_zero || du % ct.den_unit != 0) {
                a_empty = true;
            } else {
                delta[s][static_cast<std::size_t>(j)] =
                    (du / ct.den_unit).convert_to<std::int64_t>();
            }
        }
    }

    // Pass 2: accumulate the measure of A and the restricted law of Phi_q.
    LenAccum measure(ct.syms.size());
    std::unordered_map<OffsetKey, LenAccum, OffsetHash> restricted;
    if (!a_empty) {
        std::vector<OffsetKey> bucket(nbuckets, OffsetKey{0, 0, 0, 0});
        std::vector<bool> bad(nbuckets, false);
        std::size_t bad_count = 0;
        auto recheck = [&](std::size_t s) {
            bool b = false;
            for (int j = 0; j < d; ++j)
                if (bucket[s][static_cast<std::size_t>(j)] -
                        bucket[0][static_cast<std::size_t>(j)] !=
                    delta[s][static_cast<std::size_t>(j)])
                    b = true;
            if (b != bad[s]) {
                if (b) ++bad_count;
                else --bad_count;
                bad[s] = b;
            }
        };
        for (std::size_t s = 1; s < nbuckets; ++s) recheck(s);
        for (std::size_t l = 0; l < M; ++l) {
            const OrbitPoint& cur = pts[l];
            const OrbitPoint& next = pts[(l + 1) % M];
            GapDelta g = gap_delta(ct, cur, next, l + 1 == M);
            if (bad_count == 0) {
                measure.unit += g.unit;
                measure.alpha += g.alpha;
                for (std::size_t y = 0; y < g.sym.size(); ++y) measure.sym[y] += g.sym[y];
                if (want_atoms) {
                    LenAccum& acc = restricted.try_emplace(bucket[0], ct.syms.size()).first->second;
                    acc.unit += g.unit;
                    acc.alpha += g.alpha;
                    for (std::size_t y = 0; y < g.sym.size(); ++y) acc.sym[y] += g.sym[y];
                }
            }
            std::size_t s = next.k / qq;
            const OffsetKey& jk = jump_int[next.type];
            for (int j = 0; j < d; ++j)
                bucket[s][static_cast<std::size_t>(j)] += jk[static_cast<std::size_t>(j)];
            if (s == 0) {
                for (std::size_t b = 1; b < nbuckets; ++b) recheck(b);
            } else {
                recheck(s);
            }
        }
    }

    res.measure = measure.to_form(ct);
    if (!res.bound_vacuous)
        res.bound_holds = sess.compare(res.measure, res.bound) == Ordering::Greater;
    else
        res.bound_holds = true;

    if (want_atoms && !a_empty) {
        FormVec v_base;
        for (int j = 0; j < d; ++j) {
            LinearForm f = vb_acc[0][static_cast<std::size_t>(j)].to_form(ct);
            f *= Rat(Int(-1), valden);
            v_base.push_back(std::move(f));
        }
        for (const auto& [key, acc] : restricted) {
            Atom a;
            a.mass = acc.to_form(ct);
            for (int j = 0; j < d; ++j) {
                Rat off(Int(key[static_cast<std::size_t>(j)]), valden);
                a.u_offset.push_back(off);
                a.value.push_back(v_base[static_cast<std::size_t>(j)] + LinearForm(off));
            }
            res.atoms_on_A.push_back(std::move(a));
        }
        std::sort(res.atoms_on_A.begin(), res.atoms_on_A.end(), [](const Atom& x, const Atom& y) {
            for (std::size_t j = 0; j < x.value.size(); ++j)
                if (x.value[j] != y.value[j]) return x.value[j].key_less(y.value[j]);
            return false;
        });
        static const Rat kApproxEps(Int(1), Int(1) << 40);
        for (auto& a : res.atoms_on_A) {
            a.mass_approx = to_double(sess.eval(a.mass, kApproxEps).center());
            for (const auto& v : a.value)
                a.value_approx.push_back(to_double(sess.eval(v, kApproxEps).center()));
        }
    }
    return res;
}

TimeSlice time_slice(const StepCocycle& phi, std::uint64_t n, std::uint64_t piece_budget) {
    const Session& sess = phi.session();
    int d = phi.dim();
    if (d > 4) throw std::invalid_argument("time_slice supports d <= 4");
    if (!phi.all_values_rational())
        throw std::invalid_argument("time_slice needs rational piece values");
    const auto& discs = phi.discontinuities();
    if (discs.empty() || n == 0)
        throw std::invalid_argument("time_slice needs discontinuities and n >= 1");
    if (Int(discs.size()) * n > Int(piece_budget)) throw BudgetExceeded("time_slice budget");

    std::vector<LinearForm> bases;
    for (const auto& dc : discs) bases.push_back(dc.x);
    ChannelTable ct = ChannelTable::build(bases);
    CircleOrbit orbit(sess, bases, -1);
    std::vector<OrbitPoint> pts = orbit.sorted(n);

    FastWalkResult walk = fast_walk(phi, pts, ct);

    TimeSlice slice{n, walk.valden, walk.v_base, std::move(pts), {}, std::move(orbit)};
    // Recompute per-piece offsets (the fast walk streams them).
    Int valden = slice.valden;
    std::vector<OffsetKey> jump_int(discs.size(), OffsetKey{0, 0, 0, 0});
    for (std::size_t t = 0; t < discs.size(); ++t)
        for (int j = 0; j < d; ++j) {
            Rat c = discs[t].jump[static_cast<std::size_t>(j)].rational_value();
            jump_int[t][static_cast<std::size_t>(j)] =
                (rat_num(c) * (valden / rat_den(c))).convert_to<std::int64_t>();
        }
    OffsetKey o{0, 0, 0, 0};
    slice.offsets.reserve(slice.pts.size());
    for (std::size_t l = 0; l < slice.pts.size(); ++l) {
        slice.offsets.push_back(o);
        const OrbitPoint& next = slice.pts[(l + 1) % slice.pts.size()];
        const OffsetKey& jk = jump_int[next.type];
        for (int j = 0; j < d; ++j) o[static_cast<std::size_t>(j)] += jk[static_cast<std::size_t>(j)];
    }
    return slice;
}

}  // namespace rotcoc
