#include "coarsemod/poly.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace coarsemod {

int expoDeg(const Expo& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
}

Expo expoMul(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Expo expoLcm(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = std::max(a[i], b[i]);
    return r;
}

Expo expoQuot(const Expo& a, const Expo& b) {
    Expo r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

bool expoDivides(const Expo& a, const Expo& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

int cmpExpo(const Expo& a, const Expo& b) {
    int da = expoDeg(a), db = expoDeg(b);
    if (da != db) return da > db ? 1 : -1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
    }
    return 0;
}

int cmpTerm(int pa, const Expo& a, int pb, const Expo& b) {
    if (pa != pb) return pa < pb ? 1 : -1;
    return cmpExpo(a, b);
}

PolyVec pvNormalize(const Ring& R, std::vector<ModTerm> terms) {
    std::sort(terms.begin(), terms.end(), [](const ModTerm& x, const ModTerm& y) {
        return cmpTerm(x.pos, x.e, y.pos, y.e) > 0;
    });
    PolyVec out;
    for (auto& t : terms) {
        if (!out.t.empty() && out.t.back().pos == t.pos && out.t.back().e == t.e) {
            out.t.back().c = R.add(out.t.back().c, t.c);
            if (R.isZero(out.t.back().c)) out.t.pop_back();
        } else if (!R.isZero(t.c)) {
            out.t.push_back(std::move(t));
        }
    }
    return out;
}

PolyVec pvAxpy(const Ring& R, const PolyVec& f, const Scalar& c, const Expo& m,
               const PolyVec& g) {
    PolyVec out;
    out.t.reserve(f.t.size() + g.t.size());
    size_t i = 0, j = 0;
    while (i < f.t.size() || j < g.t.size()) {
        ModTerm gt;
        if (j < g.t.size()) {
            gt.c = R.mul(c, g.t[j].c);
            gt.pos = g.t[j].pos;
            gt.e = expoMul(g.t[j].e, m);
        }
        int cv = 0;
        if (i >= f.t.size()) cv = -1;
        else if (j >= g.t.size()) cv = 1;
        else cv = cmpTerm(f.t[i].pos, f.t[i].e, gt.pos, gt.e);
        if (cv > 0) {
            out.t.push_back(f.t[i++]);
        } else if (cv < 0) {
            if (!R.isZero(gt.c)) out.t.push_back(std::move(gt));
            ++j;
        } else {
            Scalar s = R.add(f.t[i].c, gt.c);
            if (!R.isZero(s)) out.t.push_back(ModTerm{std::move(s), f.t[i].pos, f.t[i].e});
            ++i;
            ++j;
        }
    }
    return out;
}

PolyVec pvMonic(const Ring& R, PolyVec f) {
    if (f.empty() || R.isOne(f.lead().c)) return f;
    auto inv = R.tryInverse(f.lead().c);
    if (!inv) throw std::logic_error("pvMonic: lead coefficient is not a unit");
    for (auto& t : f.t) t.c = R.mul(*inv, t.c);
    return f;
}

std::string pvStr(const PolyVec& f) {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : f.t) {
        if (!first) os << " + ";
        first = false;
        os << t.c.str() << "*[";
        for (size_t i = 0; i < t.e.size(); ++i) {
            if (i) os << ",";
            os << t.e[i];
        }
        os << "]e" << t.pos;
    }
    return os.str();
}

PolyVec reduceFull(const Ring& R, PolyVec f, const std::vector<PolyVec>& basis) {
    PolyVec rem;
    while (!f.empty()) {
        const ModTerm& ld = f.t.front();
        const PolyVec* g = nullptr;
        for (const auto& b : basis) {
            if (!b.empty() && b.lead().pos == ld.pos && expoDivides(b.lead().e, ld.e)) {
                g = &b;
                break;
            }
        }
        if (g) {
            auto q = R.tryDivide(ld.c, g->lead().c);
            if (!q) throw std::logic_error("reduceFull: non-divisible lead over a field");
            f = pvAxpy(R, f, R.neg(*q), expoQuot(ld.e, g->lead().e), *g);
        } else {
            rem.t.push_back(ld);
            f.t.erase(f.t.begin());
        }
    }
    return rem;
}

namespace {

/// Pending S-pairs keyed by (lcm degree, i, j): the normal strategy with a
/// deterministic tie-break.
using PairKey = std::tuple<int, int, int>;

void addPairs(std::set<PairKey>& pending, const std::vector<PolyVec>& basis, int k) {
    for (int i = 0; i < k; ++i) {
        if (basis[i].lead().pos != basis[k].lead().pos) continue;
        Expo l = expoLcm(basis[i].lead().e, basis[k].lead().e);
        pending.emplace(expoDeg(l), i, k);
    }
}

}  // namespace

std::vector<PolyVec> buchberger(const Ring& R, std::vector<PolyVec> inputs) {
    if (!R.isField()) throw std::invalid_argument("buchberger: needs field coefficients");
    std::vector<PolyVec> basis;
    std::set<PairKey> pending;
    for (auto& in : inputs) {
        if (in.empty()) continue;
        basis.push_back(pvMonic(R, std::move(in)));
        addPairs(pending, basis, (int)basis.size() - 1);
    }
    while (!pending.empty()) {
        auto [deg, i, j] = *pending.begin();
        pending.erase(pending.begin());
        (void)deg;
        Expo l = expoLcm(basis[i].lead().e, basis[j].lead().e);
        PolyVec s = pvAxpy(R, PolyVec{}, R.one(), expoQuot(l, basis[i].lead().e), basis[i]);
        s = pvAxpy(R, s, R.neg(R.one()), expoQuot(l, basis[j].lead().e), basis[j]);
        PolyVec r = reduceFull(R, std::move(s), basis);
        if (r.empty()) continue;
        basis.push_back(pvMonic(R, std::move(r)));
        addPairs(pending, basis, (int)basis.size() - 1);
    }
    return basis;
}

PolyVec liftVec(const Ring& R, int n, const FreeVec& v, int posBase) {
    std::vector<ModTerm> terms;
    terms.reserve(v.size());
    for (const auto& [coord, c] : v) {
        const auto& a = std::get<std::vector<long long>>(coord.g.payload);
        if ((int)a.size() != n) throw std::invalid_argument("liftVec: rank mismatch");
        Expo e(2 * n, 0);
        for (int i = 0; i < n; ++i) {
            if (a[i] > 0) e[i] = (int)a[i];
            else e[n + i] = (int)-a[i];
        }
        terms.push_back(ModTerm{c, posBase + coord.slot, std::move(e)});
    }
    return pvNormalize(R, std::move(terms));
}

FreeVec dropVec(const GroupPtr& G, const Ring& R, const PolyVec& v, int posBase) {
    int n = G->rank;
    std::map<Coord, Scalar> acc;
    for (const auto& t : v.t) {
        if (t.pos < posBase) throw std::logic_error("dropVec: term below the position base");
        std::vector<long long> a(n);
        for (int i = 0; i < n; ++i) a[i] = (long long)t.e[i] - t.e[n + i];
        Coord c{GroupElement(G, std::move(a)), t.pos - posBase};
        auto it = acc.find(c);
        if (it == acc.end()) acc.emplace(std::move(c), t.c);
        else it->second = R.add(it->second, t.c);
    }
    FreeVec out;
    for (auto& [c, s] : acc)
        if (!R.isZero(s)) out.emplace_back(c, s);
    return out;
}

bool groebnerTier(const GroupPtr& G, const Ring& R) {
    return G->family == GroupFamily::FreeAbelian && R.isField();
}

namespace {

std::vector<PolyVec> laurentRelators(const Ring& R, int n, int rank) {
    std::vector<PolyVec> out;
    for (int j = 0; j < rank; ++j) {
        for (int i = 0; i < n; ++i) {
            Expo xy(2 * n, 0);
            xy[i] = 1;
            xy[n + i] = 1;
            out.push_back(pvNormalize(
                R, {ModTerm{R.one(), j, std::move(xy)}, ModTerm{R.neg(R.one()), j, Expo(2 * n, 0)}}));
        }
    }
    return out;
}

/// Translate the smallest support element to the identity, then scale so the
/// largest coordinate carries coefficient one.
FreeVec canonicalGenerator(const GroupPtr& G, const Ring& R, FreeVec v) {
    if (v.empty()) return v;
    GroupElement g0 = v.front().first.g;
    for (const auto& [c, s] : v)
        if (c.g < g0) g0 = c.g;
    if (!g0.isIdentity()) v = translate(g0.inverse(), v);
    auto inv = R.tryInverse(v.back().second);
    if (inv && !R.isOne(*inv)) v = svScale(R, *inv, v);
    return v;
}

}  // namespace

std::vector<FreeVec> laurent_syzygies(const GroupPtr& G, const Ring& R,
                                      const std::vector<FreeVec>& tracked,
                                      const std::vector<FreeVec>& extras, int targetRank) {
    if (!groebnerTier(G, R))
        throw std::invalid_argument("laurent_syzygies: needs Z^n with field coefficients");
    int n = G->rank;
    int p = (int)tracked.size();
    std::vector<PolyVec> inputs;
    for (int i = 0; i < p; ++i) {
        PolyVec v = liftVec(R, n, tracked[i], 0);
        v.t.push_back(ModTerm{R.one(), targetRank + i, Expo(2 * n, 0)});
        std::vector<ModTerm> ts(v.t.begin(), v.t.end());
        inputs.push_back(pvNormalize(R, std::move(ts)));
    }
    for (const auto& ex : extras) inputs.push_back(liftVec(R, n, ex, 0));
    for (auto& rel : laurentRelators(R, n, targetRank)) inputs.push_back(std::move(rel));

    std::vector<FreeVec> candidates;
    for (const auto& b : buchberger(R, std::move(inputs))) {
        bool pure = true;
        for (const auto& t : b.t)
            if (t.pos < targetRank) { pure = false; break; }
        if (!pure) continue;
        FreeVec v = canonicalGenerator(G, R, dropVec(G, R, b, targetRank));
        if (!v.empty()) candidates.push_back(std::move(v));
    }
    std::sort(candidates.begin(), candidates.end(), [](const FreeVec& a, const FreeVec& b) {
        int ra = supportRadius(a), rb = supportRadius(b);
        if (ra != rb) return ra < rb;
        if (a.size() != b.size()) return a.size() < b.size();
        return freeVecStr(a) < freeVecStr(b);
    });
    std::vector<FreeVec> kept;
    for (auto& v : candidates) {
        if (!kept.empty() && laurent_member(G, R, v, kept, p)) continue;
        kept.push_back(std::move(v));
    }
    return kept;
}

bool laurent_member(const GroupPtr& G, const Ring& R, const FreeVec& v,
                    const std::vector<FreeVec>& gens, int rank) {
    if (!groebnerTier(G, R))
        throw std::invalid_argument("laurent_member: needs Z^n with field coefficients");
    int n = G->rank;
    std::vector<PolyVec> inputs;
    for (const auto& g : gens) inputs.push_back(liftVec(R, n, g, 0));
    for (auto& rel : laurentRelators(R, n, rank)) inputs.push_back(std::move(rel));
    auto gb = buchberger(R, std::move(inputs));
    return reduceFull(R, liftVec(R, n, v, 0), gb).empty();
}

}  // namespace coarsemod
