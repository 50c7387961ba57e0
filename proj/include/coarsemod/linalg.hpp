#pragma once

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <vector>

#include "coarsemod/scalar.hpp"

namespace coarsemod {

/// Sparse vector over a totally ordered coordinate type: sorted, no zero entries.
template <class K>
using SparseVec = std::vector<std::pair<K, Scalar>>;

/// a*v + b*w, merged; zero results dropped.
template <class K>
SparseVec<K> svCombine(const Ring& R, const Scalar& a, const SparseVec<K>& v, const Scalar& b,
                       const SparseVec<K>& w) {
    SparseVec<K> out;
    out.reserve(v.size() + w.size());
    auto pv = v.begin(), pw = w.begin();
    while (pv != v.end() || pw != w.end()) {
        if (pw == w.end() || (pv != v.end() && pv->first < pw->first)) {
            Scalar c = R.mul(a, pv->second);
            if (!R.isZero(c)) out.emplace_back(pv->first, c);
            ++pv;
        } else if (pv == v.end() || pw->first < pv->first) {
            Scalar c = R.mul(b, pw->second);
            if (!R.isZero(c)) out.emplace_back(pw->first, c);
            ++pw;
        } else {
            Scalar c = R.add(R.mul(a, pv->second), R.mul(b, pw->second));
            if (!R.isZero(c)) out.emplace_back(pv->first, c);
            ++pv;
            ++pw;
        }
    }
    return out;
}

template <class K>
SparseVec<K> svAdd(const Ring& R, const SparseVec<K>& v, const SparseVec<K>& w) {
    return svCombine(R, R.one(), v, R.one(), w);
}

template <class K>
SparseVec<K> svAxpy(const Ring& R, const SparseVec<K>& v, const Scalar& c, const SparseVec<K>& w) {
    return svCombine(R, R.one(), v, c, w);
}

template <class K>
SparseVec<K> svScale(const Ring& R, const Scalar& c, const SparseVec<K>& v) {
    SparseVec<K> out;
    out.reserve(v.size());
    for (auto& [k, a] : v) {
        Scalar b = R.mul(c, a);
        if (!R.isZero(b)) out.emplace_back(k, b);
    }
    return out;
}

template <class K>
const Scalar* svGet(const SparseVec<K>& v, const K& k) {
    auto it = std::lower_bound(v.begin(), v.end(), k,
                               [](const auto& p, const K& key) { return p.first < key; });
    if (it != v.end() && it->first == k) return &it->second;
    return nullptr;
}

/// Row-reduction engine with transform tracking. Maintains an echelon set of
/// rows (unique minimal lead coordinates) spanning the inserted generators:
/// Hermite-style over Z, Howell-closed over Z/N, Gauss over fields.
/// Transforms express every row (and every collected kernel relation) as a
/// combination of the original generators, indexed by insertion order.
template <class K>
class RowReducer {
public:
    explicit RowReducer(Ring ring, bool collectKernel = false)
        : R_(std::move(ring)), collect_(collectKernel) {}

    struct Row {
        SparseVec<K> v;
        SparseVec<int> t;
    };

    void addGenerator(const SparseVec<K>& v) {
        int idx = (int)gens_.size();
        gens_.push_back(v);
        insert(v, SparseVec<int>{{idx, R_.one()}});
        drainShadows();
        canonical_ = false;
    }

    const std::vector<SparseVec<K>>& originalGenerators() const { return gens_; }
    size_t pivotCount() const { return rows_.size(); }
    bool isZeroModule() const { return rows_.empty(); }
    const std::vector<Row>& echelonRows() const { return rows_; }
    const Ring& ring() const { return R_; }

    /// Membership by greedy pivot reduction (complete for Hermite/Howell/RREF).
    /// Witness (if requested) gives coefficients over original generators.
    bool contains(const SparseVec<K>& v0, SparseVec<int>* witness = nullptr) const {
        SparseVec<K> v = v0;
        SparseVec<int> acc;
        while (!v.empty()) {
            const K& k = v.front().first;
            const Row* r = rowWithLead(k);
            if (!r) return false;
            auto q = R_.tryDivide(v.front().second, r->v.front().second);
            if (!q) return false;
            Scalar mq = R_.neg(*q);
            v = svAxpy(R_, v, mq, r->v);
            if (witness) acc = svAxpy(R_, acc, *q, r->t);
        }
        if (witness) *witness = acc;
        return true;
    }

    /// Left-kernel relations among the original generators, collected during
    /// insertion. Complete over Integers and fields (unimodular evolution);
    /// residue-ring kernels go through the integer lift instead.
    const std::vector<SparseVec<int>>& kernelRows() const {
        if (!collect_) throw std::logic_error("kernel collection disabled");
        return kernel_;
    }

    /// Canonical normal form: normalized pivots, entries above pivots reduced.
    void canonicalize() {
        if (canonical_) return;
        for (auto& r : rows_) normalizePivot(r);
        // clear/reduce entries of earlier rows at later pivots
        for (size_t j = 0; j < rows_.size(); ++j) {
            const K lead = rows_[j].v.front().first;
            const Scalar p = rows_[j].v.front().second;
            for (size_t i = 0; i < j; ++i) {
                const Scalar* c = svGet(rows_[i].v, lead);
                if (!c) continue;
                Scalar q;
                if (R_.isField()) {
                    q = *R_.tryDivide(*c, p);
                } else {
                    mpz_class qq;
                    mpz_fdiv_q(qq.get_mpz_t(), c->num.get_mpz_t(), p.num.get_mpz_t());
                    q = Scalar(qq);
                    if (R_.isZero(R_.canon(q))) continue;
                }
                Scalar mq = R_.neg(q);
                rows_[i].v = svAxpy(R_, rows_[i].v, mq, rows_[j].v);
                rows_[i].t = svAxpy(R_, rows_[i].t, mq, rows_[j].t);
            }
        }
        canonical_ = true;
    }

    std::vector<SparseVec<K>> canonicalRows() {
        canonicalize();
        std::vector<SparseVec<K>> out;
        out.reserve(rows_.size());
        for (auto& r : rows_) out.push_back(r.v);
        return out;
    }

    bool sameSpan(const RowReducer& other) const {
        RowReducer a = *this, b = other;
        return a.canonicalRows() == b.canonicalRows();
    }

    bool containsAll(const std::vector<SparseVec<K>>& vs) const {
        for (auto& v : vs)
            if (!contains(v)) return false;
        return true;
    }

private:
    Ring R_;
    bool collect_;
    bool canonical_ = false;
    std::vector<Row> rows_;  // sorted by lead coordinate
    std::vector<SparseVec<K>> gens_;
    std::vector<SparseVec<int>> kernel_;
    std::deque<Row> shadowQueue_;

    const Row* rowWithLead(const K& k) const {
        auto it = std::lower_bound(rows_.begin(), rows_.end(), k,
                                   [](const Row& r, const K& key) { return r.v.front().first < key; });
        if (it != rows_.end() && it->v.front().first == k) return &*it;
        return nullptr;
    }

    Row* rowWithLeadMut(const K& k) {
        return const_cast<Row*>(static_cast<const RowReducer*>(this)->rowWithLead(k));
    }

    void enqueueShadow(const Row& r) {
        if (R_.kind != RingKind::IntegersMod) return;
        mpz_class g = gcd(r.v.front().second.num, R_.modulus);
        mpz_class c = R_.modulus / g;
        if (c == 1) return;
        Scalar cs{c};
        Row s{svScale(R_, cs, r.v), svScale(R_, cs, r.t)};
        if (!s.v.empty()) shadowQueue_.push_back(std::move(s));
    }

    void drainShadows() {
        while (!shadowQueue_.empty()) {
            Row s = std::move(shadowQueue_.front());
            shadowQueue_.pop_front();
            insert(s.v, s.t);
        }
    }

    void insert(SparseVec<K> v, SparseVec<int> t) {
        while (!v.empty()) {
            const K k = v.front().first;
            Row* r = rowWithLeadMut(k);
            if (!r) {
                auto it = std::lower_bound(
                    rows_.begin(), rows_.end(), k,
                    [](const Row& row, const K& key) { return row.v.front().first < key; });
                it = rows_.insert(it, Row{std::move(v), std::move(t)});
                enqueueShadow(*it);
                return;
            }
            const Scalar p = r->v.front().second;
            const Scalar c = v.front().second;
            auto q = R_.tryDivide(c, p);
            if (q) {
                Scalar mq = R_.neg(*q);
                v = svAxpy(R_, v, mq, r->v);
                t = svAxpy(R_, t, mq, r->t);
                continue;
            }
            // gcd improvement step (unimodular on the pair)
            mpz_class g, s, u;
            xgcd(p.num, c.num, g, s, u);
            Scalar ss = R_.canon(Scalar(s)), uu = R_.canon(Scalar(u));
            Scalar pg = R_.canon(Scalar(p.num / g)), cg = R_.canon(Scalar(c.num / g));
            Row newRow{svCombine(R_, ss, r->v, uu, v), svCombine(R_, ss, r->t, uu, t)};
            SparseVec<K> v2 = svCombine(R_, pg, v, R_.neg(cg), r->v);
            SparseVec<int> t2 = svCombine(R_, pg, t, R_.neg(cg), r->t);
            *r = std::move(newRow);
            enqueueShadow(*r);
            v = std::move(v2);
            t = std::move(t2);
        }
        if (collect_ && !t.empty()) kernel_.push_back(std::move(t));
    }

    void normalizePivot(Row& r) {
        Scalar p = r.v.front().second;
        if (R_.isField()) {
            if (!R_.isOne(p)) scaleRow(r, *R_.tryInverse(p));
            return;
        }
        if (R_.kind == RingKind::Integers) {
            if (p.num < 0) scaleRow(r, Scalar(-1));
            return;
        }
        // Z/N: unit-normalize the pivot to gcd(p, N)
        mpz_class g, s, u;
        xgcd(p.num, R_.modulus, g, s, u);
        if (p.num == g) return;
        mpz_class step = R_.modulus / g;
        mpz_class cand = s % R_.modulus;
        if (cand < 0) cand += R_.modulus;
        while (gcd(cand, R_.modulus) != 1) {
            cand += step;
            if (cand >= R_.modulus) cand -= R_.modulus;
        }
        scaleRow(r, Scalar(cand));
    }

    void scaleRow(Row& r, const Scalar& c) {
        r.v = svScale(R_, c, r.v);
        r.t = svScale(R_, c, r.t);
    }
};

/// Left kernel over Z/N via the integer lift (complete generating set).
template <class K>
std::vector<SparseVec<int>> leftKernelModN(const Ring& R, const std::vector<SparseVec<K>>& gens) {
    if (R.kind != RingKind::IntegersMod && R.kind != RingKind::PrimeField)
        throw std::logic_error("leftKernelModN expects a residue ring");
    Ring Z = Ring::integers();
    std::vector<K> support;
    for (auto& g : gens)
        for (auto& [k, c] : g) support.push_back(k);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());

    RowReducer<K> red(Z, true);
    for (auto& g : gens) red.addGenerator(g);  // canonical residues are valid lifts
    size_t nGens = gens.size();
    for (auto& k : support) red.addGenerator(SparseVec<K>{{k, Scalar(R.modulus)}});

    std::vector<SparseVec<int>> out;
    for (auto& krow : red.kernelRows()) {
        SparseVec<int> x;
        for (auto& [i, c] : krow)
            if (i < (int)nGens) {
                Scalar cc = R.canon(c);
                if (!R.isZero(cc)) x.emplace_back(i, cc);
            }
        if (!x.empty()) out.push_back(std::move(x));
    }
    return out;
}

/// Complete left-kernel generating set over any supported ring.
template <class K>
std::vector<SparseVec<int>> leftKernel(const Ring& R, const std::vector<SparseVec<K>>& gens) {
    if (R.kind == RingKind::IntegersMod) return leftKernelModN(R, gens);
    RowReducer<K> red(R, true);
    for (auto& g : gens) red.addGenerator(g);
    return red.kernelRows();
}

/// Right kernel {v : sum_k row_i[k] v_k = 0 for all i} over the given
/// coordinate list (coordinates untouched by any row are free directions).
template <class K>
std::vector<SparseVec<K>> rightKernel(const Ring& R, const std::vector<SparseVec<K>>& rows,
                                      const std::vector<K>& coords0) {
    std::vector<K> coords = coords0;
    std::sort(coords.begin(), coords.end());
    coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
    // columns as sparse vectors over row indices
    std::vector<SparseVec<int>> cols(coords.size());
    for (int i = 0; i < (int)rows.size(); ++i)
        for (auto& [k, c] : rows[i]) {
            auto it = std::lower_bound(coords.begin(), coords.end(), k);
            if (it == coords.end() || !(*it == k))
                throw std::invalid_argument("rightKernel: row touches a coordinate outside the list");
            cols[it - coords.begin()].emplace_back(i, c);
        }
    auto ker = leftKernel(R, cols);
    std::vector<SparseVec<K>> out;
    out.reserve(ker.size());
    for (auto& x : ker) {
        SparseVec<K> v;
        v.reserve(x.size());
        for (auto& [pos, c] : x) v.emplace_back(coords[pos], c);
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        out.push_back(std::move(v));
    }
    return out;
}

/// Intersection of two spans: left kernel of the stacked generator list,
/// projected through the first block.
template <class K>
std::vector<SparseVec<K>> intersectSpans(const Ring& R, const std::vector<SparseVec<K>>& A,
                                         const std::vector<SparseVec<K>>& B) {
    std::vector<SparseVec<K>> stacked = A;
    stacked.insert(stacked.end(), B.begin(), B.end());
    auto ker = leftKernel(R, stacked);
    std::vector<SparseVec<K>> out;
    for (auto& x : ker) {
        SparseVec<K> v;
        for (auto& [i, c] : x)
            if (i < (int)A.size()) v = svAxpy(R, v, c, A[i]);
        if (!v.empty()) out.push_back(std::move(v));
    }
    return out;
}

/// Smith normal form of a dense integer matrix: U*A*V = D with unimodular
/// U, V and a divisibility chain on the diagonal. Oracle-grade (small inputs).
struct SmithResult {
    std::vector<std::vector<mpz_class>> U, D, V;
};
SmithResult smithForm(std::vector<std::vector<mpz_class>> A);

}  // namespace coarsemod
