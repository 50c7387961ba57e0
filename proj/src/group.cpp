#include "coarsemod/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace coarsemod {

namespace {

long long checkedAdd(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("BS exponent overflow");
    return r;
}

long long checkedMul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("BS exponent overflow");
    return r;
}

long long floorDiv(long long a, long long m) {  // m > 0
    long long q = a / m;
    if (a % m < 0) --q;
    return q;
}

/// Right-multiplication state machine on Britton normal forms.
struct BSBuilder {
    long long m, n;
    BSForm f;

    void mulY(long long a) { f.tail = checkedAdd(f.tail, a); }

    void mulX(int sign) {
        if (sign > 0) {
            long long q = floorDiv(f.tail, n), r = f.tail - checkedMul(q, n);
            if (r == 0 && !f.syl.empty() && f.syl.back().second == -1) {
                long long rk = f.syl.back().first;  // pinch x^-1 y^{qn} x = y^{qm}
                f.syl.pop_back();
                f.tail = checkedAdd(rk, checkedMul(q, m));
            } else {
                f.syl.push_back({r, +1});
                f.tail = checkedMul(q, m);
            }
        } else {
            long long q = floorDiv(f.tail, m), r = f.tail - checkedMul(q, m);
            if (r == 0 && !f.syl.empty() && f.syl.back().second == +1) {
                long long rk = f.syl.back().first;  // pinch x y^{qm} x^-1 = y^{qn}
                f.syl.pop_back();
                f.tail = checkedAdd(rk, checkedMul(q, n));
            } else {
                f.syl.push_back({r, -1});
                f.tail = checkedMul(q, n);
            }
        }
    }

    void mulForm(const BSForm& b) {
        for (auto& [r, e] : b.syl) { mulY(r); mulX(e); }
        mulY(b.tail);
    }
};

std::vector<int> freeConcat(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> w = a;
    for (int letter : b) {
        if (!w.empty() && w.back() == -letter) w.pop_back();
        else w.push_back(letter);
    }
    return w;
}

std::vector<int> involConcat(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> w = a;
    for (int letter : b) {
        if (!w.empty() && w.back() == letter) w.pop_back();
        else w.push_back(letter);
    }
    return w;
}

int payloadKindRank(const GroupPayload& p) { return (int)p.index(); }

}  // namespace

bool GroupElement::isIdentity() const {
    if (auto* v = std::get_if<std::vector<long long>>(&payload))
        return std::all_of(v->begin(), v->end(), [](long long x) { return x == 0; });
    if (auto* w = std::get_if<std::vector<int>>(&payload)) return w->empty();
    if (auto* b = std::get_if<BSForm>(&payload)) return b->syl.empty() && b->tail == 0;
    auto& t = std::get<std::vector<std::vector<int>>>(payload);
    return std::all_of(t.begin(), t.end(), [](auto& w) { return w.empty(); });
}

GroupElement GroupElement::mul(const GroupElement& other) const {
    GroupPayload out;
    switch (G->family) {
        case GroupFamily::FreeAbelian: {
            auto a = std::get<std::vector<long long>>(payload);
            auto& b = std::get<std::vector<long long>>(other.payload);
            for (size_t i = 0; i < a.size(); ++i) a[i] = checkedAdd(a[i], b[i]);
            out = std::move(a);
            break;
        }
        case GroupFamily::Free:
            out = freeConcat(std::get<std::vector<int>>(payload),
                             std::get<std::vector<int>>(other.payload));
            break;
        case GroupFamily::BaumslagSolitar: {
            BSBuilder bld{G->bsM, G->bsN, std::get<BSForm>(payload)};
            bld.mulForm(std::get<BSForm>(other.payload));
            out = std::move(bld.f);
            break;
        }
        case GroupFamily::ProductOfTrees: {
            auto a = std::get<std::vector<std::vector<int>>>(payload);
            auto& b = std::get<std::vector<std::vector<int>>>(other.payload);
            for (size_t i = 0; i < a.size(); ++i) a[i] = involConcat(a[i], b[i]);
            out = std::move(a);
            break;
        }
    }
    return GroupElement(G, std::move(out));
}

GroupElement GroupElement::inverse() const {
    GroupPayload out;
    switch (G->family) {
        case GroupFamily::FreeAbelian: {
            auto a = std::get<std::vector<long long>>(payload);
            for (auto& x : a) x = -x;
            out = std::move(a);
            break;
        }
        case GroupFamily::Free: {
            auto& w = std::get<std::vector<int>>(payload);
            std::vector<int> r(w.rbegin(), w.rend());
            for (auto& x : r) x = -x;
            out = std::move(r);
            break;
        }
        case GroupFamily::BaumslagSolitar: {
            auto& b = std::get<BSForm>(payload);
            BSBuilder bld{G->bsM, G->bsN, BSForm{}};
            bld.mulY(-b.tail);
            for (auto it = b.syl.rbegin(); it != b.syl.rend(); ++it) {
                bld.mulX(-it->second);
                bld.mulY(-it->first);
            }
            out = std::move(bld.f);
            break;
        }
        case GroupFamily::ProductOfTrees: {
            auto& t = std::get<std::vector<std::vector<int>>>(payload);
            std::vector<std::vector<int>> r;
            r.reserve(t.size());
            for (auto& w : t) r.emplace_back(w.rbegin(), w.rend());
            out = std::move(r);
            break;
        }
    }
    return GroupElement(G, std::move(out));
}

namespace {

void growOneSphereLocked(const GroupSpec* G) {
    auto self = const_cast<GroupSpec*>(G)->shared_from_this();
    if (G->spheres.empty()) {
        GroupElement id(self, G->identity().payload);
        G->spheres.push_back({id});
        G->distToIdentity[id.payload] = 0;
        return;
    }
    int r = (int)G->spheres.size();
    auto gens = G->symmetricGenerators();
    std::vector<GroupElement> next;
    for (const auto& s : G->spheres.back()) {
        for (const auto& g : gens) {
            GroupElement c = s.mul(g);
            if (G->distToIdentity.emplace(c.payload, r).second) next.push_back(c);
        }
    }
    std::sort(next.begin(), next.end());
    G->spheres.push_back(std::move(next));
}

int bfsLength(const GroupSpec* G, const GroupPayload& p) {
    std::lock_guard<std::mutex> lk(G->cacheMutex);
    for (;;) {
        auto it = G->distToIdentity.find(p);
        if (it != G->distToIdentity.end()) return it->second;
        if ((int)G->spheres.size() > G->bfsCap)
            throw std::domain_error("radius cap (" + std::to_string(G->bfsCap) +
                                    ") exceeded computing a word length in " + G->name());
        growOneSphereLocked(G);
    }
}

}  // namespace

int GroupElement::wordLength() const {
    switch (G->family) {
        case GroupFamily::FreeAbelian: {
            auto& v = std::get<std::vector<long long>>(payload);
            long long s = 0;
            for (auto x : v) s += std::llabs(x);
            if (s > INT32_MAX) throw std::overflow_error("word length overflow");
            return (int)s;
        }
        case GroupFamily::Free:
            return (int)std::get<std::vector<int>>(payload).size();
        case GroupFamily::BaumslagSolitar:
            return bfsLength(G.get(), payload);
        case GroupFamily::ProductOfTrees: {
            auto& t = std::get<std::vector<std::vector<int>>>(payload);
            size_t s = 0;
            for (auto& w : t) s += w.size();
            return (int)s;
        }
    }
    return 0;
}

bool GroupElement::operator<(const GroupElement& o) const {
    if (payload.index() != o.payload.index())
        return payloadKindRank(payload) < payloadKindRank(o.payload);
    if (auto* v = std::get_if<std::vector<long long>>(&payload))
        return *v < std::get<std::vector<long long>>(o.payload);
    if (auto* w = std::get_if<std::vector<int>>(&payload)) {
        auto& u = std::get<std::vector<int>>(o.payload);
        if (w->size() != u.size()) return w->size() < u.size();
        return *w < u;
    }
    if (auto* b = std::get_if<BSForm>(&payload)) return *b < std::get<BSForm>(o.payload);
    auto& a = std::get<std::vector<std::vector<int>>>(payload);
    auto& b2 = std::get<std::vector<std::vector<int>>>(o.payload);
    size_t la = 0, lb = 0;
    for (auto& w : a) la += w.size();
    for (auto& w : b2) lb += w.size();
    if (la != lb) return la < lb;
    return a < b2;
}

std::string GroupElement::str() const {
    if (isIdentity()) return "e";
    std::ostringstream os;
    auto names = G->namedGenerators();
    bool first = true;
    auto emit = [&](const std::string& name, long long exp) {
        if (exp == 0) return;
        if (!first) os << ".";
        first = false;
        os << name;
        if (exp != 1) os << "^" << exp;
    };
    switch (G->family) {
        case GroupFamily::FreeAbelian: {
            auto& v = std::get<std::vector<long long>>(payload);
            for (size_t i = 0; i < v.size(); ++i) emit(names[i].first, v[i]);
            break;
        }
        case GroupFamily::Free: {
            auto& w = std::get<std::vector<int>>(payload);
            size_t i = 0;
            while (i < w.size()) {
                size_t j = i;
                while (j < w.size() && w[j] == w[i]) ++j;
                long long exp = (long long)(j - i) * (w[i] > 0 ? 1 : -1);
                emit(names[std::abs(w[i]) - 1].first, exp);
                i = j;
            }
            break;
        }
        case GroupFamily::BaumslagSolitar: {
            auto& b = std::get<BSForm>(payload);
            for (auto& [r, e] : b.syl) {
                emit("y", r);
                emit("x", e);
            }
            emit("y", b.tail);
            break;
        }
        case GroupFamily::ProductOfTrees: {
            auto& t = std::get<std::vector<std::vector<int>>>(payload);
            for (size_t i = 0; i < t.size(); ++i)
                for (int letter : t[i]) {
                    if (!first) os << ".";
                    first = false;
                    os << "s" << (i + 1) << "_" << letter;
                }
            break;
        }
    }
    return os.str();
}

GroupPtr GroupSpec::freeAbelian(int n) {
    if (n < 1) throw std::invalid_argument("FreeAbelian rank must be >= 1");
    auto g = std::make_shared<GroupSpec>();
    g->family = GroupFamily::FreeAbelian;
    g->rank = n;
    return g;
}

GroupPtr GroupSpec::freeGroup(int k) {
    if (k < 2 || k > 26) throw std::invalid_argument("Free rank must be in [2, 26]");
    auto g = std::make_shared<GroupSpec>();
    g->family = GroupFamily::Free;
    g->rank = k;
    return g;
}

GroupPtr GroupSpec::baumslagSolitar(long long m, long long n, int cap) {
    if (m < 1 || n < 1) throw std::invalid_argument("BaumslagSolitar parameters must be >= 1");
    auto g = std::make_shared<GroupSpec>();
    g->family = GroupFamily::BaumslagSolitar;
    g->bsM = m;
    g->bsN = n;
    g->bfsCap = cap;
    return g;
}

GroupPtr GroupSpec::productOfTrees(std::vector<int> valences) {
    if (valences.empty()) throw std::invalid_argument("ProductOfTrees needs >= 1 factor");
    for (int v : valences)
        if (v < 2) throw std::invalid_argument("tree valence must be >= 2");
    auto g = std::make_shared<GroupSpec>();
    g->family = GroupFamily::ProductOfTrees;
    g->branching = std::move(valences);
    return g;
}

GroupPtr GroupSpec::parse(const std::string& s) {
    auto args = [&](size_t open) {
        size_t close = s.rfind(')');
        if (close == std::string::npos || close <= open)
            throw std::invalid_argument("bad group spec: " + s);
        std::vector<long long> out;
        std::string body = s.substr(open + 1, close - open - 1);
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
        return out;
    };
    if (s == "Z") return freeAbelian(1);
    if (s.rfind("Z^", 0) == 0) return freeAbelian(std::stoi(s.substr(2)));
    if (s.size() > 1 && s[0] == 'Z' && std::isdigit((unsigned char)s[1]) && s.find('/') == std::string::npos)
        return freeAbelian(std::stoi(s.substr(1)));
    if (s.size() > 1 && s[0] == 'F' && std::isdigit((unsigned char)s[1]))
        return freeGroup(std::stoi(s.substr(1)));
    if (s.rfind("BS(", 0) == 0) {
        auto a = args(2);
        if (a.size() != 2) throw std::invalid_argument("BS needs two parameters");
        return baumslagSolitar(a[0], a[1]);
    }
    if (s.rfind("BaumslagSolitar(", 0) == 0) {
        auto a = args(s.find('('));
        if (a.size() != 2) throw std::invalid_argument("BaumslagSolitar needs two parameters");
        return baumslagSolitar(a[0], a[1]);
    }
    if (s.rfind("T(", 0) == 0 || s.rfind("ProductOfTrees(", 0) == 0) {
        auto a = args(s.find('('));
        return productOfTrees(std::vector<int>(a.begin(), a.end()));
    }
    if (s.rfind("FreeAbelian(", 0) == 0) return freeAbelian((int)args(s.find('('))[0]);
    if (s.rfind("Free(", 0) == 0) return freeGroup((int)args(s.find('('))[0]);
    throw std::invalid_argument("unknown group: " + s);
}

std::string GroupSpec::name() const {
    switch (family) {
        case GroupFamily::FreeAbelian: return rank == 1 ? "Z" : "Z^" + std::to_string(rank);
        case GroupFamily::Free: return "F" + std::to_string(rank);
        case GroupFamily::BaumslagSolitar:
            return "BS(" + std::to_string(bsM) + "," + std::to_string(bsN) + ")";
        case GroupFamily::ProductOfTrees: {
            std::string s = "T(";
            for (size_t i = 0; i < branching.size(); ++i)
                s += (i ? "," : "") + std::to_string(branching[i]);
            return s + ")";
        }
    }
    return "?";
}

GroupElement GroupSpec::identity() const {
    auto self = const_cast<GroupSpec*>(this)->shared_from_this();
    switch (family) {
        case GroupFamily::FreeAbelian: return {self, std::vector<long long>(rank, 0)};
        case GroupFamily::Free: return {self, std::vector<int>{}};
        case GroupFamily::BaumslagSolitar: return {self, BSForm{}};
        case GroupFamily::ProductOfTrees:
            return {self, std::vector<std::vector<int>>(branching.size())};
    }
    throw std::logic_error("bad family");
}

std::vector<std::pair<std::string, GroupElement>> GroupSpec::namedGenerators() const {
    auto self = const_cast<GroupSpec*>(this)->shared_from_this();
    std::vector<std::pair<std::string, GroupElement>> out;
    switch (family) {
        case GroupFamily::FreeAbelian:
            for (int i = 0; i < rank; ++i) {
                std::vector<long long> v(rank, 0);
                v[i] = 1;
                out.emplace_back(rank == 1 ? "t" : "t" + std::to_string(i + 1),
                                 GroupElement(self, std::move(v)));
            }
            break;
        case GroupFamily::Free:
            for (int i = 0; i < rank; ++i)
                out.emplace_back(std::string(1, (char)('a' + i)),
                                 GroupElement(self, std::vector<int>{i + 1}));
            break;
        case GroupFamily::BaumslagSolitar:
            out.emplace_back("x", GroupElement(self, BSForm{{{0, +1}}, 0}));
            out.emplace_back("y", GroupElement(self, BSForm{{}, 1}));
            break;
        case GroupFamily::ProductOfTrees:
            for (size_t i = 0; i < branching.size(); ++i)
                for (int j = 0; j < branching[i]; ++j) {
                    std::vector<std::vector<int>> t(branching.size());
                    t[i] = {j};
                    out.emplace_back("s" + std::to_string(i + 1) + "_" + std::to_string(j),
                                     GroupElement(self, std::move(t)));
                }
            break;
    }
    return out;
}

std::vector<GroupElement> GroupSpec::symmetricGenerators() const {
    std::vector<GroupElement> out;
    for (auto& [name, g] : namedGenerators()) {
        out.push_back(g);
        if (family != GroupFamily::ProductOfTrees) {
            GroupElement inv = g.inverse();
            if (!(inv == g)) out.push_back(inv);
        }
    }
    return out;
}

GroupElement GroupSpec::parseElement(const std::string& word) const {
    auto self = const_cast<GroupSpec*>(this)->shared_from_this();
    std::map<std::string, GroupElement> table;
    for (auto& [n, g] : namedGenerators()) table.emplace(n, g);
    GroupElement acc = identity();
    std::string w = word;
    for (auto& c : w)
        if (c == '*' || c == ' ' || c == '\t') c = '.';
    std::stringstream ss(w);
    std::string tok;
    while (std::getline(ss, tok, '.')) {
        if (tok.empty()) continue;
        if (tok == "e" || tok == "1") continue;
        long long exp = 1;
        std::string name = tok;
        auto caret = tok.find('^');
        if (caret != std::string::npos) {
            name = tok.substr(0, caret);
            exp = std::stoll(tok.substr(caret + 1));
        }
        auto it = table.find(name);
        if (it == table.end())
            throw std::invalid_argument("unknown generator '" + name + "' in " + this->name());
        GroupElement base = exp < 0 ? it->second.inverse() : it->second;
        long long k = exp < 0 ? -exp : exp;
        // square-and-multiply keeps large abelian exponents cheap
        GroupElement pw = identity(), sq = base;
        while (k > 0) {
            if (k & 1) pw = pw.mul(sq);
            k >>= 1;
            if (k) sq = sq.mul(sq);
        }
        acc = acc.mul(pw);
    }
    (void)self;
    return acc;
}

bool sameGroup(const GroupPtr& a, const GroupPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->family == b->family && a->rank == b->rank && a->bsM == b->bsM &&
           a->bsN == b->bsN && a->branching == b->branching;
}

int distance(const GroupElement& a, const GroupElement& b) {
    return a.inverse().mul(b).wordLength();
}

std::vector<GroupElement> ballAtIdentity(const GroupPtr& G, int r) {
    if (r < 0) throw std::invalid_argument("ball radius must be >= 0");
    if (G->usesBfsMetric() && r > G->bfsCap)
        throw std::domain_error("radius cap (" + std::to_string(G->bfsCap) +
                                ") exceeded for ball in " + G->name());
    std::lock_guard<std::mutex> lk(G->cacheMutex);
    constexpr size_t kBallLimit = 2'000'000;
    while ((int)G->spheres.size() <= r) {
        size_t total = 0;
        for (auto& s : G->spheres) total += s.size();
        if (total > kBallLimit) throw std::domain_error("ball enumeration limit exceeded");
        growOneSphereLocked(G.get());
    }
    std::vector<GroupElement> out;
    for (int i = 0; i <= r; ++i)
        out.insert(out.end(), G->spheres[i].begin(), G->spheres[i].end());
    return out;
}

std::vector<GroupElement> ball(const GroupElement& center, int r) {
    auto base = ballAtIdentity(center.G, r);
    if (center.isIdentity()) {
        std::sort(base.begin(), base.end());
        return base;
    }
    std::vector<GroupElement> out;
    out.reserve(base.size());
    for (const auto& x : base) out.push_back(center.mul(x));
    std::sort(out.begin(), out.end());
    return out;
}

long long ballSize(const GroupPtr& G, int r) { return (long long)ballAtIdentity(G, r).size(); }

}  // namespace coarsemod
