#include "coarsemod/embedding.hpp"

#include <random>

namespace coarsemod {

WitnessTable WitnessTable::linear(long long slope, long long offset) {
    WitnessTable w;
    w.pts = {{0, offset}, {1, slope + offset}};
    return w;
}

WitnessTable WitnessTable::fromJson(const nlohmann::json& j) {
    WitnessTable w;
    for (auto& p : j) w.pts.emplace_back(p.at(0).get<long long>(), p.at(1).get<long long>());
    if (w.pts.empty()) throw std::invalid_argument("empty witness table");
    for (size_t i = 1; i < w.pts.size(); ++i)
        if (w.pts[i].first <= w.pts[i - 1].first)
            throw std::invalid_argument("witness table breakpoints must increase");
    return w;
}

nlohmann::json WitnessTable::toJson() const {
    nlohmann::json arr = nlohmann::json::array();
    for (auto& [t, v] : pts) arr.push_back({t, v});
    return arr;
}

long long WitnessTable::operator()(long long t) const {
    if (pts.empty()) return 0;
    if (pts.size() == 1) return pts[0].second;
    if (t <= pts.front().first) return pts.front().second;
    for (size_t i = 1; i < pts.size(); ++i) {
        auto [t0, v0] = pts[i - 1];
        auto [t1, v1] = pts[i];
        if (t <= t1) return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
    auto [t0, v0] = pts[pts.size() - 2];
    auto [t1, v1] = pts.back();
    return v1 + (v1 - v0) * (t - t1) / (t1 - t0);
}

bool WitnessTable::monotone() const {
    for (size_t i = 1; i < pts.size(); ++i)
        if (pts[i].second < pts[i - 1].second) return false;
    return true;
}

bool WitnessTable::divergent() const {
    if (pts.size() < 2) return false;
    return pts.back().second > pts[pts.size() - 2].second;
}

UniformEmbedding UniformEmbedding::identity(const GroupPtr& G) {
    UniformEmbedding e;
    e.src = e.dst = G;
    e.kind = EmbeddingKind::Identity;
    e.f = e.g = WitnessTable::linear(1);
    return e;
}

UniformEmbedding UniformEmbedding::doubling(const GroupPtr& zn, long long factor) {
    if (zn->family != GroupFamily::FreeAbelian)
        throw std::invalid_argument("doubling embedding needs a free abelian group");
    if (factor < 1) throw std::invalid_argument("doubling factor must be >= 1");
    UniformEmbedding e;
    e.src = e.dst = zn;
    e.kind = EmbeddingKind::Doubling;
    e.factor = factor;
    e.f = e.g = WitnessTable::linear(factor);
    return e;
}

UniformEmbedding UniformEmbedding::znToTrees(int n) {
    UniformEmbedding e;
    e.src = GroupSpec::freeAbelian(n);
    e.dst = GroupSpec::productOfTrees(std::vector<int>(n, 2));
    e.kind = EmbeddingKind::ZnToTrees;
    e.f = e.g = WitnessTable::linear(1);
    return e;
}

UniformEmbedding UniformEmbedding::projection(int n, WitnessTable f, WitnessTable g) {
    if (n < 2) throw std::invalid_argument("projection fixture needs n >= 2");
    UniformEmbedding e;
    e.src = GroupSpec::freeAbelian(n);
    e.dst = GroupSpec::freeAbelian(1);
    e.kind = EmbeddingKind::Projection;
    e.f = std::move(f);
    e.g = std::move(g);
    return e;
}

std::string UniformEmbedding::name() const {
    switch (kind) {
        case EmbeddingKind::Identity: return "identity:" + src->name();
        case EmbeddingKind::Doubling:
            return "doubling(" + std::to_string(factor) + "):" + src->name();
        case EmbeddingKind::ZnToTrees: return src->name() + "->" + dst->name();
        case EmbeddingKind::Projection: return "projection:" + src->name() + "->Z";
    }
    return "?";
}

nlohmann::json UniformEmbedding::toJson() const {
    const char* names[] = {"identity", "doubling", "zn-to-trees", "projection"};
    return {{"kind", names[(int)kind]},
            {"source", src->name()},
            {"target", dst->name()},
            {"factor", factor},
            {"f", f.toJson()},
            {"g", g.toJson()}};
}

UniformEmbedding UniformEmbedding::fromJson(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return identity(GroupSpec::parse(j.at("source").get<std::string>()));
    if (kind == "doubling")
        return doubling(GroupSpec::parse(j.at("source").get<std::string>()),
                        j.value("factor", 2LL));
    if (kind == "zn-to-trees") {
        auto G = GroupSpec::parse(j.at("source").get<std::string>());
        return znToTrees(G->rank);
    }
    if (kind == "projection") {
        auto G = GroupSpec::parse(j.at("source").get<std::string>());
        return projection(G->rank, WitnessTable::fromJson(j.at("f")),
                          WitnessTable::fromJson(j.at("g")));
    }
    throw std::invalid_argument("unknown embedding kind: " + kind);
}

namespace {

/// Geodesic parametrization of the bi-infinite line Z/2 * Z/2: nonnegative k
/// alternates 0,1,0,... negative k alternates 1,0,1,...
std::vector<int> lineWord(long long k) {
    std::vector<int> w;
    long long n = k < 0 ? -k : k;
    int first = k < 0 ? 1 : 0;
    for (long long i = 0; i < n; ++i) w.push_back((first + (int)(i % 2)) % 2);
    return w;
}

}  // namespace

GroupElement UniformEmbedding::apply(const GroupElement& x) const {
    switch (kind) {
        case EmbeddingKind::Identity: return x;
        case EmbeddingKind::Doubling: {
            auto v = std::get<std::vector<long long>>(x.payload);
            for (auto& c : v) {
                long long r;
                if (__builtin_mul_overflow(c, factor, &r)) throw std::overflow_error("doubling overflow");
                c = r;
            }
            return GroupElement(dst, std::move(v));
        }
        case EmbeddingKind::ZnToTrees: {
            auto& v = std::get<std::vector<long long>>(x.payload);
            std::vector<std::vector<int>> t;
            t.reserve(v.size());
            for (long long c : v) t.push_back(lineWord(c));
            return GroupElement(dst, std::move(t));
        }
        case EmbeddingKind::Projection: {
            auto& v = std::get<std::vector<long long>>(x.payload);
            return GroupElement(dst, std::vector<long long>{v[0]});
        }
    }
    throw std::logic_error("bad embedding kind");
}

std::vector<GroupElement> UniformEmbedding::preimage(const MetricSubset& T, int srcWindow) const {
    std::vector<GroupElement> out;
    for (auto& x : ballAtIdentity(src, srcWindow))
        if (T.contains(apply(x))) out.push_back(x);
    std::sort(out.begin(), out.end());
    return out;
}

ControlCertificate verify_uniform_embedding(
    const UniformEmbedding& emb,
    const std::vector<std::pair<GroupElement, GroupElement>>& pairs) {
    nlohmann::json details{{"pairs", pairs.size()}};
    if (!emb.f.monotone() || !emb.g.monotone())
        return ControlCertificate::failed("uniform-embedding", 0, 0,
                                          {{"note", "witness table not monotone"}}, details);
    if (!emb.f.divergent() || !emb.g.divergent())
        return ControlCertificate::failed("uniform-embedding", 0, 0,
                                          {{"note", "witness table not divergent"}}, details);
    for (auto& [x, y] : pairs) {
        long long d1 = distance(x, y);
        long long d2 = distance(emb.apply(x), emb.apply(y));
        long long lo = emb.f(d1), hi = emb.g(d1);
        if (lo > hi)
            return ControlCertificate::failed("uniform-embedding", d1, 0,
                                              {{"note", "f exceeds g"}, {"at", d1}}, details);
        if (d2 < lo || d2 > hi) {
            nlohmann::json cx{{"x", x.str()},
                              {"y", y.str()},
                              {"source_distance", d1},
                              {"target_distance", d2},
                              {"side", d2 < lo ? "lower" : "upper"}};
            return ControlCertificate::failed("uniform-embedding", d1, 0, cx, details);
        }
    }
    return ControlCertificate::passed("uniform-embedding", 0, 0, details);
}

std::vector<std::pair<GroupElement, GroupElement>> samplePairs(const GroupPtr& G, int r,
                                                               uint64_t seed, int count) {
    auto B = ballAtIdentity(G, r);
    std::vector<std::pair<GroupElement, GroupElement>> out;
    // canonical short pairs: identity against every sphere representative
    for (size_t i = 0; i < B.size() && (int)out.size() < count / 2; i += std::max<size_t>(1, B.size() / 16))
        out.emplace_back(B[0], B[i]);
    std::mt19937_64 rng(seed);
    while ((int)out.size() < count) {
        const auto& a = B[rng() % B.size()];
        const auto& b = B[rng() % B.size()];
        out.emplace_back(a, b);
    }
    return out;
}

}  // namespace coarsemod
