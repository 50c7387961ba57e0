#pragma once

#include "coarsemod/certificate.hpp"
#include "coarsemod/subset.hpp"

namespace coarsemod {

/// Monotone piecewise-linear witness function given by breakpoints; values
/// between breakpoints interpolate linearly (floor), beyond the last point the
/// final slope extrapolates.
struct WitnessTable {
    std::vector<std::pair<long long, long long>> pts;  // (t, value), t strictly increasing

    static WitnessTable linear(long long slope, long long offset = 0);
    static WitnessTable fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;

    long long operator()(long long t) const;
    bool monotone() const;
    /// Divergence on the inspected prefix: positive final slope.
    bool divergent() const;
};

enum class EmbeddingKind { Identity, Doubling, ZnToTrees, Projection };

/// Map between group metric spaces with distortion envelopes f <= g. Only the
/// shipped rules are constructible; arbitrary maps are out of scope.
struct UniformEmbedding {
    GroupPtr src, dst;
    EmbeddingKind kind = EmbeddingKind::Identity;
    long long factor = 1;  // Doubling multiplier
    WitnessTable f, g;

    static UniformEmbedding identity(const GroupPtr& G);
    static UniformEmbedding doubling(const GroupPtr& zn, long long factor);
    static UniformEmbedding znToTrees(int n);
    /// First-coordinate projection Z^n -> Z with caller-supplied witnesses
    /// (ships as the falsification fixture: no divergent f can work).
    static UniformEmbedding projection(int n, WitnessTable f, WitnessTable g);
    static UniformEmbedding fromJson(const nlohmann::json& j);
    nlohmann::json toJson() const;
    std::string name() const;

    GroupElement apply(const GroupElement& x) const;
    /// All window elements mapping into T: { x in ball(e, srcWindow) : apply(x) in T }.
    std::vector<GroupElement> preimage(const MetricSubset& T, int srcWindow) const;
};

/// Checks f(d(x,y)) <= d(phi x, phi y) <= g(d(x,y)) on every supplied pair.
ControlCertificate verify_uniform_embedding(
    const UniformEmbedding& emb, const std::vector<std::pair<GroupElement, GroupElement>>& pairs);

/// Deterministic pair sample inside ball(e, r): all pairs among a canonical
/// subsample plus seeded random pairs.
std::vector<std::pair<GroupElement, GroupElement>> samplePairs(const GroupPtr& G, int r,
                                                               uint64_t seed, int count);

}  // namespace coarsemod
