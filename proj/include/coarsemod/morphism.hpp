#pragma once

#include "coarsemod/checks.hpp"

namespace coarsemod {

/// Map between filtered modules over the same group ring, acting on row
/// vectors through `action` (g.e_i goes to the g-translate of row i).
/// Per-coordinate overrides model window maps that are not group-ring-linear;
/// installing one clears the equivariance flag.
struct FilteredMorphism {
    FilteredModulePtr source, target;
    GroupRingMatrix action;
    bool equivariant = true;
    std::map<Coord, FreeVec> overrides;

    FilteredMorphism(FilteredModulePtr src, FilteredModulePtr dst, GroupRingMatrix a);
    static FilteredMorphism identityOn(const FilteredModulePtr& M);

    FreeVec applyCoord(const Coord& c) const;
    FreeVec apply(const FreeVec& v) const;
    void overrideCoord(const Coord& c, FreeVec image);

    /// Worst support shift of a coordinate image (the a-priori control bound).
    int shift() const;

    nlohmann::json toJson() const;
    static FilteredMorphism fromJson(FilteredModulePtr src, FilteredModulePtr dst,
                                     const nlohmann::json& j);
};

/// Least b <= window with phi(F(S)) <= F'(S[b]) over the sampled subsets.
ControlCertificate bound_of(const FilteredMorphism& phi, int window, const SamplingPlan& plan);

/// im(phi) cap F'(S) <= phi(F(S[b])), the image approximated by phi of the
/// largest budgeted ball; its radius is recorded in the details.
ControlCertificate check_bicontrolled(const FilteredMorphism& phi, int b, int window,
                                      const SamplingPlan& plan);

enum class MorphismClass { AdmissibleMono, AdmissibleEpi, Both, Neither };

const char* morphismClassName(MorphismClass c);

struct ClassifyResult {
    MorphismClass verdict = MorphismClass::Neither;
    bool injective = false;
    bool surjective = false;
    ControlCertificate bound;      // least-bound scan
    ControlCertificate bicontrol;  // at the found bound
    nlohmann::json details;        // radii and enlargements used

    nlohmann::json toJson() const;
};

/// Window classification: injectivity from the kernel of the stacked
/// coordinate images plus the target relation modulus, surjectivity from
/// preimages of the target window generators inside the source window
/// enlarged by the measured bound.
ClassifyResult classify_morphism(const FilteredMorphism& phi, int window,
                                 const SamplingPlan& plan);

/// Least d with phi(F({e})) <= F'(e[d]); translation-invariance of the word
/// metric makes this a global bound. Requires a group-ring-linear morphism
/// between standard-type filtrations.
int generator_bound(const FilteredMorphism& phi);

/// phi(gamma.v) = gamma.phi(v) modulo the target relations, sampled over
/// gamma and window coordinates (canonical translation structures).
ControlCertificate check_equivariance(const FilteredMorphism& phi, int window,
                                      const SamplingPlan& plan);

/// Free module on finitely many marked points, one rank per point.
struct GeometricModule {
    GroupPtr G;
    Ring R;
    std::vector<std::pair<GroupElement, int>> ranks;  // sorted by point

    static GeometricModule of(GroupPtr G, Ring R,
                              std::vector<std::pair<GroupElement, int>> ranks);
    int rankAt(const GroupElement& x) const;  // 0 when the point is unmarked
    bool samePoints(const GeometricModule& o) const;
};

/// Dense scalar block, rank(x) rows by rank(x') columns, row-vector action.
using ScalarBlock = std::vector<std::vector<Scalar>>;

/// Morphism of geometric modules: component blocks phi_{x,x'}, zero beyond
/// the declared bound. Declared bounds are upper bounds and never tightened
/// silently; measuredBound() reports the sharp value.
struct GeometricMorphism {
    GeometricModule source, target;
    int declaredBound = 0;
    std::map<std::pair<GroupElement, GroupElement>, ScalarBlock> blocks;

    static GeometricMorphism identityOn(const GeometricModule& M);

    void setBlock(const GroupElement& x, const GroupElement& xp, ScalarBlock b);
    /// Zero block of the right shape when absent.
    ScalarBlock blockAt(const GroupElement& x, const GroupElement& xp) const;
    int measuredBound() const;
    /// Shapes match the rank functions and nothing lives beyond the bound.
    bool validate() const;
    bool sameBlocks(const GeometricMorphism& o) const;
};

/// (psi . phi)_{x,x'} = sum over z of phi_{x,z} psi_{z,x'} in the row-vector
/// orientation; declared bound adds.
GeometricMorphism compose_geometric(const GeometricMorphism& psi, const GeometricMorphism& phi);

}  // namespace coarsemod
