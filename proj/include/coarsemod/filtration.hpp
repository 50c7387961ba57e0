#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "coarsemod/certificate.hpp"
#include "coarsemod/embedding.hpp"
#include "coarsemod/group_ring.hpp"
#include "coarsemod/subset.hpp"

namespace coarsemod {

/// Finitely generated module presented over R[G]: quotient of R[G]^rank by
/// the row span of `relations`, carrying a finite generating set sigma given
/// by labeled vectors in the ambient free module.
struct PresentedModule {
    GroupPtr G;
    Ring R;
    int rank = 0;
    GroupRingMatrix relations;  // relCount x rank; rows are relators
    std::vector<std::pair<std::string, FreeVec>> sigma;

    static PresentedModule freeModule(const GroupPtr& G, const Ring& R, int rank);
    /// Quotient of R[G]^rank by the rows of `rel`, sigma = residual basis.
    static PresentedModule quotient(const GroupRingMatrix& rel);

    std::vector<FreeVec> relationRows() const;
    int sigmaRadius() const;  // max support radius over sigma expressions

    nlohmann::json toJson() const;
    static PresentedModule fromJson(const nlohmann::json& j);
};

/// Window-truncated relation span: echelonized translates of the relators
/// whose support stays inside ball(e, window). Built once per (module,
/// window) and shared; quotient membership adjoins these rows to both sides.
struct WindowContext {
    int window = 0;
    RowReducer<Coord> modulus;
    std::vector<FreeVec> modulusGens;  // the inserted translates

    explicit WindowContext(const Ring& R) : modulus(R) {}
};

/// Finite fragment F(S) truncated to a window: explicit generators over the
/// shared relation modulus. All queries are quotient queries.
struct WindowSubmodule {
    GroupPtr G;
    Ring R;
    int window = 0;
    std::vector<FreeVec> gens;
    std::shared_ptr<const WindowContext> ctx;

    WindowSubmodule(GroupPtr g, Ring r, int w, std::vector<FreeVec> gs,
                    std::shared_ptr<const WindowContext> c);

    /// v in span(gens) + modulus; witness coefficients over gens (the
    /// modulus part of the combination is dropped).
    bool member(const FreeVec& v, SparseVec<int>* witness = nullptr) const;
    bool subsetOf(const WindowSubmodule& o) const;
    bool sameSpan(const WindowSubmodule& o) const;
    WindowSubmodule intersectWith(const WindowSubmodule& o) const;
    bool isZero() const;
    /// Size of a greedy independent generating subset modulo the relations.
    int generatorRank() const;

private:
    RowReducer<Coord> red_;  // modulus rows then gens
};

enum class FiltrationRule { Standard, ProductCanonical, Image, Cokernel, Pushforward };

std::string ruleName(FiltrationRule r);

/// Module together with a subset-indexed filtration rule, evaluated lazily
/// inside finite windows. Shared by pointer: evaluation caches the window
/// modulus per radius.
class FilteredModule : public std::enable_shared_from_this<FilteredModule> {
public:
    FiltrationRule rule = FiltrationRule::Standard;
    PresentedModule base;
    std::shared_ptr<const FilteredModule> inner;   // Pushforward carrier
    std::shared_ptr<const UniformEmbedding> emb;   // Pushforward map
    std::shared_ptr<const GroupRingMatrix> defining;  // Image/Cokernel morphism
    std::shared_ptr<const PresentedModule> target;    // Image/Cokernel target

    static std::shared_ptr<const FilteredModule> standard(PresentedModule m);
    static std::shared_ptr<const FilteredModule> productCanonical(PresentedModule m);
    /// Image filtration (im phi)(S) = phi(F(S)): standard rule on the target
    /// presentation with sigma transported along the rows of phi.
    static std::shared_ptr<const FilteredModule> image(const GroupRingMatrix& phi,
                                                       const PresentedModule& target);
    /// Cokernel filtration: target presentation with the rows of phi adjoined
    /// to the relations.
    static std::shared_ptr<const FilteredModule> cokernel(const GroupRingMatrix& phi,
                                                          const PresentedModule& target);
    static std::shared_ptr<const FilteredModule> pushforward(
        std::shared_ptr<const FilteredModule> inner, const UniformEmbedding& j);

    /// The space whose subsets index the filtration (differs from the
    /// carrier group for pushforwards).
    GroupPtr space() const;
    const Ring& ring() const { return base.R; }
    int sigmaRadius() const;

    /// Window truncation of F(S). Throws WindowError when S or the generator
    /// supports escape ball(e, window).
    WindowSubmodule evaluate(const MetricSubset& S, int window) const;

    std::shared_ptr<const WindowContext> context(int window) const;

    nlohmann::json toJson() const;
    static std::shared_ptr<const FilteredModule> fromJson(const nlohmann::json& j);

private:
    mutable std::mutex cacheMutex_;
    mutable std::map<int, std::shared_ptr<const WindowContext>> ctxCache_;
};

using FilteredModulePtr = std::shared_ptr<const FilteredModule>;

/// s(F, Sigma): S maps to the R-span of S.Sigma.
FilteredModulePtr standard_filtration(PresentedModule m);

/// Source window radius needed so that every preimage of ball(e, r) under j
/// is seen: the largest t with f(t) <= r. Throws when f never climbs past r.
int preimageRadius(const UniformEmbedding& j, int r);

}  // namespace coarsemod
