#pragma once

#include <optional>

#include "coarsemod/filtration.hpp"

namespace coarsemod {

/// Deterministic subset/pair sampler: all singletons in the ball (strided if
/// over budget), balls x[k] for k <= 3 with centers in the half ball, seeded
/// random subsets of size <= 6, and the antipodal pairs ({x}, {x^-1}) that
/// falsify insularity of quotient-like modules.
struct SamplingPlan {
    uint64_t seed = 1;
    int radius = 0;
    int maxSubsets = 200;
    int maxPairs = 120;
    int randomSubsets = 50;

    /// Plan whose subsets stay inside ball(e, window - slack).
    static SamplingPlan forWindow(int window, int slack, uint64_t seed = 1);

    std::vector<MetricSubset> subsets(const GroupPtr& G) const;
    std::vector<std::pair<MetricSubset, MetricSubset>> pairs(const GroupPtr& G) const;
};

/// F(S) <= sum over x in S of F(x[D]), tested as F(S) <= F(S[D]) (the shipped
/// rules all evaluate unions generator-wise, so the two sides agree).
ControlCertificate check_lean(const FilteredModule& M, int D, int window,
                              const SamplingPlan& plan);

/// F(S) cap F(U) <= F(S[d] cap U[d]) over all sampled pairs.
ControlCertificate check_insular(const FilteredModule& M, int d, int window,
                                 const SamplingPlan& plan);

/// Same inclusion, quantified only over coarsely antithetic pairs: pairs with
/// S[c] cap T[c] <= (S cap T)[c'] for every c <= window and some c' <= window.
ControlCertificate check_insular_antithetic(const FilteredModule& M, int d, int window,
                                            const SamplingPlan& plan);

struct AntitheticResult {
    bool pass = false;
    int dPrime = 0;
};

/// Least d' <= window with S[d] cap T[d] <= (S cap T)[d'].
AntitheticResult check_antithetic_pair(const MetricSubset& S, const MetricSubset& T, int d,
                                       int window);

bool coarsely_antithetic(const MetricSubset& S, const MetricSubset& T, int window);

/// First constant in 0..window whose check passes (property is monotone in
/// the constant), or nullopt.
std::optional<int> minimal_lean_constant(const FilteredModule& M, int window,
                                         uint64_t seed = 1);
std::optional<int> minimal_insular_constant(const FilteredModule& M, int window,
                                            uint64_t seed = 1, bool antithetic = false);

}  // namespace coarsemod
