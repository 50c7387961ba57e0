#include "coarsemod/checks.hpp"

#include <random>

namespace coarsemod {

SamplingPlan SamplingPlan::forWindow(int window, int slack, uint64_t seed) {
    SamplingPlan p;
    p.seed = seed;
    p.radius = std::max(0, window - slack);
    return p;
}

std::vector<MetricSubset> SamplingPlan::subsets(const GroupPtr& G) const {
    std::vector<MetricSubset> out;
    auto B = ballAtIdentity(G, radius);

    // singletons, strided down to half the budget when the ball is large
    size_t singleBudget = (size_t)std::max(1, maxSubsets / 2);
    size_t stride = std::max<size_t>(1, B.size() / singleBudget);
    for (size_t i = 0; i < B.size(); i += stride) out.push_back(MetricSubset::singleton(B[i]));

    // small balls around half-window centers
    size_t ballBudget = (size_t)std::max(1, maxSubsets / 4);
    auto centers = ballAtIdentity(G, radius / 2);
    size_t cstride = std::max<size_t>(1, 3 * centers.size() / ballBudget);
    size_t emitted = 0;
    for (int k = 1; k <= 3; ++k)
        for (size_t i = 0; i < centers.size() && emitted < ballBudget; i += cstride) {
            if (centers[i].wordLength() + k > radius) continue;
            out.push_back(MetricSubset::ofBall(centers[i], k));
            ++emitted;
        }

    std::mt19937_64 rng(seed);
    for (int t = 0; t < randomSubsets && !B.empty(); ++t) {
        size_t sz = 1 + rng() % 6;
        std::vector<GroupElement> xs;
        for (size_t i = 0; i < sz; ++i) xs.push_back(B[rng() % B.size()]);
        out.push_back(MetricSubset::of(G, std::move(xs)));
    }
    if ((int)out.size() > maxSubsets) out.resize(maxSubsets);
    return out;
}

std::vector<std::pair<MetricSubset, MetricSubset>> SamplingPlan::pairs(const GroupPtr& G) const {
    std::vector<std::pair<MetricSubset, MetricSubset>> out;
    auto B = ballAtIdentity(G, radius);
    for (const auto& x : B) {
        if (x.isIdentity()) continue;
        auto xi = x.inverse();
        if (xi < x) continue;  // one orientation per antipodal pair
        out.emplace_back(MetricSubset::singleton(x), MetricSubset::singleton(xi));
        if ((int)out.size() >= maxPairs / 2) break;
    }
    auto subs = subsets(G);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    while ((int)out.size() < maxPairs && !subs.empty()) {
        const auto& S = subs[rng() % subs.size()];
        const auto& T = subs[rng() % subs.size()];
        out.emplace_back(S, T);
    }
    return out;
}

ControlCertificate check_lean(const FilteredModule& M, int D, int window,
                              const SamplingPlan& plan) {
    auto space = M.space();
    int checked = 0;
    for (const auto& S : plan.subsets(space)) {
        auto FS = M.evaluate(S, window);
        auto target = D == 0 ? FS : M.evaluate(S.enlarged(D), window);
        for (const auto& g : FS.gens)
            if (!target.member(g))
                return ControlCertificate::failed(
                    "lean", D, window,
                    {{"S", S.toJson()}, {"witness", freeVecStr(g)}},
                    {{"subsets", checked}});
        ++checked;
    }
    return ControlCertificate::passed("lean", D, window, {{"subsets", checked}});
}

namespace {

ControlCertificate insularBody(const FilteredModule& M, int d, int window,
                               const SamplingPlan& plan, bool antitheticOnly) {
    auto space = M.space();
    int checked = 0, skipped = 0;
    const char* kind = antitheticOnly ? "antithetic-insular" : "insular";
    for (const auto& [S, U] : plan.pairs(space)) {
        if (antitheticOnly && !coarsely_antithetic(S, U, window)) {
            ++skipped;
            continue;
        }
        auto A = M.evaluate(S, window);
        auto B = M.evaluate(U, window);
        auto I = A.intersectWith(B);
        auto target = M.evaluate(S.enlarged(d).intersect(U.enlarged(d)), window);
        for (const auto& g : I.gens)
            if (!target.member(g))
                return ControlCertificate::failed(
                    kind, d, window,
                    {{"S", S.toJson()}, {"U", U.toJson()}, {"witness", freeVecStr(g)}},
                    {{"pairs", checked}, {"skipped", skipped}});
        ++checked;
    }
    return ControlCertificate::passed(kind, d, window,
                                      {{"pairs", checked}, {"skipped", skipped}});
}

}  // namespace

ControlCertificate check_insular(const FilteredModule& M, int d, int window,
                                 const SamplingPlan& plan) {
    return insularBody(M, d, window, plan, false);
}

ControlCertificate check_insular_antithetic(const FilteredModule& M, int d, int window,
                                            const SamplingPlan& plan) {
    return insularBody(M, d, window, plan, true);
}

AntitheticResult check_antithetic_pair(const MetricSubset& S, const MetricSubset& T, int d,
                                       int window) {
    auto A = S.enlarged(d).intersect(T.enlarged(d));
    auto B = S.intersect(T);
    for (int dp = 0; dp <= window; ++dp)
        if (A.subsetOf(B.enlarged(dp))) return {true, dp};
    return {false, window};
}

bool coarsely_antithetic(const MetricSubset& S, const MetricSubset& T, int window) {
    for (int c = 0; c <= window; ++c)
        if (!check_antithetic_pair(S, T, c, window).pass) return false;
    return true;
}

std::optional<int> minimal_lean_constant(const FilteredModule& M, int window, uint64_t seed) {
    int slack = M.sigmaRadius();
    for (int D = 0; D + slack <= window; ++D) {
        auto plan = SamplingPlan::forWindow(window, D + slack, seed);
        if (plan.radius <= 0) break;
        if (check_lean(M, D, window, plan).pass) return D;
    }
    return std::nullopt;
}

std::optional<int> minimal_insular_constant(const FilteredModule& M, int window, uint64_t seed,
                                            bool antithetic) {
    int slack = M.sigmaRadius();
    for (int d = 0; d + slack <= window; ++d) {
        auto plan = SamplingPlan::forWindow(window, d + slack, seed);
        if (plan.radius <= 0) break;
        auto cert = antithetic ? check_insular_antithetic(M, d, window, plan)
                               : check_insular(M, d, window, plan);
        if (cert.pass) return d;
    }
    return std::nullopt;
}

}  // namespace coarsemod
