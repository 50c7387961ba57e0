#include "coarsemod/equivariant.hpp"

#include <random>

namespace coarsemod {

EquivariantStructure equivariant_of(const FilteredModulePtr& M) {
    if (M->rule == FiltrationRule::Pushforward)
        throw std::invalid_argument("equivariant_of: pushforward filtrations carry no action");
    return {M};
}

namespace {

std::vector<FreeVec> testVectors(const FilteredModule& M, std::mt19937_64& rng, int radius) {
    std::vector<FreeVec> out;
    for (const auto& [label, expr] : M.base.sigma)
        if (!expr.empty()) out.push_back(expr);
    auto B = ballAtIdentity(M.base.G, radius);
    const Ring& R = M.base.R;
    for (int t = 0; t < 8 && !B.empty(); ++t) {
        FreeVec v;
        size_t terms = 1 + rng() % 3;
        for (size_t i = 0; i < terms; ++i) {
            Coord c{B[rng() % B.size()], (int)(rng() % (uint64_t)std::max(1, M.base.rank))};
            v = svAxpy(R, v, R.fromInt(1 + (long)(rng() % 3)), FreeVec{{c, R.one()}});
        }
        if (!v.empty()) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

ControlCertificate check_cocycle(const EquivariantStructure& E, int window,
                                 const SamplingPlan& plan) {
    const auto& M = *E.carrier;
    auto G = M.base.G;
    std::mt19937_64 rng(plan.seed ^ 0x2545f4914f6cdd1dULL);
    auto B = ballAtIdentity(G, std::max(1, plan.radius / 2));
    auto vecs = testVectors(M, rng, std::max(1, plan.radius / 2));

    std::vector<std::pair<GroupElement, GroupElement>> samples;
    samples.emplace_back(G->identity(), G->identity());
    for (size_t i = 1; i < B.size() && samples.size() < 6; ++i) {
        samples.emplace_back(G->identity(), B[i]);
        samples.emplace_back(B[i], G->identity());
    }
    while (samples.size() < 50 + 5 && !B.empty())
        samples.emplace_back(B[rng() % B.size()], B[rng() % B.size()]);

    int checked = 0;
    for (const auto& [g1, g2] : samples)
        for (const auto& v : vecs) {
            auto lhs = E.psi(g1.mul(g2), v);
            auto rhs = E.psi(g2, E.psi(g1, v));
            ++checked;
            if (lhs != rhs)
                return ControlCertificate::failed(
                    "equivariant", 0, window,
                    {{"gamma1", g1.str()}, {"gamma2", g2.str()}, {"vector", freeVecStr(v)}},
                    {{"samples", checked}});
            if (g1.isIdentity() && E.psi(g1, v) != v)
                return ControlCertificate::failed("equivariant", 0, window,
                                                  {{"gamma1", g1.str()}, {"vector", freeVecStr(v)}},
                                                  {{"samples", checked}});
        }
    return ControlCertificate::passed("equivariant", 0, window, {{"samples", checked}});
}

ControlCertificate check_degree_zero(const EquivariantStructure& E, int window,
                                     const SamplingPlan& plan) {
    const auto& M = *E.carrier;
    auto G = M.base.G;
    const Ring& R = M.base.R;

    SamplingPlan p = plan;
    p.radius = std::max(0, plan.radius / 2);
    auto gammas = ballAtIdentity(G, std::max(0, std::min(plan.radius - p.radius, p.radius)));
    size_t stride = std::max<size_t>(1, gammas.size() / 6);

    int checked = 0;
    auto ctx = M.context(window);
    for (const auto& S : p.subsets(G)) {
        int rS = 0;
        for (const auto& x : S.elems) rS = std::max(rS, x.wordLength());
        for (size_t gi = 0; gi < gammas.size(); gi += stride) {
            const auto& gamma = gammas[gi];
            if (gamma.wordLength() + rS > window - M.sigmaRadius()) continue;

            auto A = M.evaluate(S, window);
            std::vector<FreeVec> moved;
            for (const auto& g : A.gens) moved.push_back(E.psi(gamma, g));
            WindowSubmodule lhs(G, R, window, std::move(moved), ctx);

            std::vector<GroupElement> shifted;
            auto gi2 = gamma.inverse();
            for (const auto& x : S.elems) shifted.push_back(gi2.mul(x));
            auto rhs = M.evaluate(MetricSubset::of(G, std::move(shifted)), window);

            ++checked;
            if (!lhs.sameSpan(rhs))
                return ControlCertificate::failed(
                    "equivariant", 0, window,
                    {{"gamma", gamma.str()}, {"S", S.toJson()}},
                    {{"samples", checked}});
        }
    }
    return ControlCertificate::passed("equivariant", 0, window, {{"samples", checked}});
}

FreeVec RecoveredAction::act(const GroupRingElement& r, const FreeVec& v) const {
    const Ring& R = base.R;
    FreeVec out;
    for (const auto& [g, c] : r.terms) out = svAxpy(R, out, c, E.psiInverse(g, v));
    return out;
}

RecoveredAction action_from_equivariant(const EquivariantStructure& E, int window,
                                        uint64_t seed) {
    auto cert = check_cocycle(E, window, SamplingPlan::forWindow(window, 0, seed));
    if (!cert.pass)
        throw std::invalid_argument("action_from_equivariant: cocycle law failed on samples");
    return {E, E.carrier->base, std::move(cert)};
}

}  // namespace coarsemod
