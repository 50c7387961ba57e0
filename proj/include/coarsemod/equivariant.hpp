#pragma once

#include "coarsemod/checks.hpp"

namespace coarsemod {

/// Canonical equivariant structure of a standard-type filtration: psi(gamma)
/// is the degree-0 isomorphism F -> gamma.F sending the generator translate
/// s.sigma to gamma^-1 s.sigma, i.e. coordinate translation. The underlying
/// modules of F and gamma.F coincide, so psi composes as a plain map.
struct EquivariantStructure {
    FilteredModulePtr carrier;

    FreeVec psi(const GroupElement& gamma, const FreeVec& v) const {
        return translate(gamma.inverse(), v);
    }
    FreeVec psiInverse(const GroupElement& gamma, const FreeVec& v) const {
        return translate(gamma, v);
    }
};

/// Rejects pushforward rules: their index space carries no compatible action.
EquivariantStructure equivariant_of(const FilteredModulePtr& M);

/// psi(g1 g2) = psi(g2) . psi(g1) on sampled pairs and test vectors, plus
/// psi(1) = id. The gamma-prefix in the written law relabels filtrations
/// only, so this is the executable form.
ControlCertificate check_cocycle(const EquivariantStructure& E, int window,
                                 const SamplingPlan& plan);

/// psi(gamma) F(S) = F(gamma^-1 S) as window spans: degree 0 in both
/// directions, and equivariance of the filtration rule itself.
ControlCertificate check_degree_zero(const EquivariantStructure& E, int window,
                                     const SamplingPlan& plan);

/// Group-ring action recovered from the structure: sum r_gamma gamma acts by
/// sum r_gamma psi(gamma)^-1, which round-trips to left multiplication.
struct RecoveredAction {
    EquivariantStructure E;
    PresentedModule base;
    ControlCertificate cocycle;

    FreeVec act(const GroupRingElement& r, const FreeVec& v) const;
};

/// Certifies the cocycle law first; throws if it fails.
RecoveredAction action_from_equivariant(const EquivariantStructure& E, int window = 8,
                                        uint64_t seed = 1);

}  // namespace coarsemod
