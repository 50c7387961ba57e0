#pragma once

#include "coarsemod/morphism.hpp"
#include "coarsemod/poly.hpp"

namespace coarsemod {

enum class KernelMode { Auto, GroebnerComplete, WindowVerified };

/// Generators of the kernel of a covered morphism. Complete mode guarantees
/// the full kernel; window-verified mode guarantees every kernel element
/// supported inside ball(e, windowRadius) lies in the span of the generators.
struct SyzygyResult {
    std::vector<FreeVec> generators;
    bool complete = false;
    int windowRadius = 0;

    nlohmann::json toJson() const;
};

/// Kernel of the row-vector morphism phi : R[G]^rows -> target. Exact
/// (Groebner over the doubled polynomial presentation) for Z^n with field
/// coefficients; window-verified from the stacked translate kernel elsewhere.
SyzygyResult kernel_of(const GroupRingMatrix& phi, const PresentedModule& target, int window,
                       KernelMode mode = KernelMode::Auto, uint64_t seed = 1);

/// Free cover R[G]^{|sigma|} -> M, basis slot i onto sigma_i, carrying the
/// product-canonical filtration and a bicontrol certificate for pi.
struct FreeCover {
    FilteredModulePtr cover;
    FilteredModulePtr target;
    GroupRingMatrix pi;
    ControlCertificate bound;
    ControlCertificate bicontrol;

    nlohmann::json toJson() const;
};

FreeCover free_cover(const FilteredModulePtr& M, int window, const SamplingPlan& plan);

/// Per-stage record of a resolution step: the kernel rank, how the kernel was
/// certified, and the control constants of the kernel's image filtration.
struct ResolutionStage {
    int rank = 0;
    bool complete = false;
    int windowRadius = 0;
    std::optional<int> leanConstant;
    std::optional<int> insularConstant;

    nlohmann::json toJson() const;
};

/// Chain F_len -> ... -> F_1 -> F_0 -> M with d.d = 0 exactly; window
/// exactness holds at the recorded slack (sum of the measured bounds).
struct ResolutionChain {
    PresentedModule module;
    GroupRingMatrix pi;                          // F_0 -> M
    std::vector<GroupRingMatrix> differentials;  // d_i : F_i -> F_{i-1}
    std::vector<ResolutionStage> stages;         // one per differential
    bool terminated = false;                     // kernel reached zero

    int length() const { return (int)differentials.size(); }
    std::vector<int> ranks() const;
    int exactnessSlack() const;

    nlohmann::json toJson() const;
};

/// Iterated free covers: cover, kernel, cover of the kernel, ... until the
/// kernel vanishes or maxDepth differentials have been emitted (depth
/// exhaustion leaves terminated = false, it is not an error).
ResolutionChain resolve(const PresentedModule& m, int maxDepth, int window, uint64_t seed = 1);

/// Every window kernel element of the stage map at the probe radius is hit by
/// the next differential within the chain slack; the final stage passes when
/// its window kernel is zero.
ControlCertificate check_window_exactness(const ResolutionChain& chain, int stage, int radius,
                                          int window);

/// Image and cokernel filtrations of a morphism with fresh control
/// certificates. The constructions require bicontrol; when that hypothesis
/// fails the certificates are still reported, tagged unmet.
struct ImageCokernelReport {
    FilteredModulePtr image;
    FilteredModulePtr cokernel;
    bool hypothesisMet = false;
    ControlCertificate bound;
    ControlCertificate bicontrol;
    ControlCertificate imageLean, imageInsular;
    ControlCertificate cokernelLean, cokernelInsular;

    nlohmann::json toJson() const;
};

ImageCokernelReport image_cokernel(const FilteredMorphism& phi, int window,
                                   const SamplingPlan& plan);

/// Direct-summand report for an exactly idempotent matrix e: control data of
/// the image filtration plus the window splitting im(e) + im(1-e).
struct IdempotentReport {
    FilteredModulePtr image;
    ControlCertificate bound;
    ControlCertificate bicontrol;
    ControlCertificate lean, insular;
    bool sumFull = false;
    bool intersectionZero = false;

    nlohmann::json toJson() const;
};

/// Throws std::invalid_argument unless e*e = e exactly.
IdempotentReport idempotent_image(const GroupRingMatrix& e, int window, const SamplingPlan& plan);

}  // namespace coarsemod
