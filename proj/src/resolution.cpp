#include "coarsemod/resolution.hpp"

#include <algorithm>
#include <stdexcept>

namespace coarsemod {

namespace {

FreeVec rowVec(const GroupRingMatrix& m, int i) {
    return m.applyToBasis(Coord{m.G->identity(), i});
}

GroupRingMatrix matrixFromRows(const GroupPtr& G, const Ring& R, const std::vector<FreeVec>& rows,
                               int cols) {
    GroupRingMatrix m(G, R, (int)rows.size(), cols);
    for (int i = 0; i < (int)rows.size(); ++i) {
        for (const auto& [c, s] : rows[i]) {
            if (c.slot < 0 || c.slot >= cols)
                throw std::logic_error("matrixFromRows: slot out of range");
            m.at(i, c.slot).terms.emplace_back(c.g, s);
        }
        for (int j = 0; j < cols; ++j) m.at(i, j).normalize();
    }
    return m;
}

int budgetedRadius(const GroupPtr& G, int cap, long long budget) {
    int r = 0;
    while (r < cap && ballSize(G, r + 1) <= budget) ++r;
    return std::max(0, r);
}

/// Effective generating vectors of the filtration, in ambient coordinates.
std::vector<FreeVec> generatingVectors(const FilteredModule& M) {
    std::vector<FreeVec> out;
    switch (M.rule) {
        case FiltrationRule::Image:
            for (int i = 0; i < M.defining->rows; ++i) {
                FreeVec v = rowVec(*M.defining, i);
                if (!v.empty()) out.push_back(std::move(v));
            }
            return out;
        case FiltrationRule::ProductCanonical:
            for (int i = 0; i < M.base.rank; ++i)
                out.push_back(FreeVec{{Coord{M.base.G->identity(), i}, M.base.R.one()}});
            return out;
        case FiltrationRule::Pushforward:
            throw std::invalid_argument("free_cover: pushforward carriers have no ambient basis");
        default:
            for (const auto& [name, v] : M.base.sigma) out.push_back(v);
            return out;
    }
}

int effRadius(const FilteredModule& M) {
    int r = 0;
    for (const auto& v : generatingVectors(M)) r = std::max(r, supportRadius(v));
    return r;
}

SamplingPlan trimmed(const SamplingPlan& plan, int window, int slack) {
    SamplingPlan q = SamplingPlan::forWindow(window, slack, plan.seed);
    q.maxSubsets = plan.maxSubsets;
    q.maxPairs = plan.maxPairs;
    q.randomSubsets = plan.randomSubsets;
    return q;
}

/// First passing insularity constant below the window artifact threshold, or
/// the d = 0 failure when none passes.
ControlCertificate scanInsular(const FilteredModule& M, int window, const SamplingPlan& plan) {
    int slack = effRadius(M);
    ControlCertificate first;
    int cap = std::min(window / 2 - 1, 6);
    for (int d = 0; d <= std::max(0, cap); ++d) {
        auto cert = check_insular(M, d, window, trimmed(plan, window, slack + d));
        if (cert.pass || d == 0) {
            if (d == 0) first = cert;
            if (cert.pass) return cert;
        }
    }
    return first;
}

/// Greedy removal of window-redundant kernel generators: drop v when it lies
/// in the span of the translates of the kept ones.
std::vector<FreeVec> windowPrune(const GroupPtr& G, const Ring& R, std::vector<FreeVec> cands,
                                 int srcRank, int window, int genRadius) {
    std::sort(cands.begin(), cands.end(), [](const FreeVec& a, const FreeVec& b) {
        int ra = supportRadius(a), rb = supportRadius(b);
        if (ra != rb) return ra < rb;
        if (a.size() != b.size()) return a.size() < b.size();
        return freeVecStr(a) < freeVecStr(b);
    });
    auto freeM = FilteredModule::productCanonical(PresentedModule::freeModule(G, R, srcRank));
    auto ctx = freeM->context(window);
    std::vector<FreeVec> kept;
    for (auto& v : cands) {
        if (!kept.empty()) {
            std::vector<FreeVec> span;
            for (const auto& k : kept) {
                int rp = std::min(window - supportRadius(k), genRadius + 2);
                for (const auto& g : ballAtIdentity(G, std::max(0, rp)))
                    span.push_back(translate(g, k));
            }
            if (WindowSubmodule(G, R, window, std::move(span), ctx).member(v)) continue;
        }
        kept.push_back(std::move(v));
    }
    return kept;
}

/// d . prev = 0 exactly: entries vanish over a free target, rows fall in the
/// relation span otherwise (decided exactly on the tier, from the window
/// modulus the kernel was computed against elsewhere).
void checkComposite(const GroupRingMatrix& d, const GroupRingMatrix& prev,
                    const PresentedModule& target, int window) {
    GroupRingMatrix prod = d.mul(prev);
    if (target.relations.rows == 0) {
        for (const auto& e : prod.entries)
            if (!e.isZero()) throw std::logic_error("resolve: nonzero composite differential");
        return;
    }
    auto rels = target.relationRows();
    auto ctx = FilteredModule::productCanonical(target)->context(window);
    WindowSubmodule zero(target.G, target.R, window, {}, ctx);
    for (int i = 0; i < prod.rows; ++i) {
        FreeVec row = rowVec(prod, i);
        if (row.empty()) continue;
        bool ok = groebnerTier(target.G, target.R)
                      ? laurent_member(target.G, target.R, row, rels, target.rank)
                      : zero.member(row);
        if (!ok) throw std::logic_error("resolve: composite differential misses the relations");
    }
}

}  // namespace

nlohmann::json SyzygyResult::toJson() const {
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : generators) gens.push_back(freeVecToJson(g));
    nlohmann::json j{{"generators", std::move(gens)},
                     {"mode", complete ? "groebner-complete" : "window-verified"}};
    if (!complete) j["windowRadius"] = windowRadius;
    return j;
}

SyzygyResult kernel_of(const GroupRingMatrix& phi, const PresentedModule& target, int window,
                       KernelMode mode, uint64_t seed) {
    (void)seed;
    if (phi.cols != target.rank) throw std::invalid_argument("kernel_of: target rank mismatch");
    const auto& G = phi.G;
    const auto& R = phi.R;
    if (mode == KernelMode::GroebnerComplete && !groebnerTier(G, R))
        throw std::invalid_argument("kernel_of: unsupported tier for the requested completeness mode");
    SyzygyResult out;
    if (groebnerTier(G, R) && mode != KernelMode::WindowVerified) {
        std::vector<FreeVec> tracked;
        tracked.reserve(phi.rows);
        for (int i = 0; i < phi.rows; ++i) tracked.push_back(rowVec(phi, i));
        out.generators = laurent_syzygies(G, R, tracked, target.relationRows(), target.rank);
        out.complete = true;
        return out;
    }
    int rowRad = phi.maxSupportRadius();
    if (rowRad > window) throw WindowError("kernel_of: morphism support exceeds the window");
    int r = budgetedRadius(G, window - rowRad, std::max<long long>(1, 1200 / std::max(1, phi.rows)));
    std::vector<FreeVec> stacked;
    std::vector<Coord> keys;
    for (const auto& g : ballAtIdentity(G, r)) {
        for (int i = 0; i < phi.rows; ++i) {
            FreeVec row = translate(g, rowVec(phi, i));
            stacked.push_back(std::move(row));
            keys.push_back(Coord{g, i});
        }
    }
    size_t nPre = stacked.size();
    auto ctx = FilteredModule::productCanonical(target)->context(window);
    for (const auto& mrow : ctx->modulusGens) stacked.push_back(mrow);
    std::vector<FreeVec> cands;
    for (const auto& combo : leftKernel(R, stacked)) {
        FreeVec v;
        for (const auto& [idx, c] : combo)
            if ((size_t)idx < nPre) v.emplace_back(keys[idx], c);
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!v.empty()) cands.push_back(std::move(v));
    }
    out.generators = windowPrune(G, R, std::move(cands), phi.rows, window, r);
    out.windowRadius = r;
    return out;
}

nlohmann::json FreeCover::toJson() const {
    return {{"rank", pi.rows},
            {"pi", pi.toJson()},
            {"bound", bound.toJson()},
            {"bicontrol", bicontrol.toJson()}};
}

FreeCover free_cover(const FilteredModulePtr& M, int window, const SamplingPlan& plan) {
    auto gens = generatingVectors(*M);
    const auto& G = M->base.G;
    const auto& R = M->base.R;
    FreeCover out;
    out.target = M;
    out.cover =
        FilteredModule::productCanonical(PresentedModule::freeModule(G, R, (int)gens.size()));
    out.pi = matrixFromRows(G, R, gens, M->base.rank);
    FilteredMorphism pi(out.cover, M, out.pi);
    out.bound = bound_of(pi, window, plan);
    int b = out.bound.pass ? (int)out.bound.constant : out.pi.maxSupportRadius();
    out.bicontrol = check_bicontrolled(pi, b, window, plan);
    return out;
}

nlohmann::json ResolutionStage::toJson() const {
    nlohmann::json j{{"rank", rank},
                     {"mode", complete ? "groebner-complete" : "window-verified"}};
    if (!complete) j["windowRadius"] = windowRadius;
    j["lean"] = leanConstant ? nlohmann::json(*leanConstant) : nlohmann::json();
    j["insular"] = insularConstant ? nlohmann::json(*insularConstant) : nlohmann::json();
    return j;
}

std::vector<int> ResolutionChain::ranks() const {
    std::vector<int> r{pi.rows};
    for (const auto& d : differentials) r.push_back(d.rows);
    return r;
}

int ResolutionChain::exactnessSlack() const {
    int s = pi.maxSupportRadius();
    for (const auto& d : differentials) s += d.maxSupportRadius();
    return s;
}

nlohmann::json ResolutionChain::toJson() const {
    nlohmann::json diffs = nlohmann::json::array();
    for (const auto& d : differentials) diffs.push_back(d.toJson());
    nlohmann::json sts = nlohmann::json::array();
    for (const auto& s : stages) sts.push_back(s.toJson());
    return {{"module", module.toJson()}, {"pi", pi.toJson()},
            {"ranks", ranks()},          {"differentials", std::move(diffs)},
            {"stages", std::move(sts)},  {"terminated", terminated},
            {"slack", exactnessSlack()}};
}

ResolutionChain resolve(const PresentedModule& m, int maxDepth, int window, uint64_t seed) {
    ResolutionChain chain;
    chain.module = m;
    const auto& G = m.G;
    const auto& R = m.R;
    std::vector<FreeVec> sig;
    sig.reserve(m.sigma.size());
    for (const auto& [name, v] : m.sigma) sig.push_back(v);
    chain.pi = matrixFromRows(G, R, sig, m.rank);
    GroupRingMatrix cur = chain.pi;
    PresentedModule curTarget = m;
    for (int depth = 0; depth < maxDepth; ++depth) {
        SyzygyResult k = kernel_of(cur, curTarget, window, KernelMode::Auto, seed);
        if (k.generators.empty()) {
            chain.terminated = true;
            break;
        }
        GroupRingMatrix d = matrixFromRows(G, R, k.generators, cur.rows);
        checkComposite(d, cur, curTarget, window);
        ResolutionStage st;
        st.rank = d.rows;
        st.complete = k.complete;
        st.windowRadius = k.windowRadius;
        auto im = FilteredModule::image(d, PresentedModule::freeModule(G, R, cur.rows));
        st.leanConstant = minimal_lean_constant(*im, window, seed);
        st.insularConstant = minimal_insular_constant(*im, window, seed);
        chain.stages.push_back(std::move(st));
        chain.differentials.push_back(d);
        curTarget = PresentedModule::freeModule(G, R, cur.rows);
        cur = std::move(d);
    }
    return chain;
}

ControlCertificate check_window_exactness(const ResolutionChain& chain, int stage, int radius,
                                          int window) {
    if (stage < 0 || stage > chain.length())
        throw std::invalid_argument("check_window_exactness: stage out of range");
    const GroupRingMatrix& dS = stage == 0 ? chain.pi : chain.differentials[stage - 1];
    const auto& G = dS.G;
    const auto& R = dS.R;
    if (radius + dS.maxSupportRadius() > window)
        throw WindowError("check_window_exactness: radius exceeds the window");
    std::vector<FreeVec> stacked;
    std::vector<Coord> keys;
    for (const auto& g : ballAtIdentity(G, radius)) {
        for (int i = 0; i < dS.rows; ++i) {
            stacked.push_back(translate(g, rowVec(dS, i)));
            keys.push_back(Coord{g, i});
        }
    }
    size_t nPre = stacked.size();
    if (stage == 0) {
        auto ctx = FilteredModule::productCanonical(chain.module)->context(window);
        for (const auto& mrow : ctx->modulusGens) stacked.push_back(mrow);
    }
    std::vector<FreeVec> found;
    for (const auto& combo : leftKernel(R, stacked)) {
        FreeVec v;
        for (const auto& [idx, c] : combo)
            if ((size_t)idx < nPre) v.emplace_back(keys[idx], c);
        std::sort(v.begin(), v.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        if (!v.empty()) found.push_back(std::move(v));
    }
    int slack = chain.exactnessSlack();
    nlohmann::json details{{"radius", radius}, {"kernelElements", (int)found.size()}};
    if (stage == chain.length()) {
        if (found.empty()) return ControlCertificate::passed("window-exact", slack, window, details);
        return ControlCertificate::failed("window-exact", slack, window,
                                          {{"stage", stage}, {"element", freeVecToJson(found[0])}},
                                          details);
    }
    const GroupRingMatrix& dN = chain.differentials[stage];
    int rp = std::min(radius + slack, window - dN.maxSupportRadius());
    std::vector<FreeVec> span;
    for (const auto& g : ballAtIdentity(G, std::max(0, rp)))
        for (int i = 0; i < dN.rows; ++i) span.push_back(translate(g, rowVec(dN, i)));
    auto ctx = FilteredModule::productCanonical(PresentedModule::freeModule(G, R, dS.rows))
                   ->context(window);
    WindowSubmodule img(G, R, window, std::move(span), ctx);
    for (const auto& v : found) {
        if (!img.member(v))
            return ControlCertificate::failed("window-exact", slack, window,
                                              {{"stage", stage}, {"element", freeVecToJson(v)}},
                                              details);
    }
    return ControlCertificate::passed("window-exact", slack, window, details);
}

nlohmann::json ImageCokernelReport::toJson() const {
    return {{"hypothesis", hypothesisMet ? "met" : "unmet"},
            {"bound", bound.toJson()},
            {"bicontrol", bicontrol.toJson()},
            {"image", {{"lean", imageLean.toJson()}, {"insular", imageInsular.toJson()}}},
            {"cokernel", {{"lean", cokernelLean.toJson()}, {"insular", cokernelInsular.toJson()}}}};
}

ImageCokernelReport image_cokernel(const FilteredMorphism& phi, int window,
                                   const SamplingPlan& plan) {
    ImageCokernelReport out;
    const PresentedModule& target = phi.target->base;
    out.image = FilteredModule::image(phi.action, target);
    out.cokernel = FilteredModule::cokernel(phi.action, target);
    out.bound = bound_of(phi, window, plan);
    int b = out.bound.pass ? (int)out.bound.constant : std::min(window, phi.shift());
    out.bicontrol = check_bicontrolled(phi, b, window, plan);
    out.hypothesisMet = out.bound.pass && out.bicontrol.pass;
    out.imageLean = check_lean(*out.image, 0, window, trimmed(plan, window, effRadius(*out.image)));
    out.imageInsular = scanInsular(*out.image, window, plan);
    out.cokernelLean =
        check_lean(*out.cokernel, 0, window, trimmed(plan, window, effRadius(*out.cokernel)));
    out.cokernelInsular = scanInsular(*out.cokernel, window, plan);
    return out;
}

nlohmann::json IdempotentReport::toJson() const {
    return {{"bound", bound.toJson()},
            {"bicontrol", bicontrol.toJson()},
            {"lean", lean.toJson()},
            {"insular", insular.toJson()},
            {"complement", {{"sumFull", sumFull}, {"intersectionZero", intersectionZero}}}};
}

IdempotentReport idempotent_image(const GroupRingMatrix& e, int window, const SamplingPlan& plan) {
    if (e.rows != e.cols || !e.isIdempotent())
        throw std::invalid_argument("idempotent_image: matrix is not idempotent");
    const auto& G = e.G;
    const auto& R = e.R;
    PresentedModule freeP = PresentedModule::freeModule(G, R, e.rows);
    auto freeM = FilteredModule::standard(freeP);
    FilteredMorphism phi(freeM, freeM, e);
    IdempotentReport out;
    out.bound = bound_of(phi, window, plan);
    int b = out.bound.pass ? (int)out.bound.constant : e.maxSupportRadius();
    out.bicontrol = check_bicontrolled(phi, b, window, plan);
    out.image = FilteredModule::image(e, freeP);
    out.lean = check_lean(*out.image, 0, window, trimmed(plan, window, effRadius(*out.image)));
    out.insular = scanInsular(*out.image, window, plan);

    GroupRingMatrix comp = GroupRingMatrix::identity(G, R, e.rows).sub(e);
    auto coim = FilteredModule::image(comp, freeP);
    int rad = std::max(e.maxSupportRadius(), comp.maxSupportRadius());
    int rc = budgetedRadius(G, std::max(0, window - rad),
                            std::max<long long>(1, 400 / std::max(1, e.rows)));
    MetricSubset B = MetricSubset::ofBall(G->identity(), rc);
    WindowSubmodule I1 = out.image->evaluate(B, window);
    WindowSubmodule I2 = coim->evaluate(B, window);
    out.intersectionZero = I1.intersectWith(I2).isZero();
    std::vector<FreeVec> both = I1.gens;
    both.insert(both.end(), I2.gens.begin(), I2.gens.end());
    WindowSubmodule sum(G, R, window, std::move(both), freeM->context(window));
    out.sumFull = true;
    int probe = budgetedRadius(G, rc, 200);
    for (const auto& g : ballAtIdentity(G, probe)) {
        for (int i = 0; i < e.rows && out.sumFull; ++i)
            if (!sum.member(FreeVec{{Coord{g, i}, R.one()}})) out.sumFull = false;
        if (!out.sumFull) break;
    }
    return out;
}

}  // namespace coarsemod
