#include "coarsemod/morphism.hpp"

#include <random>

namespace coarsemod {

namespace {

int radiusOf(const MetricSubset& S) {
    int r = 0;
    for (const auto& x : S.elems) r = std::max(r, x.wordLength());
    return r;
}

/// Largest r <= cap whose identity ball stays within the element budget.
int budgetedRadius(const GroupPtr& G, int cap, size_t budget) {
    int r = 0;
    for (int t = 1; t <= cap; ++t) {
        if (ballAtIdentity(G, t).size() > budget) break;
        r = t;
    }
    return r;
}

WindowSubmodule imageSubmodule(const FilteredMorphism& phi, const WindowSubmodule& src,
                               int window) {
    std::vector<FreeVec> imgs;
    imgs.reserve(src.gens.size());
    for (const auto& g : src.gens) {
        auto im = phi.apply(g);
        if (!im.empty()) imgs.push_back(std::move(im));
    }
    return WindowSubmodule(phi.target->base.G, phi.target->base.R, window, std::move(imgs),
                           phi.target->context(window));
}

}  // namespace

FilteredMorphism::FilteredMorphism(FilteredModulePtr src, FilteredModulePtr dst,
                                   GroupRingMatrix a)
    : source(std::move(src)), target(std::move(dst)), action(std::move(a)) {
    if (!sameGroup(source->base.G, target->base.G) || source->base.R != target->base.R)
        throw std::invalid_argument("morphism: source and target live over different group rings");
    if (!sameGroup(source->space(), target->space()))
        throw std::invalid_argument("morphism: filtration index spaces differ");
    if (action.rows != source->base.rank || action.cols != target->base.rank)
        throw std::invalid_argument("morphism: action shape does not match the presentations");
    if (!sameGroup(action.G, source->base.G) || action.R != source->base.R)
        throw std::invalid_argument("morphism: action is over the wrong group ring");
}

FilteredMorphism FilteredMorphism::identityOn(const FilteredModulePtr& M) {
    return FilteredMorphism(M, M, GroupRingMatrix::identity(M->base.G, M->base.R, M->base.rank));
}

FreeVec FilteredMorphism::applyCoord(const Coord& c) const {
    if (!overrides.empty()) {
        auto it = overrides.find(c);
        if (it != overrides.end()) return it->second;
    }
    return action.applyToBasis(c);
}

FreeVec FilteredMorphism::apply(const FreeVec& v) const {
    if (overrides.empty()) return action.apply(v);
    const Ring& R = source->base.R;
    FreeVec out;
    for (const auto& [c, s] : v) out = svAxpy(R, out, s, applyCoord(c));
    return out;
}

void FilteredMorphism::overrideCoord(const Coord& c, FreeVec image) {
    overrides[c] = std::move(image);
    equivariant = false;
}

int FilteredMorphism::shift() const {
    int s = action.maxSupportRadius();
    for (const auto& [c, img] : overrides)
        for (const auto& [d, coeff] : img) s = std::max(s, distance(c.g, d.g));
    return s;
}

nlohmann::json FilteredMorphism::toJson() const {
    return {{"matrix", action.toJson()}, {"equivariant", equivariant}};
}

FilteredMorphism FilteredMorphism::fromJson(FilteredModulePtr src, FilteredModulePtr dst,
                                            const nlohmann::json& j) {
    auto a = GroupRingMatrix::fromJson(src->base.G, src->base.R, j.at("matrix"));
    FilteredMorphism phi(std::move(src), std::move(dst), std::move(a));
    phi.equivariant = j.value("equivariant", true);
    return phi;
}

ControlCertificate bound_of(const FilteredMorphism& phi, int window, const SamplingPlan& plan) {
    auto space = phi.source->space();
    SamplingPlan p = plan;
    p.radius = std::max(0, std::min(p.radius, window - phi.source->sigmaRadius() - phi.shift()));

    int needed = 0, checked = 0;
    for (const auto& S : p.subsets(space)) {
        auto FS = phi.source->evaluate(S, window);
        std::vector<FreeVec> imgs;
        for (const auto& g : FS.gens) {
            auto im = phi.apply(g);
            if (!im.empty()) imgs.push_back(std::move(im));
        }
        for (;;) {
            if (radiusOf(S) + needed > window) {
                auto T = phi.target->evaluate(S.enlarged(needed - 1), window);
                for (const auto& im : imgs)
                    if (!T.member(im))
                        return ControlCertificate::failed(
                            "bounded", window, window,
                            {{"S", S.toJson()}, {"witness", freeVecStr(im)}},
                            {{"subsets", checked}, {"radius", p.radius}});
                break;  // S passed at needed-1, so monotonicity covers needed
            }
            auto T = phi.target->evaluate(S.enlarged(needed), window);
            bool ok = true;
            for (const auto& im : imgs)
                if (!T.member(im)) {
                    ok = false;
                    break;
                }
            if (ok) break;
            ++needed;
        }
        ++checked;
    }
    return ControlCertificate::passed("bounded", needed, window,
                                      {{"subsets", checked}, {"radius", p.radius}});
}

ControlCertificate check_bicontrolled(const FilteredMorphism& phi, int b, int window,
                                      const SamplingPlan& plan) {
    auto space = phi.source->space();
    int srcSigma = phi.source->sigmaRadius();
    int shift = phi.shift();

    SamplingPlan p = plan;
    p.radius = std::max(0, std::min(p.radius, std::min(window - b, window - srcSigma - shift)));

    int rimg = budgetedRadius(space, std::max(0, window - srcSigma - shift), 2048);
    p.radius = std::min(p.radius, rimg);  // keep samples inside the image fragment's reach
    auto ball = MetricSubset::ofBall(space->identity(), rimg);
    auto imageWin = imageSubmodule(phi, phi.source->evaluate(ball, window), window);

    int checked = 0;
    for (const auto& S : p.subsets(space)) {
        auto I = imageWin.intersectWith(phi.target->evaluate(S, window));
        if (I.gens.empty()) {
            ++checked;
            continue;
        }
        auto rhs = imageSubmodule(phi, phi.source->evaluate(S.enlarged(b), window), window);
        for (const auto& g : I.gens)
            if (!rhs.member(g))
                return ControlCertificate::failed(
                    "bicontrolled", b, window,
                    {{"S", S.toJson()}, {"witness", freeVecStr(g)}},
                    {{"subsets", checked}, {"imageRadius", rimg}});
        ++checked;
    }
    return ControlCertificate::passed("bicontrolled", b, window,
                                      {{"subsets", checked}, {"imageRadius", rimg}});
}

const char* morphismClassName(MorphismClass c) {
    switch (c) {
        case MorphismClass::AdmissibleMono: return "admissible-mono";
        case MorphismClass::AdmissibleEpi: return "admissible-epi";
        case MorphismClass::Both: return "both";
        case MorphismClass::Neither: return "neither";
    }
    return "neither";
}

nlohmann::json ClassifyResult::toJson() const {
    return {{"verdict", morphismClassName(verdict)}, {"injective", injective},
            {"surjective", surjective},              {"bound", bound.toJson()},
            {"bicontrol", bicontrol.toJson()},       {"details", details}};
}

ClassifyResult classify_morphism(const FilteredMorphism& phi, int window,
                                 const SamplingPlan& plan) {
    ClassifyResult res;
    res.bound = bound_of(phi, window, plan);
    int b = res.bound.pass ? (int)res.bound.constant : std::min(window, phi.shift());
    res.bicontrol = check_bicontrolled(phi, b, window, plan);

    const Ring& R = phi.source->base.R;
    auto carrier = phi.source->base.G;
    auto space = phi.source->space();

    // kernel of the stacked coordinate images over the target relation
    // modulus; a nonzero source class in it refutes window injectivity
    int rinj = budgetedRadius(carrier, std::max(0, window - phi.shift()), 512);
    auto tctx = phi.target->context(window);
    std::vector<FreeVec> rows;
    std::vector<Coord> rowCoord;
    for (const auto& gamma : ballAtIdentity(carrier, rinj))
        for (int i = 0; i < phi.source->base.rank; ++i) {
            Coord c{gamma, i};
            rows.push_back(phi.applyCoord(c));
            rowCoord.push_back(c);
        }
    size_t nPre = rows.size();
    for (const auto& m : tctx->modulusGens) rows.push_back(m);

    auto srcZero = phi.source->evaluate(MetricSubset(space), window);
    res.injective = true;
    nlohmann::json kernelWitness;
    for (const auto& combo : leftKernel(R, rows)) {
        FreeVec v;
        for (const auto& [idx, coeff] : combo)
            if ((size_t)idx < nPre) v = svAxpy(R, v, coeff, FreeVec{{rowCoord[idx], R.one()}});
        if (!v.empty() && !srcZero.member(v)) {
            res.injective = false;
            kernelWitness = freeVecStr(v);
            break;
        }
    }

    // every target window generator needs a preimage within the enlargement b
    int rsurj = budgetedRadius(space, std::max(0, window - b), 512);
    auto T = phi.target->evaluate(MetricSubset::ofBall(space->identity(), rsurj), window);
    auto pre = phi.source->evaluate(MetricSubset::ofBall(space->identity(),
                                                         std::min(window, rsurj + b)),
                                    window);
    auto img = imageSubmodule(phi, pre, window);
    res.surjective = true;
    nlohmann::json surjWitness;
    for (const auto& g : T.gens)
        if (!img.member(g)) {
            res.surjective = false;
            surjWitness = freeVecStr(g);
            break;
        }

    if (!res.bicontrol.pass)
        res.verdict = MorphismClass::Neither;
    else if (res.injective && res.surjective)
        res.verdict = MorphismClass::Both;
    else if (res.injective)
        res.verdict = MorphismClass::AdmissibleMono;
    else if (res.surjective)
        res.verdict = MorphismClass::AdmissibleEpi;
    else
        res.verdict = MorphismClass::Neither;

    res.details = {{"injectivityRadius", rinj},
                   {"surjectivityRadius", rsurj},
                   {"enlargement", b}};
    if (!kernelWitness.is_null()) res.details["kernelWitness"] = kernelWitness;
    if (!surjWitness.is_null()) res.details["unreached"] = surjWitness;
    return res;
}

int generator_bound(const FilteredMorphism& phi) {
    if (!phi.overrides.empty())
        throw std::invalid_argument("generator_bound: morphism is not group-ring-linear");
    if (phi.source->rule == FiltrationRule::Pushforward ||
        phi.target->rule == FiltrationRule::Pushforward)
        throw std::invalid_argument("generator_bound: needs standard-type filtrations");

    auto space = phi.source->space();
    int w = phi.source->sigmaRadius() + phi.action.maxSupportRadius() + phi.target->sigmaRadius() + 2;
    auto Fe = phi.source->evaluate(MetricSubset::singleton(space->identity()), w);
    std::vector<FreeVec> imgs;
    for (const auto& g : Fe.gens) {
        auto im = phi.apply(g);
        if (!im.empty()) imgs.push_back(std::move(im));
    }
    for (int d = 0; d <= w; ++d) {
        auto T = phi.target->evaluate(MetricSubset::ofBall(space->identity(), d), w);
        bool ok = true;
        for (const auto& im : imgs)
            if (!T.member(im)) {
                ok = false;
                break;
            }
        if (ok) return d;
    }
    throw WindowError("generator_bound: image of the generators escapes every ball");
}

ControlCertificate check_equivariance(const FilteredMorphism& phi, int window,
                                      const SamplingPlan& plan) {
    const Ring& R = phi.source->base.R;
    auto carrier = phi.source->base.G;
    int shift = phi.shift();
    int grad = std::min(plan.radius, std::max(0, (window - shift) / 2));
    int crad = std::max(0, window - grad - shift);

    auto zero = phi.target->evaluate(MetricSubset(phi.source->space()), window);
    auto gammas = ballAtIdentity(carrier, grad);
    auto coords = ballAtIdentity(carrier, crad);

    int checked = 0;
    auto probe = [&](const GroupElement& gamma, const Coord& c,
                     ControlCertificate& out) -> bool {
        auto lhs = phi.applyCoord(Coord{gamma.mul(c.g), c.slot});
        auto rhs = translate(gamma, phi.applyCoord(c));
        auto diff = svCombine(R, R.one(), lhs, R.neg(R.one()), rhs);
        ++checked;
        if (zero.member(diff)) return true;
        out = ControlCertificate::failed(
            "equivariant", 0, window,
            {{"gamma", gamma.str()},
             {"coordinate", {{"word", c.g.str()}, {"slot", c.slot}}},
             {"difference", freeVecStr(diff)}},
            {{"samples", checked}});
        return false;
    };

    ControlCertificate fail;
    // deterministic sweep at the identity coordinate, then random probes
    for (const auto& gamma : gammas)
        for (int i = 0; i < phi.source->base.rank; ++i)
            if (!probe(gamma, Coord{carrier->identity(), i}, fail)) return fail;
    std::mt19937_64 rng(plan.seed ^ 0x5bd1e995u);
    for (int t = 0; t < plan.maxSubsets && !gammas.empty() && !coords.empty(); ++t) {
        const auto& gamma = gammas[rng() % gammas.size()];
        Coord c{coords[rng() % coords.size()],
                (int)(rng() % (uint64_t)std::max(1, phi.source->base.rank))};
        if (gamma.wordLength() + c.g.wordLength() + shift > window) continue;
        if (!probe(gamma, c, fail)) return fail;
    }
    return ControlCertificate::passed("equivariant", 0, window, {{"samples", checked}});
}

GeometricModule GeometricModule::of(GroupPtr G, Ring R,
                                    std::vector<std::pair<GroupElement, int>> ranks) {
    GeometricModule M{std::move(G), std::move(R), std::move(ranks)};
    std::sort(M.ranks.begin(), M.ranks.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 0; i < M.ranks.size(); ++i) {
        if (M.ranks[i].second <= 0)
            throw std::invalid_argument("geometric module: ranks must be positive");
        if (i && M.ranks[i].first == M.ranks[i - 1].first)
            throw std::invalid_argument("geometric module: duplicate point");
    }
    return M;
}

int GeometricModule::rankAt(const GroupElement& x) const {
    for (const auto& [p, r] : ranks)
        if (p == x) return r;
    return 0;
}

bool GeometricModule::samePoints(const GeometricModule& o) const {
    return sameGroup(G, o.G) && R == o.R && ranks == o.ranks;
}

namespace {

bool blockIsZero(const Ring& R, const ScalarBlock& b) {
    for (const auto& row : b)
        for (const auto& s : row)
            if (!R.isZero(s)) return false;
    return true;
}

}  // namespace

GeometricMorphism GeometricMorphism::identityOn(const GeometricModule& M) {
    GeometricMorphism id{M, M, 0, {}};
    for (const auto& [p, r] : M.ranks) {
        ScalarBlock b(r, std::vector<Scalar>(r, M.R.zero()));
        for (int i = 0; i < r; ++i) b[i][i] = M.R.one();
        id.blocks[{p, p}] = std::move(b);
    }
    return id;
}

void GeometricMorphism::setBlock(const GroupElement& x, const GroupElement& xp, ScalarBlock b) {
    if ((int)b.size() != source.rankAt(x))
        throw std::invalid_argument("geometric block: row count is not the source rank");
    for (const auto& row : b)
        if ((int)row.size() != target.rankAt(xp))
            throw std::invalid_argument("geometric block: column count is not the target rank");
    if (blockIsZero(source.R, b))
        blocks.erase({x, xp});
    else
        blocks[{x, xp}] = std::move(b);
}

ScalarBlock GeometricMorphism::blockAt(const GroupElement& x, const GroupElement& xp) const {
    auto it = blocks.find({x, xp});
    if (it != blocks.end()) return it->second;
    return ScalarBlock((size_t)source.rankAt(x),
                       std::vector<Scalar>((size_t)target.rankAt(xp), source.R.zero()));
}

int GeometricMorphism::measuredBound() const {
    int d = 0;
    for (const auto& [key, b] : blocks)
        if (!blockIsZero(source.R, b)) d = std::max(d, distance(key.first, key.second));
    return d;
}

bool GeometricMorphism::validate() const {
    for (const auto& [key, b] : blocks) {
        if ((int)b.size() != source.rankAt(key.first)) return false;
        for (const auto& row : b)
            if ((int)row.size() != target.rankAt(key.second)) return false;
        if (!blockIsZero(source.R, b) && distance(key.first, key.second) > declaredBound)
            return false;
    }
    return true;
}

bool GeometricMorphism::sameBlocks(const GeometricMorphism& o) const {
    auto norm = [](const GeometricMorphism& m) {
        std::map<std::pair<GroupElement, GroupElement>, ScalarBlock> out;
        for (const auto& [k, b] : m.blocks)
            if (!blockIsZero(m.source.R, b)) out[k] = b;
        return out;
    };
    return norm(*this) == norm(o);
}

GeometricMorphism compose_geometric(const GeometricMorphism& psi, const GeometricMorphism& phi) {
    if (!phi.target.samePoints(psi.source))
        throw std::invalid_argument("compose: middle geometric modules differ");
    const Ring& R = phi.source.R;

    std::map<GroupElement, std::vector<std::pair<GroupElement, const ScalarBlock*>>> byMid;
    for (const auto& [key, b] : psi.blocks) byMid[key.first].emplace_back(key.second, &b);

    GeometricMorphism out{phi.source, psi.target, phi.declaredBound + psi.declaredBound, {}};
    for (const auto& [key, bp] : phi.blocks) {
        auto it = byMid.find(key.second);
        if (it == byMid.end()) continue;
        for (const auto& [xp, bq] : it->second) {
            auto acc = out.blockAt(key.first, xp);
            for (size_t i = 0; i < bp.size(); ++i)
                for (size_t k = 0; k < bq->size(); ++k) {
                    if (R.isZero(bp[i][k])) continue;
                    for (size_t j = 0; j < (*bq)[k].size(); ++j)
                        acc[i][j] = R.add(acc[i][j], R.mul(bp[i][k], (*bq)[k][j]));
                }
            out.setBlock(key.first, xp, std::move(acc));
        }
    }
    return out;
}

}  // namespace coarsemod
