#include "coarsemod/filtration.hpp"

#include <algorithm>

namespace coarsemod {

PresentedModule PresentedModule::freeModule(const GroupPtr& G, const Ring& R, int rank) {
    if (rank <= 0) throw std::invalid_argument("module rank must be positive");
    PresentedModule m;
    m.G = G;
    m.R = R;
    m.rank = rank;
    m.relations = GroupRingMatrix(G, R, 0, rank);
    for (int i = 0; i < rank; ++i)
        m.sigma.emplace_back("g" + std::to_string(i),
                             FreeVec{{Coord{G->identity(), i}, R.one()}});
    return m;
}

PresentedModule PresentedModule::quotient(const GroupRingMatrix& rel) {
    PresentedModule m = freeModule(rel.G, rel.R, rel.cols);
    m.relations = rel;
    return m;
}

std::vector<FreeVec> PresentedModule::relationRows() const {
    std::vector<FreeVec> rows;
    rows.reserve(relations.rows);
    for (int i = 0; i < relations.rows; ++i)
        rows.push_back(relations.applyToBasis(Coord{G->identity(), i}));
    return rows;
}

int PresentedModule::sigmaRadius() const {
    int r = 0;
    for (auto& [label, expr] : sigma) r = std::max(r, supportRadius(expr));
    return r;
}

nlohmann::json PresentedModule::toJson() const {
    nlohmann::json sig = nlohmann::json::array();
    for (auto& [label, expr] : sigma)
        sig.push_back({{"label", label}, {"expr", freeVecToJson(expr)}});
    return {{"ring", R.name()},
            {"group", G->name()},
            {"rank", rank},
            {"relations", relations.toJson()},
            {"sigma", std::move(sig)}};
}

PresentedModule PresentedModule::fromJson(const nlohmann::json& j) {
    PresentedModule m;
    m.G = GroupSpec::parse(j.at("group").get<std::string>());
    m.R = Ring::parse(j.at("ring").get<std::string>());
    m.rank = j.at("rank").get<int>();
    if (m.rank <= 0) throw std::invalid_argument("module rank must be positive");
    if (j.contains("relations") && !j.at("relations").is_null()) {
        m.relations = GroupRingMatrix::fromJson(m.G, m.R, j.at("relations"));
        if (m.relations.rows && m.relations.cols != m.rank)
            throw std::invalid_argument("relations must have `rank` columns");
        if (!m.relations.rows) m.relations = GroupRingMatrix(m.G, m.R, 0, m.rank);
    } else {
        m.relations = GroupRingMatrix(m.G, m.R, 0, m.rank);
    }
    if (j.contains("sigma") && !j.at("sigma").is_null()) {
        int idx = 0;
        for (const auto& s : j.at("sigma")) {
            if (s.is_string()) {
                if (idx >= m.rank)
                    throw std::invalid_argument("bare sigma labels need index < rank");
                m.sigma.emplace_back(s.get<std::string>(),
                                     FreeVec{{Coord{m.G->identity(), idx}, m.R.one()}});
            } else {
                FreeVec expr = freeVecFromJson(m.G, m.R, s.at("expr"));
                std::string label = s.value("label", "g" + std::to_string(idx));
                m.sigma.emplace_back(std::move(label), std::move(expr));
            }
            ++idx;
        }
    } else {
        for (int i = 0; i < m.rank; ++i)
            m.sigma.emplace_back("g" + std::to_string(i),
                                 FreeVec{{Coord{m.G->identity(), i}, m.R.one()}});
    }
    if (m.sigma.empty()) throw std::invalid_argument("sigma must be nonempty");
    return m;
}

WindowSubmodule::WindowSubmodule(GroupPtr g, Ring r, int w, std::vector<FreeVec> gs,
                                 std::shared_ptr<const WindowContext> c)
    : G(std::move(g)), R(std::move(r)), window(w), gens(std::move(gs)), ctx(std::move(c)),
      red_(ctx->modulus) {
    for (const auto& v : gens) red_.addGenerator(v);
}

bool WindowSubmodule::member(const FreeVec& v, SparseVec<int>* witness) const {
    SparseVec<int> full;
    if (!red_.contains(v, witness ? &full : nullptr)) return false;
    if (witness) {
        witness->clear();
        int offset = (int)ctx->modulusGens.size();
        for (auto& [idx, c] : full)
            if (idx >= offset) witness->emplace_back(idx - offset, c);
    }
    return true;
}

bool WindowSubmodule::subsetOf(const WindowSubmodule& o) const {
    for (const auto& v : gens)
        if (!o.member(v)) return false;
    return true;
}

bool WindowSubmodule::sameSpan(const WindowSubmodule& o) const {
    return subsetOf(o) && o.subsetOf(*this);
}

WindowSubmodule WindowSubmodule::intersectWith(const WindowSubmodule& o) const {
    std::vector<FreeVec> A = gens, B = o.gens;
    A.insert(A.end(), ctx->modulusGens.begin(), ctx->modulusGens.end());
    B.insert(B.end(), o.ctx->modulusGens.begin(), o.ctx->modulusGens.end());
    auto raw = intersectSpans(R, A, B);
    return WindowSubmodule(G, R, window, std::move(raw), ctx);
}

bool WindowSubmodule::isZero() const {
    for (const auto& v : gens)
        if (!ctx->modulus.contains(v)) return false;
    return true;
}

int WindowSubmodule::generatorRank() const {
    RowReducer<Coord> r = ctx->modulus;
    int rank = 0;
    for (const auto& v : gens)
        if (!r.contains(v)) {
            r.addGenerator(v);
            ++rank;
        }
    return rank;
}

std::string ruleName(FiltrationRule r) {
    switch (r) {
        case FiltrationRule::Standard: return "standard";
        case FiltrationRule::ProductCanonical: return "product-canonical";
        case FiltrationRule::Image: return "image";
        case FiltrationRule::Cokernel: return "cokernel";
        case FiltrationRule::Pushforward: return "pushforward";
    }
    return "?";
}

std::shared_ptr<const FilteredModule> FilteredModule::standard(PresentedModule m) {
    if (m.sigma.empty()) throw std::invalid_argument("standard filtration needs sigma");
    auto f = std::make_shared<FilteredModule>();
    f->rule = FiltrationRule::Standard;
    f->base = std::move(m);
    return f;
}

std::shared_ptr<const FilteredModule> FilteredModule::productCanonical(PresentedModule m) {
    auto f = std::make_shared<FilteredModule>();
    f->rule = FiltrationRule::ProductCanonical;
    f->base = std::move(m);
    return f;
}

std::shared_ptr<const FilteredModule> FilteredModule::image(const GroupRingMatrix& phi,
                                                            const PresentedModule& target) {
    if (phi.cols != target.rank)
        throw std::invalid_argument("image: morphism target rank mismatch");
    auto f = std::make_shared<FilteredModule>();
    f->rule = FiltrationRule::Image;
    f->defining = std::make_shared<GroupRingMatrix>(phi);
    f->target = std::make_shared<PresentedModule>(target);
    f->base = target;
    f->base.sigma.clear();
    for (int i = 0; i < phi.rows; ++i) {
        FreeVec row = phi.applyToBasis(Coord{phi.G->identity(), i});
        if (row.empty()) continue;
        f->base.sigma.emplace_back("phi" + std::to_string(i), std::move(row));
    }
    if (f->base.sigma.empty())  // zero morphism: image generated by 0
        f->base.sigma.emplace_back("zero", FreeVec{});
    return f;
}

std::shared_ptr<const FilteredModule> FilteredModule::cokernel(const GroupRingMatrix& phi,
                                                               const PresentedModule& target) {
    if (phi.cols != target.rank)
        throw std::invalid_argument("cokernel: morphism target rank mismatch");
    auto f = std::make_shared<FilteredModule>();
    f->rule = FiltrationRule::Cokernel;
    f->defining = std::make_shared<GroupRingMatrix>(phi);
    f->target = std::make_shared<PresentedModule>(target);
    f->base = target;
    GroupRingMatrix rel(target.G, target.R, target.relations.rows + phi.rows, target.rank);
    for (int i = 0; i < target.relations.rows; ++i)
        for (int j = 0; j < target.rank; ++j) rel.at(i, j) = target.relations.at(i, j);
    for (int i = 0; i < phi.rows; ++i)
        for (int j = 0; j < target.rank; ++j)
            rel.at(target.relations.rows + i, j) = phi.at(i, j);
    f->base.relations = std::move(rel);
    return f;
}

std::shared_ptr<const FilteredModule> FilteredModule::pushforward(
    std::shared_ptr<const FilteredModule> inner, const UniformEmbedding& j) {
    if (!sameGroup(inner->space(), j.src))
        throw std::invalid_argument("pushforward: embedding source mismatch");
    auto f = std::make_shared<FilteredModule>();
    f->rule = FiltrationRule::Pushforward;
    f->base = inner->base;
    f->inner = std::move(inner);
    f->emb = std::make_shared<UniformEmbedding>(j);
    return f;
}

GroupPtr FilteredModule::space() const {
    return rule == FiltrationRule::Pushforward ? emb->dst : base.G;
}

int FilteredModule::sigmaRadius() const {
    return rule == FiltrationRule::Pushforward ? inner->sigmaRadius() : base.sigmaRadius();
}

int preimageRadius(const UniformEmbedding& j, int r) {
    constexpr int kCap = 1 << 14;
    for (int t = 0; t <= kCap; ++t)
        if (j.f(t + 1) > r) return t;
    throw WindowError("pushforward: lower witness too flat, preimage exceeds any window");
}

std::shared_ptr<const WindowContext> FilteredModule::context(int window) const {
    if (rule == FiltrationRule::Pushforward)
        return inner->context(window);
    {
        std::lock_guard<std::mutex> lock(cacheMutex_);
        auto it = ctxCache_.find(window);
        if (it != ctxCache_.end()) return it->second;
    }
    auto ctx = std::make_shared<WindowContext>(base.R);
    ctx->window = window;
    auto rows = base.relationRows();
    int maxRad = 0;
    for (const auto& r : rows) maxRad = std::max(maxRad, supportRadius(r));
    if (!rows.empty()) {
        for (const auto& gamma : ballAtIdentity(base.G, window + maxRad)) {
            for (const auto& r : rows) {
                if (r.empty()) continue;
                FreeVec v = translate(gamma, r);
                if (supportRadius(v) <= window) {
                    ctx->modulus.addGenerator(v);
                    ctx->modulusGens.push_back(std::move(v));
                }
            }
        }
    }
    std::lock_guard<std::mutex> lock(cacheMutex_);
    auto [it, fresh] = ctxCache_.emplace(window, std::move(ctx));
    return it->second;
}

WindowSubmodule FilteredModule::evaluate(const MetricSubset& S, int window) const {
    if (rule == FiltrationRule::Pushforward) {
        if (!sameGroup(S.G, emb->dst)) throw std::invalid_argument("evaluate: subset group mismatch");
        for (const auto& x : S.elems)
            if (x.wordLength() > window)
                throw WindowError("evaluate: subset escapes the window");
        int srcRad = preimageRadius(*emb, window);
        auto pre = emb->preimage(S, srcRad);
        return inner->evaluate(MetricSubset::of(emb->src, std::move(pre)),
                               srcRad + inner->sigmaRadius());
    }
    if (!sameGroup(S.G, base.G)) throw std::invalid_argument("evaluate: subset group mismatch");
    for (const auto& x : S.elems)
        if (x.wordLength() > window)
            throw WindowError("evaluate: subset escapes the window");
    std::vector<FreeVec> gens;
    for (const auto& x : S.elems) {
        for (const auto& [label, expr] : base.sigma) {
            if (expr.empty()) continue;
            FreeVec v = translate(x, expr);
            if (supportRadius(v) > window)
                throw WindowError("evaluate: generator support escapes the window");
            gens.push_back(std::move(v));
        }
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return WindowSubmodule(base.G, base.R, window, std::move(gens), context(window));
}

nlohmann::json FilteredModule::toJson() const {
    if (rule == FiltrationRule::Pushforward) {
        nlohmann::json j = inner->toJson();
        j["inner"] = j["filtration"];
        j["filtration"] = "pushforward";
        j["embedding"] = emb->toJson();
        return j;
    }
    if (rule == FiltrationRule::Image || rule == FiltrationRule::Cokernel) {
        nlohmann::json j = target->toJson();
        j["filtration"] = ruleName(rule);
        j["morphism"] = defining->toJson();
        return j;
    }
    nlohmann::json j = base.toJson();
    j["filtration"] = ruleName(rule);
    return j;
}

std::shared_ptr<const FilteredModule> FilteredModule::fromJson(const nlohmann::json& j) {
    std::string rule = j.value("filtration", "standard");
    if (rule == "pushforward") {
        nlohmann::json innerSpec = j;
        innerSpec.erase("embedding");
        innerSpec["filtration"] = j.value("inner", std::string("standard"));
        auto inner = fromJson(innerSpec);
        return pushforward(inner, UniformEmbedding::fromJson(j.at("embedding")));
    }
    PresentedModule m = PresentedModule::fromJson(j);
    if (rule == "standard") return standard(std::move(m));
    if (rule == "product-canonical") return productCanonical(std::move(m));
    if (rule == "image") {
        GroupRingMatrix phi = GroupRingMatrix::fromJson(m.G, m.R, j.at("morphism"));
        return image(phi, m);
    }
    if (rule == "cokernel") {
        GroupRingMatrix phi = GroupRingMatrix::fromJson(m.G, m.R, j.at("morphism"));
        return cokernel(phi, m);
    }
    throw std::invalid_argument("unknown filtration rule: " + rule);
}

FilteredModulePtr standard_filtration(PresentedModule m) {
    return FilteredModule::standard(std::move(m));
}

}  // namespace coarsemod
