#include "coarsemod/task.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "coarsemod/checks.hpp"
#include "coarsemod/embedding.hpp"

namespace coarsemod {

namespace {

namespace fs = std::filesystem;

struct CommandSchema {
    std::set<std::string> required;
    std::set<std::string> optional;
};

const std::map<std::string, CommandSchema>& schemas() {
    static const std::map<std::string, CommandSchema> s = {
        {"ball", {{"group", "r"}, {"seed", "output"}}},
        {"cover", {{"group", "R"}, {"window", "seed", "output"}}},
        {"embed-check", {{"embedding"}, {"window", "seed", "samples", "output"}}},
        {"filtration", {{"module", "subset"}, {"window", "seed", "output"}}},
        {"lean-check", {{"module"}, {"D", "window", "seed", "output"}}},
        {"insular-check", {{"module"}, {"d", "window", "seed", "antithetic", "output"}}},
        {"control-check", {{"morphism"}, {"b", "window", "seed", "output"}}},
        {"classify", {{"morphism"}, {"window", "seed", "output"}}},
        {"resolve", {{"module"}, {"maxDepth", "window", "seed", "emitChain", "output"}}},
        {"idempotent", {{"matrix", "group", "ring"}, {"window", "seed", "output"}}},
    };
    return s;
}

nlohmann::json loadJsonFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TaskError("missing file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw TaskError(path + ": " + e.what());
    }
}

/// {"file": p} -> loaded JSON, resolved against baseDir then the corpus root.
void resolveFileRef(nlohmann::json& v, const std::string& baseDir) {
    if (!v.is_object() || v.size() != 1 || !v.contains("file")) return;
    std::string p = v.at("file").get<std::string>();
    std::vector<std::string> tries;
    if (fs::path(p).is_absolute()) {
        tries.push_back(p);
    } else {
        if (!baseDir.empty()) tries.push_back((fs::path(baseDir) / p).string());
        if (const char* root = std::getenv("COARSEMOD_CORPUS"))
            tries.push_back((fs::path(root) / p).string());
        tries.push_back(p);
    }
    for (const auto& cand : tries) {
        if (fs::exists(cand)) {
            v = loadJsonFile(cand);
            return;
        }
    }
    throw TaskError("missing file: " + p);
}

int getInt(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<int>();
    } catch (const nlohmann::json::exception&) {
        throw TaskError("field '" + key + "' must be an integer");
    }
}

std::string getStr(const nlohmann::json& j, const std::string& key) {
    try {
        return j.at(key).get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw TaskError("field '" + key + "' must be a string");
    }
}

/// Group whose default window sizes the task, per command.
GroupPtr taskGroup(const std::string& command, const nlohmann::json& p) {
    try {
        if (p.contains("group")) return GroupSpec::parse(p.at("group").get<std::string>());
        if (p.contains("module")) return GroupSpec::parse(p.at("module").at("group").get<std::string>());
        if (p.contains("morphism"))
            return GroupSpec::parse(p.at("morphism").at("source").at("group").get<std::string>());
        if (p.contains("embedding")) return UniformEmbedding::fromJson(p.at("embedding")).src;
    } catch (const TaskError&) {
        throw;
    } catch (const std::exception& e) {
        throw TaskError(std::string("cannot resolve the task group: ") + e.what());
    }
    throw TaskError("cannot resolve the task group for command '" + command + "'");
}

FilteredModulePtr taskModule(const nlohmann::json& p) {
    try {
        return FilteredModule::fromJson(p.at("module"));
    } catch (const std::exception& e) {
        throw TaskError(std::string("field 'module': ") + e.what());
    }
}

FilteredMorphism taskMorphism(const nlohmann::json& p) {
    try {
        const auto& m = p.at("morphism");
        auto src = FilteredModule::fromJson(m.at("source"));
        auto dst = FilteredModule::fromJson(m.at("target"));
        return FilteredMorphism::fromJson(std::move(src), std::move(dst), m);
    } catch (const std::exception& e) {
        throw TaskError(std::string("field 'morphism': ") + e.what());
    }
}

/// Generator reach of the filtration: how much plan slack an evaluation needs
/// beyond the subset radius.
int moduleSlack(const FilteredModule& M) {
    int s = M.sigmaRadius();
    if (M.defining) s = std::max(s, M.defining->maxSupportRadius());
    return s;
}

void addCert(Report& rep, const ControlCertificate& cert) {
    rep.certificates.push_back(cert.toJson());
    if (!cert.pass) {
        rep.pass = false;
        if (!cert.counterexample.is_null())
            rep.counterexamples.push_back({{"kind", cert.kind}, {"data", cert.counterexample}});
    }
}

uint64_t taskSeed(const nlohmann::json& p) { return p.at("seed").get<uint64_t>(); }

SamplingPlan taskPlan(const nlohmann::json& p, int window, int slack) {
    return SamplingPlan::forWindow(window, slack, taskSeed(p));
}

Report runBall(const TaskSpec& t) {
    Report rep;
    auto G = GroupSpec::parse(getStr(t.params, "group"));
    int r = getInt(t.params, "r");
    if (r < 0) throw TaskError("field 'r' must be nonnegative");
    auto b = ballAtIdentity(G, r);
    nlohmann::json spheres = nlohmann::json::array();
    long long prev = 0;
    for (int k = 0; k <= r; ++k) {
        long long s = ballSize(G, k);
        spheres.push_back(s - prev);
        prev = s;
    }
    rep.results = {{"radius", r}, {"size", (long long)b.size()}, {"spheres", std::move(spheres)}};
    if (b.size() <= 200) {
        nlohmann::json elems = nlohmann::json::array();
        for (const auto& x : b) elems.push_back(x.str());
        rep.results["elements"] = std::move(elems);
    }
    return rep;
}

Report runCover(const TaskSpec& t) {
    Report rep;
    auto G = GroupSpec::parse(getStr(t.params, "group"));
    long long R = getInt(t.params, "R");
    int window = getInt(t.params, "window");
    Cover c = build_cover(G, R);
    MetricSubset win = MetricSubset::ofBall(G->identity(), window);
    MaterializedCover mat = c.materialize(win);
    addCert(rep, verify_cover(mat, R, win));
    rep.results = {{"families", (int)mat.families.size()},
                   {"bound", mat.bound},
                   {"separation", mat.separation}};
    return rep;
}

Report runEmbedCheck(const TaskSpec& t) {
    Report rep;
    UniformEmbedding emb = UniformEmbedding::fromJson(t.params.at("embedding"));
    int window = getInt(t.params, "window");
    int samples = t.params.at("samples").get<int>();
    auto pairs = samplePairs(emb.src, window, taskSeed(t.params), samples);
    addCert(rep, verify_uniform_embedding(emb, pairs));
    rep.results = {{"map", emb.name()}, {"pairs", (int)pairs.size()}};
    return rep;
}

Report runFiltration(const TaskSpec& t) {
    Report rep;
    auto M = taskModule(t.params);
    int window = getInt(t.params, "window");
    MetricSubset S = MetricSubset::fromJson(M->space(), t.params.at("subset"));
    WindowSubmodule W = M->evaluate(S, window);
    nlohmann::json gens = nlohmann::json::array();
    for (size_t i = 0; i < W.gens.size() && i < 64; ++i) gens.push_back(freeVecStr(W.gens[i]));
    rep.results = {{"rule", ruleName(M->rule)},
                   {"rank", W.generatorRank()},
                   {"generators", std::move(gens)}};
    return rep;
}

Report runLeanCheck(const TaskSpec& t) {
    Report rep;
    auto M = taskModule(t.params);
    int window = getInt(t.params, "window");
    int D = getInt(t.params, "D");
    addCert(rep, check_lean(*M, D, window, taskPlan(t.params, window, D + moduleSlack(*M))));
    return rep;
}

Report runInsularCheck(const TaskSpec& t) {
    Report rep;
    auto M = taskModule(t.params);
    int window = getInt(t.params, "window");
    int d = getInt(t.params, "d");
    auto plan = taskPlan(t.params, window, d + moduleSlack(*M));
    bool anti = t.params.at("antithetic").get<bool>();
    addCert(rep, anti ? check_insular_antithetic(*M, d, window, plan)
                      : check_insular(*M, d, window, plan));
    return rep;
}

Report runControlCheck(const TaskSpec& t) {
    Report rep;
    FilteredMorphism phi = taskMorphism(t.params);
    int window = getInt(t.params, "window");
    auto plan = taskPlan(t.params, window, 1);
    ControlCertificate bound = bound_of(phi, window, plan);
    addCert(rep, bound);
    int b = t.params.contains("b") ? getInt(t.params, "b")
                                   : (bound.pass ? (int)bound.constant : phi.shift());
    addCert(rep, check_bicontrolled(phi, b, window, plan));
    rep.results = {{"measuredBound", bound.pass ? bound.constant : -1}, {"enlargement", b}};
    return rep;
}

Report runClassify(const TaskSpec& t) {
    Report rep;
    FilteredMorphism phi = taskMorphism(t.params);
    int window = getInt(t.params, "window");
    ClassifyResult res = classify_morphism(phi, window, taskPlan(t.params, window, 1));
    rep.certificates.push_back(res.bound.toJson());
    rep.certificates.push_back(res.bicontrol.toJson());
    rep.results = res.toJson();
    rep.pass = res.verdict != MorphismClass::Neither;
    if (!rep.pass && !res.bicontrol.counterexample.is_null())
        rep.counterexamples.push_back(
            {{"kind", res.bicontrol.kind}, {"data", res.bicontrol.counterexample}});
    return rep;
}

Report runResolve(const TaskSpec& t, int jobs) {
    Report rep;
    PresentedModule m;
    try {
        m = PresentedModule::fromJson(t.params.at("module"));
    } catch (const std::exception& e) {
        throw TaskError(std::string("field 'module': ") + e.what());
    }
    int window = getInt(t.params, "window");
    int maxDepth = getInt(t.params, "maxDepth");
    ResolutionChain chain = resolve(m, maxDepth, window, taskSeed(t.params));

    int nStages = chain.length() + 1;
    std::vector<ControlCertificate> certs(nStages);
    auto probe = [&](int s) {
        const GroupRingMatrix& dS = s == 0 ? chain.pi : chain.differentials[s - 1];
        return std::max(0, std::min(3, window - dS.maxSupportRadius() - chain.exactnessSlack()));
    };
    if (jobs <= 1 || nStages == 1) {
        for (int s = 0; s < nStages; ++s)
            certs[s] = check_window_exactness(chain, s, probe(s), window);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int s = next.fetch_add(1); s < nStages; s = next.fetch_add(1))
                certs[s] = check_window_exactness(chain, s, probe(s), window);
        };
        std::vector<std::thread> pool;
        for (int k = 0; k < std::min(jobs, nStages); ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& c : certs) addCert(rep, c);

    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : chain.stages) stages.push_back(s.toJson());
    rep.results = {{"ranks", chain.ranks()},
                   {"terminated", chain.terminated},
                   {"slack", chain.exactnessSlack()},
                   {"stages", std::move(stages)}};
    if (t.params.contains("emitChain")) {
        std::string path = getStr(t.params, "emitChain");
        std::ofstream out(path);
        if (!out) throw TaskError("cannot write chain file: " + path);
        out << chain.toJson().dump(2) << "\n";
        rep.results["chainFile"] = path;
    }
    return rep;
}

Report runIdempotent(const TaskSpec& t) {
    Report rep;
    auto G = GroupSpec::parse(getStr(t.params, "group"));
    Ring R = Ring::parse(getStr(t.params, "ring"));
    GroupRingMatrix e;
    try {
        e = GroupRingMatrix::fromJson(G, R, t.params.at("matrix"));
    } catch (const std::exception& ex) {
        throw TaskError(std::string("field 'matrix': ") + ex.what());
    }
    int window = getInt(t.params, "window");
    if (!e.isIdempotent()) throw TaskError("idempotent: matrix is not idempotent");
    auto plan = taskPlan(t.params, window, e.maxSupportRadius() + 1);
    IdempotentReport ir = idempotent_image(e, window, plan);
    addCert(rep, ir.bound);
    addCert(rep, ir.bicontrol);
    addCert(rep, ir.lean);
    addCert(rep, ir.insular);
    if (!ir.sumFull || !ir.intersectionZero) rep.pass = false;
    rep.results = ir.toJson();
    return rep;
}

}  // namespace

nlohmann::json TaskSpec::toJson() const {
    nlohmann::json out = params;
    out["command"] = command;
    return out;
}

int default_window(const GroupPtr& G) {
    switch (G->family) {
        case GroupFamily::FreeAbelian: return 20;
        case GroupFamily::Free: return 8;
        case GroupFamily::BaumslagSolitar: return 6;
        case GroupFamily::ProductOfTrees: return 8;
    }
    return 8;
}

TaskSpec parse_task(nlohmann::json j, const std::string& baseDir) {
    if (!j.is_object()) throw TaskError("task must be a JSON object");
    if (!j.contains("command")) throw TaskError("missing field: command");
    TaskSpec t;
    t.command = getStr(j, "command");
    auto it = schemas().find(t.command);
    if (it == schemas().end()) throw TaskError("unknown command: " + t.command);
    const CommandSchema& schema = it->second;

    t.params = j;
    t.params.erase("command");
    for (auto& [key, value] : t.params.items()) {
        if (!schema.required.count(key) && !schema.optional.count(key))
            throw TaskError("unknown key: " + key);
        (void)value;
    }
    for (const auto& key : schema.required)
        if (!t.params.contains(key)) throw TaskError("missing field: " + key);

    for (const char* key : {"module", "morphism", "matrix", "embedding", "subset"}) {
        if (!t.params.contains(key)) continue;
        resolveFileRef(t.params.at(key), baseDir);
        if (std::string(key) == "morphism") {
            auto& m = t.params.at(key);
            if (m.is_object()) {
                if (m.contains("source")) resolveFileRef(m.at("source"), baseDir);
                if (m.contains("target")) resolveFileRef(m.at("target"), baseDir);
            }
        }
    }

    if (schema.optional.count("seed") && !t.params.contains("seed")) t.params["seed"] = 0;
    if (schema.optional.count("window") && !t.params.contains("window"))
        t.params["window"] = default_window(taskGroup(t.command, t.params));
    if (t.command == "lean-check" && !t.params.contains("D")) t.params["D"] = 0;
    if (t.command == "insular-check") {
        if (!t.params.contains("d")) t.params["d"] = 0;
        if (!t.params.contains("antithetic")) t.params["antithetic"] = false;
    }
    if (t.command == "resolve" && !t.params.contains("maxDepth")) t.params["maxDepth"] = 4;
    if (t.command == "embed-check" && !t.params.contains("samples")) t.params["samples"] = 64;

    if (t.params.contains("window")) {
        int window = getInt(t.params, "window");
        if (window <= 0) throw TaskError("field 'window' must be positive");
        for (const char* key : {"D", "d", "b", "R"}) {
            if (!t.params.contains(key)) continue;
            if (getInt(t.params, key) > window)
                throw TaskError(std::string("constant exceeds window: ") + key);
        }
    }
    return t;
}

TaskSpec parse_task_file(const std::string& path) {
    nlohmann::json j = loadJsonFile(path);
    return parse_task(std::move(j), fs::path(path).parent_path().string());
}

nlohmann::json Report::toJson() const {
    return {{"version", version},
            {"task", task},
            {"pass", pass},
            {"certificates", certificates},
            {"counterexamples", counterexamples},
            {"results", results.is_null() ? nlohmann::json::object() : results}};
}

std::string Report::str() const { return toJson().dump(2) + "\n"; }

Report run_task(const TaskSpec& t, int jobs) {
    Report rep;
    if (t.command == "ball") rep = runBall(t);
    else if (t.command == "cover") rep = runCover(t);
    else if (t.command == "embed-check") rep = runEmbedCheck(t);
    else if (t.command == "filtration") rep = runFiltration(t);
    else if (t.command == "lean-check") rep = runLeanCheck(t);
    else if (t.command == "insular-check") rep = runInsularCheck(t);
    else if (t.command == "control-check") rep = runControlCheck(t);
    else if (t.command == "classify") rep = runClassify(t);
    else if (t.command == "resolve") rep = runResolve(t, jobs);
    else if (t.command == "idempotent") rep = runIdempotent(t);
    else throw TaskError("unknown command: " + t.command);
    rep.task = t.toJson();
    return rep;
}

}  // namespace coarsemod
