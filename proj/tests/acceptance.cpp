// Acceptance battery: one line per criterion, nonzero exit if any gate fails.
// Needs COARSEMOD_CORPUS (and COARSEMOD_CLI for the determinism gate).
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "coarsemod/task.hpp"

using namespace coarsemod;

namespace {

std::string corpusRoot() {
    const char* c = std::getenv("COARSEMOD_CORPUS");
    if (!c) throw std::runtime_error("COARSEMOD_CORPUS unset");
    return c;
}

nlohmann::json manifest() {
    std::ifstream in(corpusRoot() + "/manifest.json");
    if (!in) throw std::runtime_error("manifest.json missing");
    return nlohmann::json::parse(in);
}

bool runGate(int num, const std::string& label, double budget,
             const std::function<void(std::string&)>& body) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
        body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && secs > budget) {
        ok = false;
        detail = "over budget";
    }
    std::printf("[%s] %d. %s (%.1fs%s%s)\n", ok ? "PASS" : "FAIL", num, label.c_str(), secs,
                detail.empty() ? "" : ", ", detail.c_str());
    std::fflush(stdout);
    return ok;
}

void expect(bool cond, const std::string& msg) {
    if (!cond) throw std::runtime_error(msg);
}

FilteredModulePtr freeStd(const GroupPtr& G, const Ring& R, int rank) {
    return FilteredModule::standard(PresentedModule::freeModule(G, R, rank));
}

// ---- 1. zero-lean certificates across the ring x group corpus grid --------

void gateLean(std::string& detail) {
    auto man = manifest();
    std::set<std::pair<std::string, std::string>> cells;
    int count = 0;
    for (const auto& m : man.at("modules")) {
        nlohmann::json j{{"command", "lean-check"},
                         {"module", {{"file", m.at("file")}}},
                         {"D", 0},
                         {"seed", 1}};
        Report rep = run_task(parse_task(j));
        expect(rep.pass, m.at("file").get<std::string>() + " is not 0-lean in its window");
        cells.emplace(m.at("ring").get<std::string>(), m.at("group").get<std::string>());
        ++count;
    }
    expect(count >= 10, "corpus has fewer than 10 modules");
    for (const char* ring : {"Z", "Q", "Z/4"})
        for (const char* grp : {"Z", "Z^2", "F2", "BS(2,3)"})
            expect(cells.count({ring, grp}), std::string("no module for ") + ring + " x " + grp);
    detail = std::to_string(count) + " modules, 12 grid cells";
}

// ---- 2. strict insularity fails for the trivial module, witnesses checked -

void gateInsular(std::string& detail) {
    auto G = GroupSpec::parse("Z");
    auto M = FilteredModule::standard(
        PresentedModule::fromJson(nlohmann::json::parse(
            R"({"group":"Z","ring":"Z","rank":1,"relations":[["t - 1"]]})")));
    const int window = 20;
    for (int d = 0; d <= 8; ++d) {
        nlohmann::json j{{"command", "insular-check"},
                         {"module", nlohmann::json::parse(
                                        R"({"group":"Z","ring":"Z","rank":1,"relations":[["t - 1"]]})")},
                         {"d", d},
                         {"window", window},
                         {"seed", 1}};
        Report rep = run_task(parse_task(j));
        expect(!rep.pass, "insularity unexpectedly holds at d=" + std::to_string(d));
        expect(rep.counterexamples.size() == 1, "missing counterexample");
        const auto& cx = rep.counterexamples.at(0).at("data");
        MetricSubset S = MetricSubset::fromJson(G, cx.at("S"));
        MetricSubset U = MetricSubset::fromJson(G, cx.at("U"));
        // confirm by membership: some element of F(S) cap F(U) escapes
        // F(S[d] cap U[d])
        auto WS = M->evaluate(S, window);
        auto WU = M->evaluate(U, window);
        auto WI = M->evaluate(S.enlarged(d).intersect(U.enlarged(d)), window);
        bool escapes = false;
        for (const auto& g : WS.intersectWith(WU).gens)
            if (!g.empty() && !WI.member(g)) escapes = true;
        expect(escapes, "counterexample not confirmed at d=" + std::to_string(d));
    }
    detail = "d=0..8 all fail, witnesses confirmed";
}

// ---- 3. t-1 is bounded at exactly 1 and never bicontrolled ----------------

void gateShiftMorphism(std::string& detail) {
    auto G = GroupSpec::parse("Z");
    Ring Q = Ring::rationals();
    auto F = freeStd(G, Q, 1);
    GroupRingMatrix A(G, Q, 1, 1);
    A.at(0, 0) = GroupRingElement::parse(G, Q, "t - 1");
    FilteredMorphism phi(F, F, A);
    const int window = 20;
    auto plan = SamplingPlan::forWindow(window, 1, 1);

    ControlCertificate bound = bound_of(phi, window, plan);
    expect(bound.pass && bound.constant == 1, "measured bound is not exactly 1");

    for (int b = 0; b <= 8; ++b) {
        ControlCertificate bc = check_bicontrolled(phi, b, window, plan);
        expect(!bc.pass, "bicontrol unexpectedly holds at b=" + std::to_string(b));
        expect(!bc.counterexample.is_null(), "missing witness at b=" + std::to_string(b));
    }

    // geometric-sum obstruction, checked against the raw window spans: the
    // unit vector lies in F({e}) and in the image of t-1 only through a
    // geometric sum that escapes every enlarged ball
    FreeVec unit{{Coord{G->identity(), 0}, Q.one()}};
    MetricSubset S0 = MetricSubset::ofBall(G->identity(), 0);
    expect(F->evaluate(S0, window).member(unit), "unit vector missing from F({e})");
    auto ctx = F->context(window);
    for (int b = 0; b <= 8; ++b) {
        std::vector<FreeVec> img;
        for (const auto& g : F->evaluate(S0.enlarged(b), window).gens) img.push_back(phi.apply(g));
        WindowSubmodule W(G, Q, window, std::move(img), ctx);
        expect(!W.member(unit), "unit vector reachable at b=" + std::to_string(b));
    }
    detail = "bound 1 exact, b=0..8 refuted";
}

// ---- 4. the idempotent battery splits its windows --------------------------

void gateIdempotents(std::string& detail) {
    auto man = manifest();
    int count = 0;
    std::set<std::string> shapes;
    for (const auto& entry : man.at("idempotents")) {
        std::string file = entry.at("file").get<std::string>();
        TaskSpec t = parse_task_file(corpusRoot() + "/" + file);
        auto G = GroupSpec::parse(t.params.at("group").get<std::string>());
        Ring R = Ring::parse(t.params.at("ring").get<std::string>());
        GroupRingMatrix e = GroupRingMatrix::fromJson(G, R, t.params.at("matrix"));
        expect(e.isIdempotent(), file + ": e^2 != e");
        int window = t.params.at("window").get<int>();
        auto plan = SamplingPlan::forWindow(window, e.maxSupportRadius() + 1, 1);
        IdempotentReport ir = idempotent_image(e, window, plan);
        expect(ir.bound.pass, file + ": no finite bound");
        expect(ir.bicontrol.pass && ir.bicontrol.constant == ir.bound.constant,
               file + ": bicontrol fails at the measured bound");
        expect(ir.sumFull && ir.intersectionZero, file + ": window does not split");
        shapes.insert(file.substr(file.find('/') + 1, 4));
        ++count;
    }
    expect(count == 25, "expected 25 idempotents, got " + std::to_string(count));
    expect(shapes.count("diag") && shapes.count("conj") && shapes.count("modn"),
           "missing a battery shape");
    detail = "25 idempotents, all split";
}

// ---- 5. Koszul resolutions with exact composites ---------------------------

void gateResolve(std::string& detail) {
    auto check = [&](const std::string& group, const nlohmann::json& rels,
                     std::vector<int> want, int window) {
        auto G = GroupSpec::parse(group);
        nlohmann::json mj{{"group", group}, {"ring", "Q"}, {"rank", 1}, {"relations", rels}};
        ResolutionChain chain = resolve(PresentedModule::fromJson(mj), 4, window, 1);
        expect(chain.terminated, group + ": resolution did not terminate");
        expect(chain.ranks() == want, group + ": wrong ranks");

        // d compose d vanishes on the nose
        for (size_t k = 1; k < chain.differentials.size(); ++k) {
            GroupRingMatrix dd = chain.differentials[k].mul(chain.differentials[k - 1]);
            for (int i = 0; i < dd.rows; ++i)
                for (int j = 0; j < dd.cols; ++j)
                    expect(dd.at(i, j).isZero(), group + ": d.d != 0");
        }

        // slack is the sum of the differential bounds, and exactness holds
        // inside the window shrunk by it
        int slack = chain.pi.maxSupportRadius();
        for (const auto& d : chain.differentials) slack += d.maxSupportRadius();
        expect(chain.exactnessSlack() == slack, group + ": slack mismatch");
        for (int s = 0; s <= chain.length(); ++s) {
            int probe = std::max(1, std::min(3, window - slack - 1));
            ControlCertificate cert = check_window_exactness(chain, s, probe, window);
            expect(cert.pass, group + ": window exactness fails at stage " + std::to_string(s));
        }
    };
    check("Z", nlohmann::json::parse(R"([["t - 1"]])"), {1, 1}, 12);
    check("Z^2", nlohmann::json::parse(R"([["t1 - 1"],["t2 - 1"]])"), {1, 2, 1}, 8);
    detail = "ranks 1,1 and 1,2,1, exact composites";
}

// ---- 6. asymptotic-dimension covers at n+1 families ------------------------

void gateCovers(std::string& detail) {
    struct Row { const char* group; int families; int window; };
    for (const Row& row : {Row{"Z", 2, 200}, Row{"Z^2", 3, 40}, Row{"Z^3", 4, 12}}) {
        auto G = GroupSpec::parse(row.group);
        for (long long R : {2, 5, 10}) {
            Cover c = build_cover(G, R);
            MetricSubset win = MetricSubset::ofBall(G->identity(), row.window);
            MaterializedCover mat = c.materialize(win);
            expect((int)mat.families.size() == row.families,
                   std::string(row.group) + ": wrong family count");
            ControlCertificate cert = verify_cover(mat, R, win);
            expect(cert.pass, std::string(row.group) + " R=" + std::to_string(R) +
                                  ": cover verification failed");
        }
    }
    detail = "Z,Z^2,Z^3 at R=2,5,10";
}

// ---- 7. pushforward along doubling obeys the envelope transforms -----------

void gatePushforward(std::string& detail) {
    auto G = GroupSpec::parse("Z");
    auto inner = freeStd(G, Ring::integers(), 1);
    auto emb = UniformEmbedding::fromJson(
        nlohmann::json::parse(R"({"kind":"doubling","source":"Z","factor":2})"));
    auto M = FilteredModule::pushforward(inner, emb);
    const int window = 16;
    for (int k : {0, 1, 2}) {
        auto plan = SamplingPlan::forWindow(window, 2 * k, 1);
        ControlCertificate lean = check_lean(*M, 2 * k, window, plan);
        expect(lean.pass, "pushforward not 2D-lean at D=" + std::to_string(k));
        ControlCertificate ins = check_insular(*M, 2 * k, window, plan);
        expect(ins.pass, "pushforward not 2d-insular at d=" + std::to_string(k));
    }
    detail = "lean and insular at 2k for k=0,1,2";
}

// ---- 8. generator bounds dominate measured bounds and are subadditive ------

void gateGeneratorBounds(std::string& detail) {
    std::mt19937_64 rng(88);
    auto G = GroupSpec::parse("Z");
    Ring Q = Ring::rationals();
    const int window = 10;
    auto randomMatrix = [&](int rows, int cols) {
        GroupRingMatrix A(G, Q, rows, cols);
        std::uniform_int_distribution<int> exp(-3, 3), coef(1, 2), keep(0, 3);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                if (keep(rng) == 0 && !(i == 0 && j == 0)) continue;
                std::ostringstream os;
                os << coef(rng) << "*t^" << exp(rng);
                A.at(i, j) = GroupRingElement::parse(G, Q, os.str());
            }
        return A;
    };
    std::uniform_int_distribution<int> rk(1, 2);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rk(rng), m = rk(rng);
        GroupRingMatrix A = randomMatrix(n, m);
        FilteredMorphism phi(freeStd(G, Q, n), freeStd(G, Q, m), A);
        auto plan = SamplingPlan::forWindow(window, phi.shift(), 7 + trial);
        ControlCertificate bound = bound_of(phi, window, plan);
        expect(bound.pass, "no finite bound on trial " + std::to_string(trial));
        expect(generator_bound(phi) >= bound.constant,
               "generator bound undercuts trial " + std::to_string(trial));
    }
    for (int trial = 0; trial < 50; ++trial) {
        GroupRingMatrix A = randomMatrix(2, 2), B = randomMatrix(2, 2);
        auto F2 = freeStd(G, Q, 2);
        FilteredMorphism phi(F2, F2, A), psi(F2, F2, B), comp(F2, F2, A.mul(B));
        auto plan = SamplingPlan::forWindow(window, comp.shift(), 400 + trial);
        ControlCertificate ca = bound_of(phi, window, plan);
        ControlCertificate cb = bound_of(psi, window, plan);
        ControlCertificate cc = bound_of(comp, window, plan);
        expect(ca.pass && cb.pass && cc.pass, "pair trial lost its bound");
        expect(cc.constant <= ca.constant + cb.constant,
               "composition bound exceeds the sum on trial " + std::to_string(trial));
    }
    detail = "50 random + 50 composed morphisms";
}

// ---- 9. ball census against closed forms and brute force -------------------

void gateCensus(std::string& detail) {
    auto F2 = GroupSpec::parse("F2");
    long long powThree = 1;  // 3^r
    for (int r = 0; r <= 6; ++r) {
        long long want = 2 * powThree - 1;
        long long got = ballSize(F2, r);
        expect(got == want, "F2 census off at r=" + std::to_string(r));
        expect((long long)ballAtIdentity(F2, r).size() == got, "F2 ball list disagrees");
        powThree *= 3;
    }
    for (int n = 1; n <= 2; ++n) {
        auto G = GroupSpec::parse("Z^" + std::to_string(n));
        for (int r = 0; r <= 10; ++r) {
            long long brute = 0;
            for (int x = -r; x <= r; ++x) {
                if (n == 1) brute += 1;
                else brute += 2 * (r - std::abs(x)) + 1;
            }
            expect(ballSize(G, r) == brute,
                   "Z^" + std::to_string(n) + " census off at r=" + std::to_string(r));
        }
    }
    detail = "F2 r<=6, Z and Z^2 r<=10";
}

// ---- 10. fixed seeds give byte-identical reports ----------------------------

void gateDeterminism(std::string& detail) {
    for (const char* rel : {"tasks/lean_trivial_z.json", "tasks/insular_trivial_z.json",
                            "tasks/resolve_koszul.json", "tasks/idempotent_conj.json"}) {
        TaskSpec t = parse_task_file(corpusRoot() + "/" + rel);
        std::string a = run_task(t, 1).str();
        std::string b = run_task(t, 4).str();
        expect(a == b, std::string(rel) + ": reports differ across reruns");
    }
    if (const char* cli = std::getenv("COARSEMOD_CLI")) {
        std::string task = corpusRoot() + "/tasks/resolve_koszul.json";
        auto capture = [&](const std::string& extra) {
            std::string out = "/tmp/coarsemod_accept_" + extra + ".json";
            std::string cmd = std::string(cli) + " " + task + " --jobs " +
                              (extra == "a" ? "1" : "4") + " > " + out + " 2>/dev/null";
            if (std::system(cmd.c_str()) != 0) throw std::runtime_error("cli rerun failed");
            std::ifstream in(out);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        expect(capture("a") == capture("b"), "cli reports differ across reruns");
        detail = "library and cli reruns byte-identical";
    } else {
        detail = "library reruns byte-identical";
    }
}

}  // namespace

int main() {
    bool ok = true;
    ok &= runGate(1, "zero-lean certificates across the module corpus", 60, gateLean);
    ok &= runGate(2, "trivial module fails strict insularity with confirmed witnesses", 10,
                  gateInsular);
    ok &= runGate(3, "t-1 bounded at exactly 1, bicontrol refuted through b=8", 10,
                  gateShiftMorphism);
    ok &= runGate(4, "idempotent battery splits every window", 120, gateIdempotents);
    ok &= runGate(5, "Koszul resolutions with exact composites and window exactness", 60,
                  gateResolve);
    ok &= runGate(6, "covers realize asymptotic dimension on Z, Z^2, Z^3", 60, gateCovers);
    ok &= runGate(7, "pushforward along doubling obeys envelope transforms", 30, gatePushforward);
    ok &= runGate(8, "generator bounds dominate and compose subadditively", 60,
                  gateGeneratorBounds);
    ok &= runGate(9, "ball census matches closed forms and brute force", 30, gateCensus);
    ok &= runGate(10, "fixed seeds reproduce byte-identical reports", 60, gateDeterminism);
    return ok ? 0 : 1;
}
