#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "coarsemod/task.hpp"
#include "doctest.h"

using namespace coarsemod;

namespace {

nlohmann::json J(const char* s) { return nlohmann::json::parse(s); }

nlohmann::json trivialZ() {
    return J(R"({"group":"Z","ring":"Z","rank":1,"relations":[["t - 1"]]})");
}

}  // namespace

TEST_CASE("task parsing applies the documented defaults") {
    TaskSpec ball = parse_task(J(R"({"command":"ball","group":"F2","r":3})"));
    CHECK(ball.command == "ball");
    CHECK(ball.params.at("seed").get<uint64_t>() == 0);
    CHECK(!ball.params.contains("window"));

    nlohmann::json lean{{"command", "lean-check"}, {"module", trivialZ()}};
    CHECK(parse_task(lean).params.at("window").get<int>() == 20);
    CHECK(parse_task(lean).params.at("D").get<int>() == 0);

    lean["module"]["group"] = "F2";
    lean["module"]["relations"] = nullptr;
    CHECK(parse_task(lean).params.at("window").get<int>() == 8);
    lean["module"]["group"] = "BS(2,3)";
    CHECK(parse_task(lean).params.at("window").get<int>() == 6);

    CHECK(default_window(GroupSpec::parse("Z^3")) == 20);
    CHECK(default_window(GroupSpec::parse("T(2,2)")) == 8);

    TaskSpec res = parse_task(J(R"({"command":"resolve","module":{"group":"Z","ring":"Q","rank":1}})"));
    CHECK(res.params.at("maxDepth").get<int>() == 4);
    TaskSpec ins = parse_task(
        J(R"({"command":"insular-check","module":{"group":"Z","ring":"Q","rank":1}})"));
    CHECK(ins.params.at("antithetic").get<bool>() == false);
    CHECK(ins.params.at("d").get<int>() == 0);
    TaskSpec emb = parse_task(
        J(R"({"command":"embed-check","embedding":{"kind":"doubling","source":"Z"}})"));
    CHECK(emb.params.at("samples").get<int>() == 64);
}

TEST_CASE("task parsing rejects malformed specs") {
    CHECK_THROWS_AS(parse_task(J(R"({"group":"Z","r":1})")), TaskError);
    CHECK_THROWS_AS(parse_task(J(R"({"command":"warp","group":"Z"})")), TaskError);
    CHECK_THROWS_AS(parse_task(J(R"({"command":"ball","group":"Z"})")), TaskError);
    CHECK_THROWS_AS(parse_task(J(R"({"command":"ball","group":"Z","r":2,"radius":2})")), TaskError);
    CHECK_THROWS_AS(parse_task(J(R"([1,2])")), TaskError);

    // constants may not exceed the window
    nlohmann::json over{{"command", "insular-check"}, {"module", trivialZ()},
                        {"d", 5}, {"window", 4}};
    CHECK_THROWS_WITH_AS(parse_task(over), "constant exceeds window: d", TaskError);
    nlohmann::json cov = J(R"({"command":"cover","group":"Z","R":30,"window":20})");
    CHECK_THROWS_WITH_AS(parse_task(cov), "constant exceeds window: R", TaskError);
    nlohmann::json zero = J(R"({"command":"cover","group":"Z","R":0,"window":0})");
    CHECK_THROWS_AS(parse_task(zero), TaskError);

    nlohmann::json ghost{{"command", "lean-check"},
                         {"module", {{"file", "no/such/module.json"}}}};
    CHECK_THROWS_AS(parse_task(ghost), TaskError);

    TaskSpec notIdem = parse_task(
        J(R"({"command":"idempotent","group":"Z","ring":"Q","matrix":[["t"]],"window":8})"));
    CHECK_THROWS_AS(run_task(notIdem), TaskError);
}

TEST_CASE("file references resolve against base directory then corpus root") {
    const char* corpus = std::getenv("COARSEMOD_CORPUS");
    REQUIRE(corpus != nullptr);
    nlohmann::json viaCorpus{{"command", "lean-check"},
                             {"module", {{"file", "modules/trivial_z_z.json"}}}};
    TaskSpec t = parse_task(viaCorpus);
    CHECK(t.params.at("module").at("group") == "Z");
    CHECK(t.params.at("module").at("relations").size() == 1);

    std::string dir = "/tmp/coarsemod_task_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir + "/m.json") << trivialZ().dump();
    nlohmann::json viaBase{{"command", "lean-check"}, {"module", {{"file", "m.json"}}}};
    TaskSpec t2 = parse_task(viaBase, dir);
    CHECK(t2.params.at("module") == trivialZ());

    // morphism source/target resolve too
    nlohmann::json mor{{"command", "classify"},
                       {"morphism",
                        {{"source", {{"file", "modules/free_q_z.json"}}},
                         {"target", {{"file", "modules/free_q_z.json"}}},
                         {"matrix", {{"t"}}}}}};
    TaskSpec t3 = parse_task(mor);
    CHECK(t3.params.at("morphism").at("source").at("ring") == "Q");
}

TEST_CASE("reports echo a task that round-trips and passes sanity checks") {
    nlohmann::json j{{"command", "lean-check"}, {"module", trivialZ()},
                     {"window", 12}, {"seed", 9}};
    TaskSpec t = parse_task(j);
    Report rep = run_task(t);
    CHECK(rep.pass);
    CHECK(rep.exitCode() == 0);
    CHECK(rep.toJson().at("version") == "0.1.0");
    TaskSpec echoed = parse_task(rep.task);
    CHECK(echoed == t);
}

TEST_CASE("fixed seeds give byte-identical reports") {
    nlohmann::json j{{"command", "insular-check"}, {"module", trivialZ()},
                     {"d", 2}, {"window", 14}, {"seed", 5}};
    TaskSpec t = parse_task(j);
    CHECK(run_task(t).str() == run_task(t).str());

    TaskSpec res = parse_task(
        J(R"({"command":"resolve","module":{"group":"Z^2","ring":"Q","rank":1,
              "relations":[["t1 - 1"],["t2 - 1"]]},"window":8,"seed":2})"));
    std::string one = run_task(res, 1).str();
    std::string fanned = run_task(res, 3).str();
    CHECK(one == fanned);
}

TEST_CASE("failing properties produce confirmable counterexamples") {
    nlohmann::json j{{"command", "insular-check"}, {"module", trivialZ()},
                     {"d", 3}, {"window", 20}};
    Report rep = run_task(parse_task(j));
    CHECK(!rep.pass);
    CHECK(rep.exitCode() == 1);
    REQUIRE(rep.counterexamples.size() == 1);
    const auto& cx = rep.counterexamples.at(0).at("data");
    auto G = GroupSpec::parse("Z");
    GroupElement s = G->parseElement(cx.at("S").at("elements").at(0).get<std::string>());
    GroupElement u = G->parseElement(cx.at("U").at("elements").at(0).get<std::string>());
    CHECK(s == u.inverse());  // antipodal pair
    CHECK(s.wordLength() + 3 <= 20);
}

TEST_CASE("the cli honors overrides and exit codes") {
    const char* cli = std::getenv("COARSEMOD_CLI");
    REQUIRE(cli != nullptr);
    std::string dir = "/tmp/coarsemod_task_test";
    std::filesystem::create_directories(dir);

    std::ofstream(dir + "/ball.json") << R"({"command":"ball","group":"Z","r":2})";
    std::string cmd = std::string(cli) + " " + dir + "/ball.json > " + dir + "/out.json 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in(dir + "/out.json");
    nlohmann::json rep = nlohmann::json::parse(in);
    CHECK(rep.at("results").at("size") == 5);
    CHECK(rep.at("task").at("seed") == 0);

    std::ofstream(dir + "/lean.json")
        << nlohmann::json{{"command", "lean-check"}, {"module", trivialZ()}}.dump();
    cmd = std::string(cli) + " " + dir + "/lean.json --window 10 --seed 3 > " + dir +
          "/out2.json 2>/dev/null";
    REQUIRE(std::system(cmd.c_str()) == 0);
    std::ifstream in2(dir + "/out2.json");
    nlohmann::json rep2 = nlohmann::json::parse(in2);
    CHECK(rep2.at("task").at("window") == 10);
    CHECK(rep2.at("task").at("seed") == 3);

    std::ofstream(dir + "/bad.json") << R"({"command":"ball","group":"Z","r":2,"bogus":1})";
    cmd = std::string(cli) + " " + dir + "/bad.json > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);

    cmd = std::string(cli) + " > /dev/null 2>&1";
    rc = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
