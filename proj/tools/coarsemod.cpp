#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "coarsemod/task.hpp"

using namespace coarsemod;

namespace {

void usage(std::ostream& os) {
    os << "usage: coarsemod <task.json> [--window N] [--seed N] [--jobs N]\n"
          "                 [--emit-chain PATH] [--format json] [--timings]\n"
          "Runs one task file and prints the JSON report on stdout.\n"
          "Exit codes: 0 pass, 1 property failure, 2 usage error.\n";
}

long long parseNum(const std::string& flag, const char* val) {
    if (!val) throw TaskError(flag + " expects a value");
    try {
        return std::stoll(val);
    } catch (const std::exception&) {
        throw TaskError(flag + " expects an integer, got '" + std::string(val) + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    std::string taskPath;
    nlohmann::json overrides = nlohmann::json::object();
    int jobs = 1;
    bool timings = false;
    try {
        for (int i = 1; i < argc; ++i) {
            std::string arg = argv[i];
            auto next = [&]() -> const char* { return i + 1 < argc ? argv[++i] : nullptr; };
            if (arg == "--help" || arg == "-h") {
                usage(std::cout);
                return 0;
            } else if (arg == "--window") {
                overrides["window"] = parseNum(arg, next());
            } else if (arg == "--seed") {
                overrides["seed"] = (uint64_t)parseNum(arg, next());
            } else if (arg == "--jobs") {
                jobs = (int)parseNum(arg, next());
                if (jobs < 1) throw TaskError("--jobs expects a positive integer");
            } else if (arg == "--emit-chain") {
                const char* v = next();
                if (!v) throw TaskError("--emit-chain expects a path");
                overrides["emitChain"] = std::string(v);
            } else if (arg == "--format") {
                const char* v = next();
                if (!v || std::string(v) != "json") throw TaskError("--format supports only json");
            } else if (arg == "--timings") {
                timings = true;
            } else if (!arg.empty() && arg[0] == '-') {
                throw TaskError("unknown flag: " + arg);
            } else if (taskPath.empty()) {
                taskPath = arg;
            } else {
                throw TaskError("only one task file per invocation");
            }
        }
        if (taskPath.empty()) {
            usage(std::cerr);
            return 2;
        }

        std::ifstream in(taskPath);
        if (!in) throw TaskError("missing file: " + taskPath);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw TaskError(taskPath + ": " + e.what());
        }
        for (const auto& [key, value] : overrides.items()) j[key] = value;

        TaskSpec task = parse_task(std::move(j),
                                   std::filesystem::path(taskPath).parent_path().string());
        auto t0 = std::chrono::steady_clock::now();
        Report rep = run_task(task, jobs);
        if (timings) {
            auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            std::cerr << task.command << ": " << ms << " ms\n";
        }
        std::cout << rep.str();
        if (task.params.contains("output")) {
            std::string outPath = task.params.at("output").get<std::string>();
            std::ofstream out(outPath);
            if (!out) throw TaskError("cannot write report: " + outPath);
            out << rep.str();
        }
        return rep.exitCode();
    } catch (const TaskError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
