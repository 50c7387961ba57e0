#pragma once

#include "coarsemod/cover.hpp"
#include "coarsemod/resolution.hpp"

namespace coarsemod {

/// Usage-level failure: malformed task, unknown key, missing file, constant
/// out of range. Maps to exit code 2; property failures map to 1 instead.
struct TaskError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One CLI task: the command plus its normalized parameter object (defaults
/// applied, file references inlined). Equality is structural, which backs the
/// report round-trip invariant.
struct TaskSpec {
    std::string command;
    nlohmann::json params;

    bool operator==(const TaskSpec& o) const {
        return command == o.command && params == o.params;
    }
    nlohmann::json toJson() const;
};

/// Validates against the per-command schema: required keys present, unknown
/// keys rejected, every constant parameter bounded by the window. {"file": p}
/// values are loaded relative to baseDir, then the corpus root.
TaskSpec parse_task(nlohmann::json j, const std::string& baseDir = "");
TaskSpec parse_task_file(const std::string& path);

/// Window used when a task omits one: 20 on Z^n, 8 on free groups and tree
/// products, 6 on BS.
int default_window(const GroupPtr& G);

struct Report {
    std::string version = "0.1.0";
    nlohmann::json task;
    nlohmann::json certificates = nlohmann::json::array();
    nlohmann::json counterexamples = nlohmann::json::array();
    nlohmann::json results;
    bool pass = true;

    int exitCode() const { return pass ? 0 : 1; }
    /// Key-sorted, indented dump; byte-identical for identical tasks and
    /// seeds (timings never enter the report).
    nlohmann::json toJson() const;
    std::string str() const;
};

/// Runs the task. jobs > 1 fans independent certificate computations across
/// threads; the report content does not depend on the fan-out.
Report run_task(const TaskSpec& t, int jobs = 1);

}  // namespace coarsemod
