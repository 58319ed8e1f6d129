#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vfield {

enum class AcceptanceScale { Desk, Paper };

struct AcceptanceOptions {
    AcceptanceScale scale = AcceptanceScale::Desk;
    std::filesystem::path work_dir;
};

struct CriterionResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

// Runs the verification suite: one result per criterion, one line printed
// per criterion. Desk scale keeps the statistical runs small (1e5 saccades,
// 256x256 random scenes); paper scale runs the full 1e6-saccade protocol
// and enforces the wall-clock budget.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace vfield
