#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace vperc::accept {

enum class Verdict { Pass, Warn, Fail };

struct CriterionResult {
    std::string id;
    std::string name;
    bool hard = true;
    Verdict verdict = Verdict::Fail;
    std::string detail;
};

struct SuiteResult {
    std::vector<CriterionResult> criteria;
    /// All hard gates pass and no soft gate fails beyond its 2x band.
    bool ok() const;
};

/// Runs the verification criteria. `full` uses the stated budgets; the fast
/// suite runs every criterion at reduced scale as a smoke gate.
SuiteResult run_suite(bool full, int workers, std::ostream& log);

}  // namespace vperc::accept
