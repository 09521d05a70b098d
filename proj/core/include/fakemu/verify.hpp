#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fakemu/explicit_formula.hpp"

namespace fakemu {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;

    int passed() const;
    int failed() const;
};

std::vector<std::string> suite_names();

// runs one invariant suite: "core", "oracle" or "asymptotics"
SuiteResult run_suite(std::string_view name, const FormulaConfig& cfg = {},
                      std::shared_ptr<const ZetaKernel> kernel = nullptr);

}  // namespace fakemu
