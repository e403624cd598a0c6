#pragma once

// Quick invariant suites run by `polybm check`. Each suite is cheap
// (well under a second) and deterministic.

#include <cstddef>
#include <string>
#include <vector>

namespace polybm {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::size_t self_check_count();
std::vector<CheckResult> run_self_checks();

}  // namespace polybm
