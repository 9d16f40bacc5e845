#pragma once

#include <string>
#include <vector>

namespace sigdev {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the cross-module invariant checks at a size that finishes in a few
/// seconds. Every check runs even if an earlier one fails.
std::vector<CheckResult> run_selftest();

}  // namespace sigdev
