#pragma once

#include <string>
#include <vector>

namespace dclt {

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

// Runs the library's invariants as executable checks. `quick` shrinks the
// Monte Carlo sample sizes so the whole run stays within a few seconds.
std::vector<CheckResult> run_verification(bool quick);

}  // namespace dclt
