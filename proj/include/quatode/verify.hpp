#pragma once

#include <string>
#include <vector>

namespace quatode::verify {

struct CheckResult {
    std::string name;
    int criterion = 0; // 0 = supplementary check
    bool pass = false;
    std::string detail;
};

/// Names of all checks, in the fixed execution/reporting order.
std::vector<std::string> check_names();

/// Runs the full golden suite (Examples 1-4, Theorem-2 scaling, the
/// algebraic property suites, and the numeric-oracle agreement).
/// perturb != 0 shifts the real part of Example 1's psi-coefficient by that
/// amount before the residual check; the check is expected to fail then.
std::vector<CheckResult> run_checks(double perturb = 0.0);

} // namespace quatode::verify
