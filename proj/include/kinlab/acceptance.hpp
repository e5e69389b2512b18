#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "kinlab/io.hpp"

namespace kinlab::acceptance {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string summary;  // one line: measured value against the threshold
    double seconds = 0;
    io::Json details = io::Json::object();
};

struct SuiteOptions {
    bool quick = false;   // combinatorial audits and closed-form identities only
    std::set<int> only;   // empty: every check allowed by `quick`
    std::uint64_t seed = 20240611;
    // Called once per finished check, in id order.
    std::function<void(const CheckResult&)> report;
    // Progress messages from the long checks.
    std::function<void(const std::string&)> log;
};

inline constexpr int criterion_count = 13;
// Ids run by --quick.
const std::set<int>& quick_ids();

std::vector<CheckResult> run_suite(const SuiteOptions& o = {});

// "[PASS] 7 airy scaling: ..." (fixed layout used by the CLI and the test binary).
std::string format_line(const CheckResult& r);
io::Json to_json(const std::vector<CheckResult>& results, bool with_timings);

}  // namespace kinlab::acceptance
