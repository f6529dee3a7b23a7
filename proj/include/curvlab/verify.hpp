#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace curvlab::verify {

/// One verified identity or inequality: the worst relative residual (or
/// slack deficit) seen across the cases, the tolerance it was held to, and
/// where the worst case came from.
struct CheckResult {
    std::string id;
    int cases = 0;
    double max_residual = 0;
    double tolerance = 0;
    std::uint64_t worst_seed = 0;
    bool passed = false;
    std::string detail;
};

struct SuiteOptions {
    int m = 4;
    int cases = 100;
    std::uint64_t seed = 42;
    double tol_scale = 1.0;  // multiplies every check tolerance
};

const std::vector<std::string>& suite_names();  // excludes "all"
bool is_suite(const std::string& name);

/// Run one suite ("core", "spectral", "algebra", "estimates", "jets",
/// "models", "metriclab" or "all").  Throws domain_error on unknown names.
std::vector<CheckResult> run_suite(const std::string& suite, const SuiteOptions& opt);

/// Case-parallel map: fn(case_index) for 0..n-1, scheduled across at most
/// CURVLAB_THREADS workers (results must be written to disjoint slots).
void parallel_cases(int n, const std::function<void(int)>& fn);

}  // namespace curvlab::verify
