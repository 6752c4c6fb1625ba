// selftest.hpp
// Seeded invariant and differential suites, runnable from the CLI.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qfilter {

struct SuiteReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    double max_residual = 0;
    double tolerance = 0;
    double seconds = 0;
    /// JSON text of the first failing case (seed and inputs), empty if none.
    std::string failing_case;

    bool passed() const noexcept { return failures == 0 && cases > 0; }
};

struct SelftestOptions {
    std::uint64_t seed = 0;
    /// Negative control: perturbs every suite so that it must fail.
    bool inject_fault = false;
};

/// trace_norm(L[p1 rho - p2 sigma]) <= trace_norm(p1 rho - p2 sigma) + 1e-10
/// for random channels of dimension 2..8 with 1..4 Kraus operators.
SuiteReport contractivity_suite(std::uint64_t seed, std::size_t cases = 100, bool fault = false);

/// Completeness of (K, K0) for random angles, 1..4 system qubits, 1..3 layers.
SuiteReport kraus_completeness_suite(std::uint64_t seed, std::size_t cases = 1000, bool fault = false);

/// Weighted empirical risk against -D_hs, unfiltered and filtered, M <= 8
/// samples on <= 3 qubits.
SuiteReport risk_identity_suite(std::uint64_t seed, std::size_t cases = 100, bool fault = false);

/// Circuit protocols against the density-matrix path: classifier value and
/// D_hs within 1e-9, post-selection probabilities within 1e-10. M in {2,3,4},
/// <= 2 data qubits. Returns the value report then the probability report.
std::vector<SuiteReport> path_equivalence_suite(std::uint64_t seed, std::size_t cases = 100, bool fault = false);

std::vector<SuiteReport> run_selftest(const SelftestOptions& options);

}  // namespace qfilter
