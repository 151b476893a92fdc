#pragma once

#include <string>
#include <vector>

#include "collar/config.hpp"
#include "collar/verification.hpp"

namespace collar {

/// Runs every [[check]] and then the expanded [sweep] grid. Checks run on up
/// to `threads` workers (0: config value, then hardware concurrency); the
/// result order is the declaration order regardless.
std::vector<VerificationReport> run_suite(const SuiteConfig& config, int threads = 0);

/// No check failed (not-applicable checks do not count as failures).
bool suite_passed(const std::vector<VerificationReport>& reports);

/// JSON array of report objects; numbers printed with 17 significant digits.
std::string reports_to_json(const std::vector<VerificationReport>& reports);

/// Columns: check, manifold, p, n, N, kappa, lambda, L, D, a, b,
/// hypothesis_margin, conclusion_margin, pass.
std::string reports_to_csv(const std::vector<VerificationReport>& reports);

/// Same value formatting as the reports ("inf", "nan", or %.17g).
std::string format_number(double x);

}  // namespace collar
