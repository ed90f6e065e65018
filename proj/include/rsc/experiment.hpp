#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rsc {

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t satisfied = 0;
  double estimate = 0;
  double ci_lo = 0;
  double ci_hi = 0;
  /// Known limiting value, when the experiment has one.
  std::optional<double> limit;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
};

/// Wilson score interval at 95% (z = 1.96).
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials);

ExperimentRow make_row(std::size_t n, std::size_t trials, std::size_t satisfied,
                       std::optional<double> limit);

/// CSV with header N,trials,satisfied,estimate,ci_lo,ci_hi,limit; fixed
/// six-decimal formatting so output is byte-stable.
std::string to_csv(const ExperimentResult& result);

}  // namespace rsc
