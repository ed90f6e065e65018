#include "rsc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "rsc/errors.hpp"

namespace rsc {

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw InvalidArgument("Wilson interval needs at least one trial");
  constexpr double z = 1.96;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1 + z * z / n;
  const double centre = (p + z * z / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

ExperimentRow make_row(std::size_t n, std::size_t trials, std::size_t satisfied,
                       std::optional<double> limit) {
  ExperimentRow row;
  row.n = n;
  row.trials = trials;
  row.satisfied = satisfied;
  row.estimate = static_cast<double>(satisfied) / static_cast<double>(trials);
  std::tie(row.ci_lo, row.ci_hi) = wilson_interval(satisfied, trials);
  row.limit = limit;
  return row;
}

std::string to_csv(const ExperimentResult& result) {
  std::string out = "N,trials,satisfied,estimate,ci_lo,ci_hi,limit\n";
  char buf[256];
  for (const auto& r : result.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%zu,%.6f,%.6f,%.6f,", r.n, r.trials, r.satisfied,
                  r.estimate, r.ci_lo, r.ci_hi);
    out += buf;
    if (r.limit) {
      std::snprintf(buf, sizeof buf, "%.0f", *r.limit);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace rsc
