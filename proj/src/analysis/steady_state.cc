#include "sqpsim/analysis/steady_state.h"

#include <algorithm>

#include "sqpsim/sim/check.h"

namespace sqpsim::analysis {

BitsPerSecond PredictedSample(BitsPerSecond capacity, BitsPerSecond cross_rate,
                              double m, BitsPerSecond estimate) {
  SQPSIM_CHECK(capacity > 0 && estimate > 0 && m > 0, "bad model input");
  if (m * estimate + cross_rate <= capacity) return m * estimate;
  return capacity / (1.0 + cross_rate / (m * estimate));
}

std::optional<BitsPerSecond> SteadyStateEstimate(BitsPerSecond capacity,
                                                 double t,
                                                 BitsPerSecond cross_rate,
                                                 double m) {
  const BitsPerSecond b = capacity * t - cross_rate / m;
  if (b <= 0) return std::nullopt;
  return b;
}

double UtilizationOfAvailable(double m, double t, double available) {
  SQPSIM_CHECK(available > 0 && available <= 1, "A must be in (0, 1]");
  return (m * t + available - 1.0) / (m * available);
}

double ElasticShareBound(double m, double t) {
  SQPSIM_CHECK(m > 1, "m must exceed 1");
  return std::max(0.0, (m * t - 1.0) / (m - 1.0));
}

BitsPerSecond SymmetricFlowEstimate(BitsPerSecond capacity, double t, double m,
                                    int n) {
  SQPSIM_CHECK(n >= 1, "need at least one flow");
  return capacity * t * m / (m + n - 1);
}

double PredictedTotalUtilization(double t, double m, int n) {
  return std::min(1.0, n * t * m / (m + n - 1));
}

std::optional<double> JainIndex(std::span<const double> rates) {
  double sum = 0;
  double sum_sq = 0;
  for (const double x : rates) {
    SQPSIM_CHECK(x >= 0, "negative rate");
    sum += x;
    sum_sq += x * x;
  }
  if (rates.empty() || sum_sq == 0) return std::nullopt;
  return sum * sum / (static_cast<double>(rates.size()) * sum_sq);
}

}  // namespace sqpsim::analysis
