#ifndef SQPSIM_ANALYSIS_STEADY_STATE_H_
#define SQPSIM_ANALYSIS_STEADY_STATE_H_

#include <optional>
#include <span>

#include "sqpsim/sim/units.h"

namespace sqpsim::analysis {

// Closed-form steady state of a single SQP flow at a bottleneck of capacity
// C shared with cross traffic of rate R, with pacing multiplier m and target
// multiplier T.

// Sample a frame paced at m*B measures when competing traffic of rate R
// interleaves with the pacing burst: C / (1 + R/(m*B)). When m*B + R <= C
// the burst never queues and the sample is just m*B.
BitsPerSecond PredictedSample(BitsPerSecond capacity, BitsPerSecond cross_rate,
                              double m, BitsPerSecond estimate);

// Estimate at which B == T * PredictedSample: C*T - R/m. nullopt when that
// is not positive (the flow cannot sustain itself against R).
std::optional<BitsPerSecond> SteadyStateEstimate(BitsPerSecond capacity,
                                                 double t, BitsPerSecond cross_rate,
                                                 double m);

// Utilization U of the available fraction A = (C-R)/C of the link:
// (m*T + A - 1) / (m*A).
double UtilizationOfAvailable(double m, double t, double available);

// Available fraction at which U reaches 1: (m*T - 1)/(m - 1). This is both
// the minimum share that keeps SQP queue-free against inelastic traffic and
// SQP's maximum share against an ideal elastic competitor.
double ElasticShareBound(double m, double t);

// Per-flow estimate when `n` identical SQP flows share the link and each
// treats the others' aggregate as inelastic cross traffic: the symmetric
// solution of B = C*T - (n-1)*B/m, i.e. C*T*m/(m + n - 1).
BitsPerSecond SymmetricFlowEstimate(BitsPerSecond capacity, double t, double m,
                                    int n);
// Aggregate utilization predicted for n flows, capped at 1.
double PredictedTotalUtilization(double t, double m, int n);

// Jain's fairness index (sum x)^2 / (n * sum x^2). nullopt for empty or
// all-zero input.
std::optional<double> JainIndex(std::span<const double> rates);

}  // namespace sqpsim::analysis

#endif  // SQPSIM_ANALYSIS_STEADY_STATE_H_
