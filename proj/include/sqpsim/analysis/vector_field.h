#ifndef SQPSIM_ANALYSIS_VECTOR_FIELD_H_
#define SQPSIM_ANALYSIS_VECTOR_FIELD_H_

#include <iosfwd>
#include <string_view>
#include <vector>

#include "sqpsim/sim/units.h"

namespace sqpsim::analysis {

// Which flows' pacing bursts build a queue (m*B_i + B_other > C).
enum class BurstRegion { kNeither, kFirstOnly, kSecondOnly, kBoth };

std::string_view ToString(BurstRegion region);

struct FieldParams {
  BitsPerSecond capacity = 20e6;
  double m = 2.0;
  double t = 0.9;
  BitsPerSecond step_bps = 320e3;
  double reward_weight = 0.25;
  int grid = 40;
  // Grid spans (0, extent * C] on both axes.
  double extent = 1.2;
};

struct FieldPoint {
  int i = 0;  // grid index of B1, 0-based
  int j = 0;  // grid index of B2
  BitsPerSecond b1 = 0;
  BitsPerSecond b2 = 0;
  double raw_step1 = 0;  // S1*T - B1
  double raw_step2 = 0;
  double rule_step1 = 0;  // UpdateEstimate(B1, S1*T) - B1
  double rule_step2 = 0;
  BurstRegion region = BurstRegion::kNeither;
};

// Two-flow update steps, with each flow treating the other's average rate
// as inelastic cross traffic in the sample model. Row-major in (i, j).
std::vector<FieldPoint> UpdateStepField(const FieldParams& params);

// Grid cells (lower-left corner indices) where the zero contours of the two
// rule-step components cross, each contour traced by linear interpolation
// along the cell edges. Two contours that merely pass near each other in
// one cell are not an equilibrium.
struct GridCell {
  int i = 0;
  int j = 0;
};
std::vector<GridCell> RuleFieldEquilibria(const std::vector<FieldPoint>& field,
                                          int grid);

inline constexpr std::string_view kFieldCsvHeader =
    "B1_bps,B2_bps,raw_step1,raw_step2,rule_step1,rule_step2,region";
void WriteFieldCsv(std::ostream& out, const std::vector<FieldPoint>& field);

}  // namespace sqpsim::analysis

#endif  // SQPSIM_ANALYSIS_VECTOR_FIELD_H_
