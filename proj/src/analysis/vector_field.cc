#include "sqpsim/analysis/vector_field.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <ostream>

#include "sqpsim/analysis/steady_state.h"
#include "sqpsim/sim/check.h"
#include "sqpsim/sim/text.h"
#include "sqpsim/sqp/estimator.h"

namespace sqpsim::analysis {

std::string_view ToString(BurstRegion region) {
  switch (region) {
    case BurstRegion::kNeither:
      return "neither";
    case BurstRegion::kFirstOnly:
      return "first";
    case BurstRegion::kSecondOnly:
      return "second";
    case BurstRegion::kBoth:
      return "both";
  }
  return "?";
}

std::vector<FieldPoint> UpdateStepField(const FieldParams& p) {
  SQPSIM_CHECK(p.grid >= 2 && p.capacity > 0 && p.m > 1 && p.extent > 0,
               "bad field parameters");
  const double cell = p.extent * p.capacity / p.grid;
  std::vector<FieldPoint> field;
  field.reserve(static_cast<size_t>(p.grid) * p.grid);
  for (int i = 0; i < p.grid; ++i) {
    for (int j = 0; j < p.grid; ++j) {
      FieldPoint pt;
      pt.i = i;
      pt.j = j;
      pt.b1 = cell * (i + 1);
      pt.b2 = cell * (j + 1);
      const double s1 = PredictedSample(p.capacity, pt.b2, p.m, pt.b1);
      const double s2 = PredictedSample(p.capacity, pt.b1, p.m, pt.b2);
      pt.raw_step1 = s1 * p.t - pt.b1;
      pt.raw_step2 = s2 * p.t - pt.b2;
      pt.rule_step1 = sqp::UpdateEstimate(pt.b1, s1 * p.t, p.step_bps,
                                          p.reward_weight, 0.0) -
                      pt.b1;
      pt.rule_step2 = sqp::UpdateEstimate(pt.b2, s2 * p.t, p.step_bps,
                                          p.reward_weight, 0.0) -
                      pt.b2;
      const bool q1 = p.m * pt.b1 + pt.b2 > p.capacity;
      const bool q2 = p.m * pt.b2 + pt.b1 > p.capacity;
      pt.region = q1 && q2 ? BurstRegion::kBoth
                  : q1     ? BurstRegion::kFirstOnly
                  : q2     ? BurstRegion::kSecondOnly
                           : BurstRegion::kNeither;
      field.push_back(pt);
    }
  }
  return field;
}

namespace {

struct Pt {
  double x = 0;
  double y = 0;
};

// Steps this close to zero (in bit/s) count as zero, so a nullcline that
// passes exactly through a grid point is not split by rounding noise.
constexpr double kZeroStep = 1e-3;

double Cross(Pt o, Pt a, Pt b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double PointSegmentDistance(Pt p, Pt a, Pt b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double u = 0;
  if (len2 > 0) u = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  return std::hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

bool SegmentsMeet(Pt a, Pt b, Pt c, Pt d) {
  constexpr double kEps = 1e-9;
  const double d1 = Cross(c, d, a);
  const double d2 = Cross(c, d, b);
  const double d3 = Cross(a, b, c);
  const double d4 = Cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  return std::min({PointSegmentDistance(a, c, d), PointSegmentDistance(b, c, d),
                   PointSegmentDistance(c, a, b),
                   PointSegmentDistance(d, a, b)}) <= kEps;
}

// Where a component's zero contour crosses the unit cell boundary, by
// linear interpolation along each edge. Corners are in boundary order.
std::vector<Pt> ZeroCrossings(const double (&v)[4]) {
  static constexpr Pt kCorner[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<Pt> out;
  for (int k = 0; k < 4; ++k) {
    const double a = std::abs(v[k]) <= kZeroStep ? 0.0 : v[k];
    const double b = std::abs(v[(k + 1) % 4]) <= kZeroStep ? 0.0 : v[(k + 1) % 4];
    const Pt p = kCorner[k];
    const Pt q = kCorner[(k + 1) % 4];
    if (a == 0) {
      out.push_back(p);
    } else if ((a < 0 && b > 0) || (a > 0 && b < 0)) {
      const double u = a / (a - b);
      out.push_back({p.x + u * (q.x - p.x), p.y + u * (q.y - p.y)});
    }
  }
  return out;
}

// Pairs boundary crossings into contour pieces; a lone crossing is a
// contour that only touches the cell.
std::vector<std::pair<Pt, Pt>> Pieces(const std::vector<Pt>& pts) {
  std::vector<std::pair<Pt, Pt>> out;
  if (pts.size() == 1) out.push_back({pts[0], pts[0]});
  for (size_t k = 0; k + 1 < pts.size(); k += 2) out.push_back({pts[k], pts[k + 1]});
  if (pts.size() == 3) out.push_back({pts[1], pts[2]});
  return out;
}

}  // namespace

std::vector<GridCell> RuleFieldEquilibria(const std::vector<FieldPoint>& field,
                                          int grid) {
  SQPSIM_CHECK(field.size() == static_cast<size_t>(grid) * grid,
               "field does not match grid");
  auto at = [&](int i, int j) -> const FieldPoint& {
    return field[static_cast<size_t>(i) * grid + j];
  };
  std::vector<GridCell> cells;
  for (int i = 0; i + 1 < grid; ++i) {
    for (int j = 0; j + 1 < grid; ++j) {
      const FieldPoint* corner[4] = {&at(i, j), &at(i + 1, j),
                                     &at(i + 1, j + 1), &at(i, j + 1)};
      double v1[4];
      double v2[4];
      for (int k = 0; k < 4; ++k) {
        v1[k] = corner[k]->rule_step1;
        v2[k] = corner[k]->rule_step2;
      }
      bool meet = false;
      for (const auto& [a, b] : Pieces(ZeroCrossings(v1))) {
        for (const auto& [c, d] : Pieces(ZeroCrossings(v2))) {
          meet = meet || SegmentsMeet(a, b, c, d);
        }
      }
      if (meet) cells.push_back({i, j});
    }
  }
  return cells;
}

void WriteFieldCsv(std::ostream& out, const std::vector<FieldPoint>& field) {
  out << kFieldCsvHeader << '\n';
  for (const auto& pt : field) {
    out << text::FormatDouble(pt.b1) << ',' << text::FormatDouble(pt.b2) << ','
        << text::FormatDouble(pt.raw_step1) << ','
        << text::FormatDouble(pt.raw_step2) << ','
        << text::FormatDouble(pt.rule_step1) << ','
        << text::FormatDouble(pt.rule_step2) << ',' << ToString(pt.region)
        << '\n';
  }
}

}  // namespace sqpsim::analysis
