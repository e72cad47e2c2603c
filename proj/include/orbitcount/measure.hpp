#pragma once

// Thurston-measure unit-ball volumes by lattice counting: the number of
// integral multicurves in the sublevel set {F <= L} scaled by L^(6g+2n-6),
// with convergence series and the boundary-mass diagnostic.

#include <tuple>

#include "orbitcount/functional.hpp"

namespace orbitcount {

struct MeasureEstimate {
  double value = 0;     // count / L^dim
  double L_used = 0;
  long long count = 0;
  long long box_bound = 0;
  std::vector<std::tuple<double, long long, double>> convergence;  // (L, count, estimate)
};

struct MeasureOptions {
  long long min_count = 100;    // precondition floor on the final count
  int series_points = 8;
  int max_box_retries = 6;
  double initial_inflation = 2.0;
};

namespace detail {

inline long long coordinate_max_norm(const DTCoordinates& c) {
  long long n = 0;
  for (auto& [m, t] : c.mt) n = std::max({n, m, std::llabs(t)});
  return n;
}

// lattice values of F over the box max-norm <= N, indexed per point
inline void sweep_box(const HomogeneousFunctional& F, long long N,
                      const std::function<void(const DTCoordinates&, double)>& visit) {
  enumerate_multicurves(F.presentation().signature(), N,
                        [&](const DTCoordinates& c) { visit(c, evaluate_functional(F, c)); });
}

// box bound from sampled comparability constants, then certified by checking
// that no point on the boundary shell satisfies the constraint
inline long long certified_box_bound(const HomogeneousFunctional& F, double L, const MeasureOptions& opt) {
  double cmin = std::numeric_limits<double>::infinity();
  enumerate_multicurves(F.presentation().signature(), 2, [&](const DTCoordinates& c) {
    cmin = std::min(cmin, evaluate_functional(F, c) / static_cast<double>(detail::coordinate_max_norm(c)));
  });
  if (!(cmin > 0)) throw positivity_error("sampled comparability constant is not positive");
  long long N = std::max<long long>(2, static_cast<long long>(std::ceil(opt.initial_inflation * L / cmin)));
  for (int retry = 0; retry < opt.max_box_retries; ++retry) {
    bool shell_hit = false;
    enumerate_multicurves(F.presentation().signature(), N, [&](const DTCoordinates& c) {
      if (shell_hit || detail::coordinate_max_norm(c) != N) return;
      if (evaluate_functional(F, c) <= L * 1.0001) shell_hit = true;
    });
    if (!shell_hit) return N;
    N *= 2;
  }
  throw box_saturation_error("sublevel set keeps touching the enumeration box; bound " +
                             std::to_string(N));
}

}  // namespace detail

inline MeasureEstimate estimate_m(const HomogeneousFunctional& F, double L, MeasureOptions opt = {}) {
  if (!(L > 0)) throw precondition_error("estimate_m needs a positive budget");
  const int dim = F.presentation().signature().dimension();
  MeasureEstimate est;
  est.L_used = L;
  est.box_bound = detail::certified_box_bound(F, L, opt);

  std::vector<double> values;
  detail::sweep_box(F, est.box_bound, [&](const DTCoordinates&, double v) {
    if (v <= L) values.push_back(v);
  });
  est.count = static_cast<long long>(values.size());
  est.value = static_cast<double>(est.count) / std::pow(L, dim);
  if (est.count < opt.min_count)
    throw precondition_error("sublevel count " + std::to_string(est.count) +
                             " is below the configured floor; increase L");

  std::sort(values.begin(), values.end());
  for (int j = 1; j <= opt.series_points; ++j) {
    double Lj = L * static_cast<double>(j) / opt.series_points;
    auto it = std::upper_bound(values.begin(), values.end(), Lj);
    long long cj = static_cast<long long>(it - values.begin());
    est.convergence.emplace_back(Lj, cj, static_cast<double>(cj) / std::pow(Lj, dim));
  }
  return est;
}

// Fraction of counted points with F within eps*L of the threshold; the
// Thurston measure of the level set itself is zero, so this decreases with
// eps once counts are large.
inline double sublevel_boundary_mass(const HomogeneousFunctional& F, double L, double eps,
                                     MeasureOptions opt = {}) {
  if (!(eps > 0) || eps > 1) throw precondition_error("boundary mass needs eps in (0, 1]");
  opt.min_count = 1;
  long long box = detail::certified_box_bound(F, L, opt);
  long long inside = 0, near = 0;
  detail::sweep_box(F, box, [&](const DTCoordinates&, double v) {
    if (v <= L) {
      ++inside;
      if (v >= (1.0 - eps) * L) ++near;
    }
  });
  if (inside == 0) throw precondition_error("empty sublevel set");
  return static_cast<double>(near) / static_cast<double>(inside);
}

}  // namespace orbitcount
