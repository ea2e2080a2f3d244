#include "depbound/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "depbound/error.hpp"

namespace depbound {

namespace {
constexpr double kPivotEps = 1e-12;
}

CoveringLpResult solve_covering_lp(std::size_t k, const std::vector<std::uint64_t>& sets, double gap_tolerance) {
  require(k >= 1 && k <= 64, ErrorKind::DomainViolation, "covering LP needs 1 <= k <= 64 elements");
  std::uint64_t covered = 0;
  for (auto s : sets) covered |= s;
  const std::uint64_t all = k == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  require((covered & all) == all, ErrorKind::BlocksDoNotCover, "some element lies in no candidate set");

  const std::size_t m = sets.size();
  const std::size_t n = k + m;
  const std::size_t width = n + 1;  // last column is the right-hand side
  std::vector<double> tab(m * width, 0.0);
  std::vector<double> obj(width, 0.0);
  std::vector<std::size_t> basis(m);
  for (std::size_t j = 0; j < m; ++j) {
    double* row = &tab[j * width];
    for (std::size_t i = 0; i < k; ++i) row[i] = ((sets[j] >> i) & 1U) ? 1.0 : 0.0;
    row[k + j] = 1.0;
    row[n] = 1.0;
    basis[j] = k + j;
  }
  for (std::size_t i = 0; i < k; ++i) obj[i] = -1.0;

  CoveringLpResult res;
  const std::size_t max_iter = 50 * (n + m) + 1000;
  for (;;) {
    std::size_t enter = n;
    for (std::size_t c = 0; c < n; ++c) {
      if (obj[c] < -kPivotEps) {
        enter = c;
        break;
      }
    }
    if (enter == n) break;
    require(res.iterations < max_iter, ErrorKind::LpDidNotConverge, "simplex iteration limit reached");
    ++res.iterations;

    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double a = tab[r * width + enter];
      if (a <= kPivotEps) continue;
      const double ratio = tab[r * width + n] / a;
      if (leave == m || ratio < best_ratio - kPivotEps ||
          (ratio <= best_ratio + kPivotEps && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    require(leave != m, ErrorKind::LpDidNotConverge, "packing LP is unbounded");

    double* prow = &tab[leave * width];
    const double piv = prow[enter];
    for (std::size_t c = 0; c < width; ++c) prow[c] /= piv;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave) continue;
      double* row = &tab[r * width];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < width; ++c) row[c] -= f * prow[c];
    }
    const double f = obj[enter];
    for (std::size_t c = 0; c < width; ++c) obj[c] -= f * prow[c];
    basis[leave] = enter;
  }

  res.weights.resize(m);
  for (std::size_t j = 0; j < m; ++j) res.weights[j] = std::clamp(obj[k + j], 0.0, 1.0);
  res.packing.assign(k, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < k) res.packing[basis[r]] = tab[r * width + n];
  }
  res.dual_objective = 0.0;
  for (double y : res.packing) res.dual_objective += y;
  res.primal_objective = 0.0;
  for (double w : res.weights) res.primal_objective += w;

  for (std::size_t i = 0; i < k; ++i) {
    double cover = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if ((sets[j] >> i) & 1U) cover += res.weights[j];
    require(cover >= 1.0 - gap_tolerance, ErrorKind::LpDidNotConverge,
            "primal weights leave element " + std::to_string(i) + " under-covered");
  }
  require(std::abs(res.primal_objective - res.dual_objective) <= gap_tolerance, ErrorKind::LpDidNotConverge,
          "primal/dual gap exceeds tolerance");
  return res;
}

}  // namespace depbound
