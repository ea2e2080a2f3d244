#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace depbound {

struct BoundTerm {
  std::string name;
  double value = 0.0;
};

/// Evaluated tail bound. `value` is always the plain sum of `terms`, in order.
struct BoundResult {
  std::string kind;
  double value = 0.0;
  double clipped = 0.0;  // min(value, 1)
  std::vector<BoundTerm> terms;
  std::vector<std::pair<std::string, double>> params;
  /// Side quantities that are not part of the sum.
  std::vector<std::pair<std::string, double>> extras;
  /// Set when the bound holds only under an unproven hypothesis.
  bool conditional = false;
  std::string note;

  double term(const std::string& name) const;
  double param(const std::string& name) const;
  double extra(const std::string& name) const;
};

/// Per-variable ranges a_i <= X_i <= b_i.
struct RangeSpec {
  std::vector<std::pair<double, double>> bounds;

  static RangeSpec unit(std::size_t n);
  double sum_sq() const;
  double max_range() const;
};

BoundResult hoeffding_bound(std::size_t n, double t);

/// exp(-2 n^2 t^2 / (chi sum_sq)). An empty RangeSpec means unit ranges.
BoundResult janson_bound(std::size_t n, double t, double chi, const RangeSpec& ranges = {});

/// exp(-2 n^2 (t - lambda)^2 / (chi sum_sq)) + 18 n gamma sqrt(r / lambda).
/// Extras: "headline_exp_term" = exp(-n t^2 / (8 chi)), the form quoted for
/// lambda = t/2 and unit ranges, and "at_half_lambda" (1 when lambda = t/2).
BoundResult soft_cover_bound(std::size_t n, double t, double lambda, double gamma, double chi_gamma,
                             const RangeSpec& ranges = {});

enum class FractionalForm { Tight, Loose };

BoundResult fractional_soft_cover_bound(std::size_t n, double t, double lambda, double gamma, double chi_star,
                                        FractionalForm form, const RangeSpec& ranges = {});

/// Lower bound on the upper tail P(sum - n/2 >= t) of the n-bit model:
/// exp(-16 t^2 / n) / 15 + 4 n alpha binom(n-1, n/2+t-1) / 2^n.
BoundResult lower_bound_tail(std::size_t n, std::size_t t, double alpha_sep);

/// Variables in [0, 1]: 2 exp(-n (t-lambda)^2 / (8 chi)) + 36 n gamma / sqrt(lambda).
BoundResult variance_bound(std::size_t n, double t, double lambda, double gamma, double chi_gamma);

/// range * (18 p alpha / (p - 1/2))^(1/p). p may be +infinity.
double lp_distance_bound(double p, double alpha_sep, double range);

/// exp(-n t^2 / (2 chi B^2)) + 18 gamma n sqrt(2 L range / t).
BoundResult lipschitz_sup_bound(std::size_t n, double t, double gamma, double chi_gamma, double B, double L,
                                double range);

/// exp(-mu t^2 / 2) + 18 sqrt(2) n alpha_nu / sqrt(t), for n = mu nu.
BoundResult mixing_bound(std::size_t n, std::size_t mu, std::size_t nu, double t, double alpha_nu);

/// 4 exp(-mu t^2 / 8) + 22 mu alpha_nu sqrt(1 + 4/t), with nu = floor(n / (2 mu)).
BoundResult bosq_bound(std::size_t n, std::size_t mu, std::size_t nu, double t, double alpha_nu);

/// exp(-2 t^2 n / chi) + poly_value exp(-lambda_decay nu).
BoundResult lattice_bound(std::size_t n, double t, double chi, double poly_value, double lambda_decay, double nu);

/// exp(-2 t^2 n / chi_d) + C n (c p)^d. Holds only if the cascade decay
/// conjecture holds with constants (C, c); the result is marked conditional.
BoundResult cascade_bound(std::size_t n, double t, double chi_d, double C, double c, double p, double d);

struct LambdaOptimum {
  double lambda_star = 0.0;
  BoundResult best;
  BoundResult at_half;  // lambda = t/2
};

/// Minimizes evaluator(lambda).value over lambda in (0, t): a uniform scan of
/// `grid_points` interior points, then golden-section search on the bracket
/// around the best grid point, to relative tolerance 1e-6.
LambdaOptimum optimize_lambda(const std::function<BoundResult(double)>& evaluator, double t,
                              std::size_t grid_points = 64);

/// binom(n, k); exact integer arithmetic for n <= 60, log-gamma otherwise.
double binomial(std::size_t n, std::size_t k);

/// sum_{j >= k} binom(n, j) / 2^n.
double binomial_upper_tail(std::size_t n, std::size_t k);

}  // namespace depbound
