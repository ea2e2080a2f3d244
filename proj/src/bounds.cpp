#include "depbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "depbound/error.hpp"

namespace depbound {

namespace {

constexpr std::size_t kExactBinomialMax = 60;

std::uint64_t binomial_exact(std::size_t n, std::size_t k) {
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * (n - k + i) / i;  // exact at every step, no overflow for n <= 60
  return c;
}

double lookup(const std::vector<std::pair<std::string, double>>& list, const std::string& name) {
  for (const auto& [k, v] : list)
    if (k == name) return v;
  throw Error(ErrorKind::DomainViolation, "no entry named " + name);
}

BoundResult make(std::string kind, std::vector<BoundTerm> terms, std::vector<std::pair<std::string, double>> params) {
  BoundResult r;
  r.kind = std::move(kind);
  r.terms = std::move(terms);
  r.params = std::move(params);
  double v = 0.0;
  for (const auto& t : r.terms) v += t.value;
  r.value = v;
  r.clipped = std::min(v, 1.0);
  return r;
}

const RangeSpec& resolve(const RangeSpec& ranges, std::size_t n, RangeSpec& storage) {
  if (ranges.bounds.empty()) {
    storage = RangeSpec::unit(n);
    return storage;
  }
  require(ranges.bounds.size() == n, ErrorKind::DomainViolation, "range list must have one entry per variable");
  return ranges;
}

void check_n(std::size_t n) { require(n >= 1, ErrorKind::DomainViolation, "n must be at least 1"); }

void check_lambda(double t, double lambda) {
  require(t > 0.0, ErrorKind::NonpositiveT, "t must be positive");
  require(lambda > 0.0 && lambda < t, ErrorKind::LambdaOutOfRange, "lambda must lie in (0, t)");
}

void check_chi(double chi) { require(chi >= 1.0, ErrorKind::InvalidChi, "cover number must be at least 1"); }

// gamma * n * sqrt(x / y) with the convention 0 * inf = 0.
double dependence(double coef, double x, double y) {
  if (coef == 0.0) return 0.0;
  if (y == 0.0) return std::numeric_limits<double>::infinity();
  return coef * std::sqrt(x / y);
}

}  // namespace

double BoundResult::term(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t.value;
  throw Error(ErrorKind::DomainViolation, "no term named " + name);
}
double BoundResult::param(const std::string& name) const { return lookup(params, name); }
double BoundResult::extra(const std::string& name) const { return lookup(extras, name); }

RangeSpec RangeSpec::unit(std::size_t n) { return {std::vector<std::pair<double, double>>(n, {0.0, 1.0})}; }

double RangeSpec::sum_sq() const {
  double s = 0.0;
  for (const auto& [a, b] : bounds) {
    require(b >= a, ErrorKind::DomainViolation, "range with b < a");
    s += (b - a) * (b - a);
  }
  return s;
}

double RangeSpec::max_range() const {
  double r = 0.0;
  for (const auto& [a, b] : bounds) r = std::max(r, b - a);
  return r;
}

// ---------------------------------------------------------------------------

BoundResult hoeffding_bound(std::size_t n, double t) {
  check_n(n);
  require(t > 0.0, ErrorKind::NonpositiveT, "t must be positive");
  const double nd = static_cast<double>(n);
  return make("hoeffding", {{"exp_term", std::exp(-2.0 * nd * t * t)}}, {{"n", nd}, {"t", t}});
}

BoundResult janson_bound(std::size_t n, double t, double chi, const RangeSpec& ranges) {
  check_n(n);
  require(t > 0.0, ErrorKind::NonpositiveT, "t must be positive");
  check_chi(chi);
  RangeSpec tmp;
  const double ss = resolve(ranges, n, tmp).sum_sq();
  const double nd = static_cast<double>(n);
  return make("janson", {{"exp_term", std::exp(-2.0 * nd * nd * t * t / (chi * ss))}},
              {{"n", nd}, {"t", t}, {"chi", chi}, {"sum_sq", ss}});
}

BoundResult soft_cover_bound(std::size_t n, double t, double lambda, double gamma, double chi_gamma,
                             const RangeSpec& ranges) {
  check_n(n);
  check_lambda(t, lambda);
  check_chi(chi_gamma);
  require(gamma >= 0.0, ErrorKind::DomainViolation, "gamma must be non-negative");
  RangeSpec tmp;
  const auto& rs = resolve(ranges, n, tmp);
  const double ss = rs.sum_sq(), r = rs.max_range();
  const double nd = static_cast<double>(n);
  const double s = t - lambda;
  auto res = make("soft",
                  {{"exp_term", std::exp(-2.0 * nd * nd * s * s / (chi_gamma * ss))},
                   {"dependence_term", dependence(18.0 * nd * gamma, r, lambda)}},
                  {{"n", nd}, {"t", t}, {"lambda", lambda}, {"gamma", gamma}, {"chi_gamma", chi_gamma},
                   {"sum_sq", ss}, {"r", r}});
  const bool half = std::abs(lambda - t / 2.0) <= 1e-12 * t;
  res.extras = {{"headline_exp_term", std::exp(-nd * t * t / (8.0 * chi_gamma))},
                {"at_half_lambda", half ? 1.0 : 0.0}};
  return res;
}

BoundResult fractional_soft_cover_bound(std::size_t n, double t, double lambda, double gamma, double chi_star,
                                        FractionalForm form, const RangeSpec& ranges) {
  check_n(n);
  check_lambda(t, lambda);
  check_chi(chi_star);
  require(gamma >= 0.0, ErrorKind::DomainViolation, "gamma must be non-negative");
  RangeSpec tmp;
  const auto& rs = resolve(ranges, n, tmp);
  const double ss = rs.sum_sq(), r = rs.max_range();
  const double nd = static_cast<double>(n);
  const double q = nd * nd * (t - lambda) * (t - lambda) / (2.0 * ss);
  const double first = std::exp(-q / chi_star);
  const double dep = dependence(18.0 * nd * gamma, r, lambda);
  std::vector<BoundTerm> terms;
  if (form == FractionalForm::Tight) {
    terms = {{"exp_term", first}, {"second_exp_term", std::exp(-q)}, {"dependence_term", dep}};
  } else {
    terms = {{"exp_term", 2.0 * first}, {"dependence_term", dep}};
  }
  return make(form == FractionalForm::Tight ? "fractional_tight" : "fractional_loose", std::move(terms),
              {{"n", nd}, {"t", t}, {"lambda", lambda}, {"gamma", gamma}, {"chi_star", chi_star},
               {"sum_sq", ss}, {"r", r}});
}

BoundResult lower_bound_tail(std::size_t n, std::size_t t, double alpha_sep) {
  require(n >= 2 && n % 2 == 0, ErrorKind::DomainViolation, "n must be even and positive");
  require(8 * t <= n, ErrorKind::DomainViolation, "t must lie in [0, n/8]");
  const double nd = static_cast<double>(n), td = static_cast<double>(t);
  require(alpha_sep >= 0.0 && alpha_sep <= 1.0 / (4.0 * nd) + 1e-15, ErrorKind::DomainViolation,
          "alpha must lie in [0, 1/(4n)]");
  const double mass = binomial(n - 1, n / 2 + t - 1) * std::ldexp(1.0, -static_cast<int>(n));
  return make("lower",
              {{"exp_term", std::exp(-16.0 * td * td / nd) / 15.0}, {"dependence_term", 4.0 * nd * alpha_sep * mass}},
              {{"n", nd}, {"t", td}, {"alpha_sep", alpha_sep}});
}

BoundResult variance_bound(std::size_t n, double t, double lambda, double gamma, double chi_gamma) {
  check_n(n);
  check_lambda(t, lambda);
  check_chi(chi_gamma);
  const double nd = static_cast<double>(n);
  const double s = t - lambda;
  return make("variance",
              {{"exp_term", 2.0 * std::exp(-nd * s * s / (8.0 * chi_gamma))},
               {"dependence_term", dependence(36.0 * nd * gamma, 1.0, lambda)}},
              {{"n", nd}, {"t", t}, {"lambda", lambda}, {"gamma", gamma}, {"chi_gamma", chi_gamma}});
}

double lp_distance_bound(double p, double alpha_sep, double range) {
  require(p >= 1.0, ErrorKind::InvalidP, "p must be at least 1");
  require(range >= 0.0 && alpha_sep >= 0.0, ErrorKind::DomainViolation, "range and alpha must be non-negative");
  if (alpha_sep == 0.0) return 0.0;
  if (std::isinf(p)) return range;
  return range * std::pow(18.0 * p * alpha_sep / (p - 0.5), 1.0 / p);
}

BoundResult lipschitz_sup_bound(std::size_t n, double t, double gamma, double chi_gamma, double B, double L,
                                double range) {
  check_n(n);
  require(B > 0.0 && L > 0.0, ErrorKind::DomainViolation, "B and L must be positive");
  require(t >= 0.0 && t <= B, ErrorKind::DomainViolation, "t must lie in [0, B]");
  require(range >= 0.0 && gamma >= 0.0, ErrorKind::DomainViolation, "range and gamma must be non-negative");
  check_chi(chi_gamma);
  const double nd = static_cast<double>(n);
  return make("lipschitz",
              {{"exp_term", std::exp(-nd * t * t / (2.0 * chi_gamma * B * B))},
               {"dependence_term", dependence(18.0 * gamma * nd, 2.0 * L * range, t)}},
              {{"n", nd}, {"t", t}, {"gamma", gamma}, {"chi_gamma", chi_gamma}, {"B", B}, {"L", L}, {"range", range}});
}

BoundResult mixing_bound(std::size_t n, std::size_t mu, std::size_t nu, double t, double alpha_nu) {
  require(mu >= 1 && nu >= 1 && n == mu * nu, ErrorKind::BlockMismatch, "n must equal mu * nu");
  require(t >= 0.0 && t <= 1.0, ErrorKind::DomainViolation, "t must lie in [0, 1]");
  require(alpha_nu >= 0.0, ErrorKind::DomainViolation, "alpha must be non-negative");
  const double nd = static_cast<double>(n), md = static_cast<double>(mu);
  return make("mixing",
              {{"exp_term", std::exp(-md * t * t / 2.0)},
               {"dependence_term", dependence(18.0 * std::numbers::sqrt2 * nd * alpha_nu, 1.0, t)}},
              {{"n", nd}, {"mu", md}, {"nu", static_cast<double>(nu)}, {"t", t}, {"alpha_nu", alpha_nu}});
}

BoundResult bosq_bound(std::size_t n, std::size_t mu, std::size_t nu, double t, double alpha_nu) {
  require(mu >= 1 && 2 * mu <= n, ErrorKind::DomainViolation, "mu must lie in [1, n/2]");
  require(nu == n / (2 * mu), ErrorKind::DomainViolation, "nu must equal floor(n / (2 mu))");
  require(t > 0.0, ErrorKind::NonpositiveT, "t must be positive");
  require(alpha_nu >= 0.0, ErrorKind::DomainViolation, "alpha must be non-negative");
  const double md = static_cast<double>(mu);
  return make("bosq",
              {{"exp_term", 4.0 * std::exp(-md * t * t / 8.0)},
               {"dependence_term", 22.0 * md * alpha_nu * std::sqrt(1.0 + 4.0 / t)}},
              {{"n", static_cast<double>(n)}, {"mu", md}, {"nu", static_cast<double>(nu)}, {"t", t},
               {"alpha_nu", alpha_nu}});
}

BoundResult lattice_bound(std::size_t n, double t, double chi, double poly_value, double lambda_decay, double nu) {
  check_n(n);
  check_chi(chi);
  require(poly_value >= 0.0, ErrorKind::DomainViolation, "polynomial value must be non-negative");
  const double nd = static_cast<double>(n);
  return make("lattice",
              {{"exp_term", std::exp(-2.0 * t * t * nd / chi)},
               {"dependence_term", poly_value == 0.0 ? 0.0 : poly_value * std::exp(-lambda_decay * nu)}},
              {{"n", nd}, {"t", t}, {"chi", chi}, {"poly_value", poly_value}, {"lambda_decay", lambda_decay},
               {"nu", nu}});
}

BoundResult cascade_bound(std::size_t n, double t, double chi_d, double C, double c, double p, double d) {
  check_n(n);
  check_chi(chi_d);
  require(p >= 0.0 && C >= 0.0 && c >= 0.0, ErrorKind::DomainViolation, "p, C and c must be non-negative");
  const double nd = static_cast<double>(n);
  auto r = make("cascade",
                {{"exp_term", std::exp(-2.0 * t * t * nd / chi_d)},
                 {"dependence_term", C == 0.0 || p == 0.0 ? 0.0 : C * nd * std::pow(c * p, d)}},
                {{"n", nd}, {"t", t}, {"chi_d", chi_d}, {"C", C}, {"c", c}, {"p", p}, {"d", d}});
  r.conditional = true;
  r.note = "valid only if alpha_seq(I) <= C (c p)^d(I) holds for the cascade graph";
  return r;
}

// ---------------------------------------------------------------------------

LambdaOptimum optimize_lambda(const std::function<BoundResult(double)>& evaluator, double t,
                              std::size_t grid_points) {
  require(t > 0.0, ErrorKind::NonpositiveT, "t must be positive");
  require(grid_points >= 3, ErrorKind::DomainViolation, "need at least 3 grid points");
  const double step = t / static_cast<double>(grid_points + 1);
  std::size_t best_i = 1;
  double best_v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= grid_points; ++i) {
    const double v = evaluator(step * static_cast<double>(i)).value;
    if (v < best_v) {
      best_v = v;
      best_i = i;
    }
  }
  double lo = step * static_cast<double>(best_i - 1);
  double hi = step * static_cast<double>(best_i + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = evaluator(x1).value, f2 = evaluator(x2).value;
  while (hi - lo > 1e-6 * std::max(std::abs(x1), step * 1e-6)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = evaluator(x1).value;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = evaluator(x2).value;
    }
  }

  LambdaOptimum out;
  out.at_half = evaluator(t / 2.0);
  // the refined point must not lose to the grid or to t/2
  std::vector<std::pair<double, double>> cands{{f1 <= f2 ? x1 : x2, std::min(f1, f2)},
                                               {step * static_cast<double>(best_i), best_v},
                                               {t / 2.0, out.at_half.value}};
  auto best = std::min_element(cands.begin(), cands.end(),
                               [](const auto& a, const auto& b) { return a.second < b.second; });
  out.lambda_star = best->first;
  out.best = evaluator(out.lambda_star);
  return out;
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (n <= kExactBinomialMax) return static_cast<double>(binomial_exact(n, k));
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0));
}

double binomial_upper_tail(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  if (n <= kExactBinomialMax) {
    std::uint64_t sum = 0;
    for (std::size_t j = k; j <= n; ++j) sum += binomial_exact(n, j);
    return std::ldexp(static_cast<double>(sum), -static_cast<int>(n));
  }
  const double nd = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = k; j <= n; ++j) {
    const double jd = static_cast<double>(j);
    sum += std::exp(std::lgamma(nd + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(nd - jd + 1.0) - nd * std::numbers::ln2);
  }
  return sum;
}

}  // namespace depbound
