#include "qoscap/asymptotics.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "qoscap/effcap.hpp"
#include "qoscap/errors.hpp"

namespace qoscap {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr double kDb3 = 3.0102999566398120;  // 10 log10 2
constexpr int kScanPoints = 10000;

// x pdf(x) - ccdf(x); the low-power stationarity defect.
double lowpower_defect(const FadingModel& model, double x) {
  return x * model.pdf(x) - model.ccdf(x);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  // Expects f(lo) < 0 <= f(hi).
  for (int i = 0; i < 200 && (hi - lo) > 1e-15 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g(points);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  return g;
}

}  // namespace

double lowpower_alpha_star(const FadingModel& model) {
  if (model.integer_shape()) {
    // The defect increases on (0, n/lambda] and stays positive beyond it,
    // so the root is bracketed by the mode of x pdf(x).
    double hi = model.mean() * (1.0 + 1e-9);
    double lo = hi * 1e-12;
    if (!(lowpower_defect(model, lo) < 0.0)) {
      throw SolverError("lowpower_alpha_star: no bracket at lower end");
    }
    while (!(lowpower_defect(model, hi) >= 0.0)) hi *= 1.0 + 1e-6;
    return bisect([&](double x) { return lowpower_defect(model, x); }, lo, hi);
  }

  // Non-integer shape: uniqueness is unproven, so scan for sign changes
  // first and refuse ambiguous cases.
  double x_hi = model.tail_quantile(1e-12);
  auto grid = log_grid(x_hi * 1e-10, x_hi, kScanPoints);
  int changes = 0;
  double lo = 0.0, hi = 0.0;
  double prev = lowpower_defect(model, grid[0]);
  for (int i = 1; i < kScanPoints; ++i) {
    double cur = lowpower_defect(model, grid[i]);
    if ((prev < 0.0) != (cur < 0.0)) {
      ++changes;
      lo = grid[i - 1];
      hi = grid[i];
    }
    prev = cur;
  }
  if (changes != 1) {
    std::ostringstream os;
    os << "lowpower_alpha_star: " << changes
       << " sign changes for non-integer shape " << model.shape()
       << " (uniqueness unproven)";
    throw SolverError(os.str());
  }
  double sign = lowpower_defect(model, lo) < 0.0 ? 1.0 : -1.0;
  return bisect(
      [&](double x) { return sign * lowpower_defect(model, x); }, lo, hi);
}

double wideband_alpha_star(double delta, const FadingModel& model) {
  if (!(delta >= 0.0)) throw std::invalid_argument("delta must be >= 0");
  if (delta == 0.0) return lowpower_alpha_star(model);

  // g(a) = delta a - ln(1 + delta ccdf(a)/pdf(a)); negative below the fixed
  // point, positive above it once the hazard ratio flattens.
  auto g = [&](double x) {
    return delta * x - std::log1p(delta * model.hazard_ratio(x));
  };
  double x_hi = model.tail_quantile(1e-12);
  auto grid = log_grid(x_hi * 1e-10, x_hi, 4096);
  double prev = g(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double cur = g(grid[i]);
    if (prev < 0.0 && cur >= 0.0) {
      return bisect(g, grid[i - 1], grid[i]);
    }
    prev = cur;
  }
  std::ostringstream os;
  os << "wideband_alpha_star: no sign change on (0, " << x_hi
     << "] for delta = " << delta;
  throw SolverError(os.str());
}

namespace {

double wideband_slope_at(double delta, double alpha, double p_on) {
  double xi = 1.0 + p_on * std::expm1(-delta * alpha);
  double log_xi = std::log(xi);
  double da = delta * alpha;
  return 2.0 * xi * log_xi * log_xi / (da * da * p_on * std::exp(-da));
}

}  // namespace

AsymptoticResult wideband_limits(double theta, double T, double pbar_over_n0,
                                 const FadingModel& model) {
  if (!(theta >= 0.0) || !(T > 0.0) || !(pbar_over_n0 > 0.0)) {
    throw std::invalid_argument("wideband_limits: invalid parameters");
  }
  double delta = theta * T * pbar_over_n0 / kLn2;
  double alpha = wideband_alpha_star(delta, model);
  double p_on = model.ccdf(alpha);

  AsymptoticResult res;
  res.regime = Regime::Wideband;
  res.alpha_star = alpha;
  res.qos_param = delta;
  res.is_minimum = true;
  if (delta > 0.0) {
    double xi = 1.0 + p_on * std::expm1(-delta * alpha);
    res.eb_n0_zero_db = 10.0 * std::log10(-delta * kLn2 / std::log(xi));
    res.wideband_slope = wideband_slope_at(delta, alpha, p_on);
  } else {
    // delta = 0: analytic intercept; the slope has no spelled-out closed
    // form, so it is taken as the numerical small-delta limit.
    res.eb_n0_zero_db = 10.0 * std::log10(kLn2 / (alpha * p_on));
    double d0 = 1e-6;
    double a0 = wideband_alpha_star(d0, model);
    res.wideband_slope = wideband_slope_at(d0, a0, model.ccdf(a0));
  }
  return res;
}

AsymptoticResult lowpower_limits(double theta, double T, double B,
                                 const FadingModel& model) {
  if (!(theta >= 0.0) || !(T > 0.0) || !(B > 0.0)) {
    throw std::invalid_argument("lowpower_limits: invalid parameters");
  }
  double alpha = lowpower_alpha_star(model);
  double p_on = model.ccdf(alpha);
  double beta = theta * T * B / kLn2;

  AsymptoticResult res;
  res.regime = Regime::LowPower;
  res.alpha_star = alpha;
  res.qos_param = beta;
  res.eb_n0_zero_db = 10.0 * std::log10(kLn2 / (alpha * p_on));
  res.wideband_slope = 2.0 * p_on / (1.0 + beta * (1.0 - p_on));
  res.is_minimum = (theta == 0.0) || model.integer_shape();
  return res;
}

double linear_approximation(double eb_db, const AsymptoticResult& result) {
  double rise = eb_db - result.eb_n0_zero_db;
  if (rise <= 0.0) return 0.0;
  return result.wideband_slope / kDb3 * rise;
}

double bit_energy_gap_db(double s0_a, double s0_b, double spectral_eff) {
  return (1.0 / s0_b - 1.0 / s0_a) * spectral_eff * kDb3;
}

RatioMonotonicityReport wideband_ratio_monotonicity_check(
    double theta, double T, double pbar_over_n0, const FadingModel& model,
    std::span<const double> zeta_grid) {
  for (std::size_t i = 1; i < zeta_grid.size(); ++i) {
    if (!(zeta_grid[i] > zeta_grid[i - 1])) {
      throw std::invalid_argument("zeta grid must be strictly increasing");
    }
  }
  RatioMonotonicityReport report;
  report.monotone = true;
  for (double zeta : zeta_grid) {
    if (!(zeta > 0.0)) {
      throw std::invalid_argument("zeta grid must be positive");
    }
    double B = 1.0 / zeta;
    double snr = pbar_over_n0 * zeta;
    double re;
    if (theta > 0.0) {
      re = optimize_rate({T, B, theta, snr}, model).spectral_efficiency;
    } else {
      re = effective_capacity_theta0(snr, B, model);
    }
    report.zeta.push_back(zeta);
    report.ratio.push_back(re / zeta);
  }
  for (std::size_t i = 1; i < report.ratio.size(); ++i) {
    if (report.ratio[i] > report.ratio[i - 1] * (1.0 + 1e-9)) {
      report.monotone = false;
    }
  }
  return report;
}

int uniqueness_scan(const FadingModel& model) {
  double x_hi = model.tail_quantile(1e-12);
  auto grid = log_grid(x_hi * 1e-10, x_hi, kScanPoints);
  int changes = 0;
  bool prev_neg = lowpower_defect(model, grid[0]) < 0.0;
  for (int i = 1; i < kScanPoints; ++i) {
    bool neg = lowpower_defect(model, grid[i]) < 0.0;
    if (neg != prev_neg) ++changes;
    prev_neg = neg;
  }
  return changes;
}

}  // namespace qoscap
