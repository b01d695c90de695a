#include "qoscap/training.hpp"

#include <cmath>
#include <functional>

#include "qoscap/errors.hpp"

namespace qoscap {

namespace {

// Absolute tolerance on the log-snr search interval.
constexpr double kGoldenRelTol = 1e-8;

double golden_minimize(const std::function<double(double)>& f, double a,
                       double b) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while ((b - a) > kGoldenRelTol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

void TrainingParams::validate() const {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("T must be > 0");
  if (!(B > 0.0)) throw std::invalid_argument("B must be > 0");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be > 0");
  if (!(T * B > 2.0)) {
    throw std::invalid_argument("TB must exceed 2 for pilot transmission");
  }
}

double optimal_training_fraction(double snr, double gamma, double T,
                                 double B) {
  double tb = T * B;
  if (!(tb > 2.0)) {
    throw std::invalid_argument("TB must exceed 2 for pilot transmission");
  }
  if (!(snr > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("snr and gamma must be > 0");
  }
  double eta = (gamma * tb * snr + tb - 1.0) / (gamma * tb * (tb - 2.0) * snr);
  // sqrt(eta (eta + 1)) - eta rewritten so huge eta does not cancel.
  return eta * std::expm1(0.5 * std::log1p(1.0 / eta));
}

double effective_snr(double rho, double snr, double gamma, double T,
                     double B) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("rho must lie in [0, 1]");
  }
  double tb = T * B;
  double num = rho * (1.0 - rho) * gamma * gamma * tb * tb * snr * snr;
  double den = rho * gamma * tb * (tb - 2.0) * snr + gamma * tb * snr + tb - 1.0;
  return num / den;
}

TrainingPoint optimize_rate_training(const TrainingParams& params) {
  params.validate();
  double rho = optimal_training_fraction(params.snr, params.gamma, params.T,
                                         params.B);
  double snr_eff =
      effective_snr(rho, params.snr, params.gamma, params.T, params.B);

  // |w|^2 is unit-mean exponential; the rate exponent carries T/(TB - 1).
  FadingModel w2 = FadingModel::rayleigh(1.0);
  double scale = params.T / (params.T * params.B - 1.0);

  EffCapPoint pt;
  if (params.theta > 0.0) {
    detail::RateChannel ch{w2,       snr_eff,  scale,
                           params.theta, params.T, params.B};
    pt = detail::optimize_fixed_rate(ch);
  } else {
    pt = detail::optimize_fixed_rate_theta0(w2, snr_eff, scale, params.B);
  }

  TrainingPoint out;
  out.rho_opt = rho;
  out.snr_eff = snr_eff;
  out.r_opt = pt.r_opt;
  out.alpha_opt = pt.alpha_opt;
  out.spectral_efficiency = pt.spectral_efficiency;
  out.bit_energy_db = bit_energy_db(params.snr, pt.spectral_efficiency);
  return out;
}

MinBitEnergyScan min_bit_energy_scan(double theta, double T, double B,
                                     double gamma,
                                     std::span<const double> snr_grid) {
  if (snr_grid.size() < 3) {
    throw std::invalid_argument("snr grid needs at least 3 points");
  }
  for (std::size_t i = 1; i < snr_grid.size(); ++i) {
    if (!(snr_grid[i] < snr_grid[i - 1])) {
      throw std::invalid_argument("snr grid must be strictly decreasing");
    }
  }
  if (!(snr_grid.front() / snr_grid.back() >= 1e3)) {
    throw std::invalid_argument("snr grid must span at least 3 decades");
  }

  auto eb_at = [&](double snr) {
    TrainingParams p{gamma, T, B, theta, snr};
    return optimize_rate_training(p).bit_energy_db;
  };

  MinBitEnergyScan scan;
  std::size_t best = 0;
  for (std::size_t i = 0; i < snr_grid.size(); ++i) {
    scan.snr.push_back(snr_grid[i]);
    scan.eb_db.push_back(eb_at(snr_grid[i]));
    if (scan.eb_db[i] < scan.eb_db[best]) best = i;
  }
  scan.boundary_warning = (best == 0 || best + 1 == snr_grid.size());
  if (scan.boundary_warning) {
    scan.snr_star = snr_grid[best];
    scan.eb_min_db = scan.eb_db[best];
    return scan;
  }

  // Refine in log-snr between the neighbors of the grid minimizer.
  double lo = std::log(snr_grid[best + 1]);
  double hi = std::log(snr_grid[best - 1]);
  double log_star =
      golden_minimize([&](double ls) { return eb_at(std::exp(ls)); }, lo, hi);
  scan.snr_star = std::exp(log_star);
  scan.eb_min_db = eb_at(scan.snr_star);
  return scan;
}

double lowpower_snr_eff_coefficient(double gamma, double T, double B) {
  double tb = T * B;
  if (!(tb > 1.0)) throw std::invalid_argument("TB must exceed 1");
  return gamma * gamma * tb * tb / (4.0 * (tb - 1.0));
}

}  // namespace qoscap
