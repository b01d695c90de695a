#include "qoscap/effcap.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "qoscap/errors.hpp"

namespace qoscap {

namespace {

constexpr double kLn2 = 0.6931471805599453;
constexpr int kGridPoints = 256;
constexpr double kGoldenRelTol = 1e-12;
constexpr double kTieTol = 1e-9;

double golden_maximize(const std::function<double(double)>& f, double a,
                       double b) {
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while ((b - a) > kGoldenRelTol * std::max(std::abs(a), std::abs(b))) {
    if (fc > fd) {
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

void SystemParams::validate() const {
  if (!(T > 0.0)) throw std::invalid_argument("frame duration T must be > 0");
  if (!(B > 0.0)) throw std::invalid_argument("bandwidth B must be > 0");
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be >= 0");
  if (!(snr > 0.0)) throw std::invalid_argument("snr must be > 0");
  if (!(T * B > 2.0)) throw std::invalid_argument("TB must exceed 2");
}

double instantaneous_capacity(double snr, double z, double bandwidth) {
  return bandwidth * std::log2(1.0 + snr * z);
}

double outage_threshold(double r, double bandwidth, double snr) {
  return std::expm1(kLn2 * r / bandwidth) / snr;
}

double on_probability(const FadingModel& model, double alpha) {
  return model.ccdf(alpha);
}

double log_mgf_per_frame(double r, double theta, double T, double p_on) {
  // ln(1 - p_on (1 - e^(-theta T r))) without forming 1 - e^(-x).
  return std::log1p(p_on * std::expm1(-theta * T * r));
}

double effective_capacity_at_rate(double r, const SystemParams& params,
                                  const FadingModel& model) {
  params.validate();
  if (!(params.theta > 0.0)) {
    throw std::invalid_argument(
        "effective_capacity_at_rate requires theta > 0; "
        "use effective_capacity_theta0");
  }
  detail::RateChannel ch{model, params.snr, 1.0 / params.B, params.theta,
                         params.T, params.B};
  return detail::objective(ch, r);
}

double bit_energy(double snr, double spectral_efficiency) {
  if (spectral_efficiency <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return snr / spectral_efficiency;
}

double bit_energy_db(double snr, double spectral_efficiency) {
  return 10.0 * std::log10(bit_energy(snr, spectral_efficiency));
}

namespace detail {

double rate_threshold(const RateChannel& ch, double r) {
  return std::expm1(kLn2 * ch.exponent_scale * r) / ch.snr;
}

double objective(const RateChannel& ch, double r) {
  if (r <= 0.0) return 0.0;
  double p_on = ch.model.ccdf(rate_threshold(ch, r));
  return -log_mgf_per_frame(r, ch.theta, ch.T, p_on) /
         (ch.theta * ch.T * ch.B);
}

namespace {

// u'(r): sign matches the direction of descent of the objective; negative
// left of the maximizer, positive right of it.
double derivative_gap(const RateChannel& ch, double r) {
  double alpha = rate_threshold(ch, r);
  double dalpha = kLn2 * ch.exponent_scale * (ch.snr * alpha + 1.0) / ch.snr;
  double lhs = ch.model.pdf(alpha) * dalpha * (-std::expm1(-ch.theta * ch.T * r));
  double rhs = ch.theta * ch.T * std::exp(-ch.theta * ch.T * r) *
               ch.model.ccdf(alpha);
  return lhs - rhs;
}

double relative_gap(const RateChannel& ch, double r) {
  double alpha = rate_threshold(ch, r);
  double dalpha = kLn2 * ch.exponent_scale * (ch.snr * alpha + 1.0) / ch.snr;
  double lhs = ch.model.pdf(alpha) * dalpha * (-std::expm1(-ch.theta * ch.T * r));
  double rhs = ch.theta * ch.T * std::exp(-ch.theta * ch.T * r) *
               ch.model.ccdf(alpha);
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? (lhs - rhs) / scale : 0.0;
}

// Grid scan + golden section around every grid-local maximum. Ties within
// kTieTol in value resolve to the smaller rate for reproducibility.
double grid_seeded_maximize(const std::function<double(double)>& f, double r_lo,
                            double r_hi, const char* what) {
  std::vector<double> grid(kGridPoints), val(kGridPoints);
  double log_lo = std::log(r_lo), log_hi = std::log(r_hi);
  for (int i = 0; i < kGridPoints; ++i) {
    grid[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kGridPoints - 1));
    val[i] = f(grid[i]);
  }
  double best_grid = *std::max_element(val.begin(), val.end());
  if (!(best_grid > 0.0) || !std::isfinite(best_grid)) {
    std::ostringstream os;
    os << what << ": objective numerically flat on [" << r_lo << ", " << r_hi
       << "]";
    throw SolverError(os.str());
  }

  double best_r = 0.0, best_v = -1.0;
  for (int i = 0; i < kGridPoints; ++i) {
    bool left_ok = (i == 0) || val[i] >= val[i - 1];
    bool right_ok = (i == kGridPoints - 1) || val[i] >= val[i + 1];
    if (!(left_ok && right_ok)) continue;
    double a = grid[std::max(i - 1, 0)];
    double b = grid[std::min(i + 1, kGridPoints - 1)];
    double r = golden_maximize(f, a, b);
    double v = f(r);
    if (v > best_v * (1.0 + kTieTol) ||
        (std::abs(v - best_v) <= kTieTol * std::max(v, best_v) && r < best_r)) {
      best_v = v;
      best_r = r;
    }
  }
  return best_r;
}

// One bisection pass on the first-order-condition gap to certify the
// stationary point to the stated residual.
double certify_root(const std::function<double(double)>& gap, double r) {
  double delta = 1e-7 * r;
  double lo = r - delta, hi = r + delta;
  double glo = gap(lo), ghi = gap(hi);
  for (int i = 0; i < 60 && !(glo < 0.0 && ghi > 0.0); ++i) {
    delta *= 4.0;
    lo = std::max(r - delta, 1e-300);
    hi = r + delta;
    glo = gap(lo);
    ghi = gap(hi);
  }
  if (!(glo < 0.0 && ghi > 0.0)) return r;  // gap flat at double precision
  for (int i = 0; i < 200 && (hi - lo) > 1e-16 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double stationarity_residual(const RateChannel& ch, double r) {
  return relative_gap(ch, r);
}

EffCapPoint optimize_fixed_rate(const RateChannel& ch) {
  if (!(ch.theta > 0.0)) {
    throw std::invalid_argument("optimize_fixed_rate requires theta > 0");
  }
  // Bracket: smallest rate whose ON probability has collapsed below 1e-14.
  double alpha_hi = ch.model.tail_quantile(1e-14);
  double r_hi = std::log1p(ch.snr * alpha_hi) / (kLn2 * ch.exponent_scale);
  double r_lo = r_hi * 1e-8;

  auto f = [&](double r) { return objective(ch, r); };
  double r_opt = grid_seeded_maximize(f, r_lo, r_hi, "optimize_rate");
  r_opt = certify_root([&](double r) { return derivative_gap(ch, r); }, r_opt);

  EffCapPoint pt;
  pt.r_opt = r_opt;
  pt.alpha_opt = rate_threshold(ch, r_opt);
  pt.spectral_efficiency = objective(ch, r_opt);
  pt.bit_energy_db = bit_energy_db(ch.snr, pt.spectral_efficiency);
  pt.stationarity_residual = relative_gap(ch, r_opt);
  return pt;
}

EffCapPoint optimize_fixed_rate_theta0(const FadingModel& model, double snr,
                                       double exponent_scale,
                                       double bandwidth) {
  double alpha_hi = model.tail_quantile(1e-14);
  double r_hi = std::log1p(snr * alpha_hi) / (kLn2 * exponent_scale);
  double r_lo = r_hi * 1e-8;

  auto alpha_of = [&](double r) {
    return std::expm1(kLn2 * exponent_scale * r) / snr;
  };
  auto f = [&](double r) {
    return (r / bandwidth) * model.ccdf(alpha_of(r));
  };
  // d/dr of r ccdf(alpha): negative gap left of the maximizer.
  auto gap = [&](double r) {
    double alpha = alpha_of(r);
    double dalpha = kLn2 * exponent_scale * (snr * alpha + 1.0) / snr;
    return r * model.pdf(alpha) * dalpha - model.ccdf(alpha);
  };
  double r_opt = grid_seeded_maximize(f, r_lo, r_hi, "optimize_rate_theta0");
  r_opt = certify_root(gap, r_opt);

  EffCapPoint pt;
  pt.r_opt = r_opt;
  pt.alpha_opt = alpha_of(r_opt);
  pt.spectral_efficiency = f(r_opt);
  pt.bit_energy_db = bit_energy_db(snr, pt.spectral_efficiency);
  pt.stationarity_residual = 0.0;
  return pt;
}

}  // namespace detail

EffCapPoint optimize_rate(const SystemParams& params,
                          const FadingModel& model) {
  params.validate();
  if (!(params.theta > 0.0)) {
    throw std::invalid_argument(
        "optimize_rate requires theta > 0; use effective_capacity_theta0");
  }
  detail::RateChannel ch{model, params.snr, 1.0 / params.B, params.theta,
                         params.T, params.B};
  return detail::optimize_fixed_rate(ch);
}

double effective_capacity_theta0(double snr, double bandwidth,
                                 const FadingModel& model) {
  return detail::optimize_fixed_rate_theta0(model, snr, 1.0 / bandwidth,
                                            bandwidth)
      .spectral_efficiency;
}

}  // namespace qoscap
