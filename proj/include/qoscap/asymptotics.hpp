#pragma once

#include <span>
#include <vector>

#include "qoscap/fading.hpp"

namespace qoscap {

enum class Regime { Wideband, LowPower };

/// Closed-form limit of the spectral efficiency / bit energy tradeoff.
struct AsymptoticResult {
  Regime regime;
  double alpha_star;      ///< limiting outage threshold
  double eb_n0_zero_db;   ///< bit energy at zero spectral efficiency, dB
  double wideband_slope;  ///< bits/s/Hz per 3 dB
  double qos_param;       ///< delta (wideband) or beta (low-power)
  bool is_minimum;        ///< true when the zero-efficiency bit energy is
                          ///< provably the minimum
};

/// Fixed point of delta a = ln(1 + delta ccdf(a)/pdf(a)); the delta = 0
/// limit coincides with the low-power root.
double wideband_alpha_star(double delta, const FadingModel& model);

/// Limits for fixed Pbar/N0 as B grows; delta = theta T Pbar/(N0 ln 2).
AsymptoticResult wideband_limits(double theta, double T, double pbar_over_n0,
                                 const FadingModel& model);

/// Root of a pdf(a) = ccdf(a); unique for integer-shape Gamma laws.
double lowpower_alpha_star(const FadingModel& model);

/// Limits for fixed B as Pbar shrinks; beta = theta T B / ln 2.
AsymptoticResult lowpower_limits(double theta, double T, double B,
                                 const FadingModel& model);

/// First-order spectral-efficiency approximation at a given bit energy in
/// dB; clamped to 0 below the intercept.
double linear_approximation(double eb_db, const AsymptoticResult& result);

/// Bit-energy increase in dB between two slopes at a fixed spectral
/// efficiency.
double bit_energy_gap_db(double s0_a, double s0_b, double spectral_eff);

struct RatioMonotonicityReport {
  std::vector<double> zeta;
  std::vector<double> ratio;  ///< R_E(zeta)/zeta at each grid point
  bool monotone;
};

/// Evaluates R_E(zeta)/zeta along a strictly increasing zeta = 1/B grid
/// and checks that it never increases beyond solver tolerance.
RatioMonotonicityReport wideband_ratio_monotonicity_check(
    double theta, double T, double pbar_over_n0, const FadingModel& model,
    std::span<const double> zeta_grid);

/// Counts sign changes of f(x) = x pdf(x) - ccdf(x) on a dense grid over
/// (0, x_hi] with ccdf(x_hi) < 1e-12. Exactly 1 for integer-shape Gamma.
int uniqueness_scan(const FadingModel& model);

}  // namespace qoscap
