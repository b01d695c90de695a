#pragma once

#include "qoscap/fading.hpp"

namespace qoscap {

/// Frame/QoS/link parameters shared across the throughput computations.
struct SystemParams {
  double T;      ///< frame duration, s
  double B;      ///< bandwidth, Hz
  double theta;  ///< QoS exponent, 1/bit (>= 0)
  double snr;    ///< average SNR = Pbar/(N0 B), dimensionless

  void validate() const;
};

/// Result of the fixed-rate throughput maximization.
struct EffCapPoint {
  double r_opt;                  ///< bits/s
  double alpha_opt;              ///< outage threshold, dimensionless
  double spectral_efficiency;    ///< bits/s/Hz
  double bit_energy_db;          ///< 10 log10(snr / spectral_efficiency)
  double stationarity_residual;  ///< relative first-order-condition residual
};

double instantaneous_capacity(double snr, double z, double bandwidth);

/// alpha = (2^(r/B) - 1)/snr via expm1 so r/B << 1 keeps full precision.
double outage_threshold(double r, double bandwidth, double snr);

/// p22 = p12 = P{z > alpha}.
double on_probability(const FadingModel& model, double alpha);

/// Lambda(-theta) = ln((1 - p_on) + p_on e^(-theta T r)), always <= 0.
double log_mgf_per_frame(double r, double theta, double T, double p_on);

/// Normalized throughput at a fixed rate: -(1/(theta T B)) Lambda(-theta).
/// Requires theta > 0; the theta = 0 limit has its own entry point below.
double effective_capacity_at_rate(double r, const SystemParams& params,
                                  const FadingModel& model);

/// Maximizes effective_capacity_at_rate over r >= 0 (theta > 0).
EffCapPoint optimize_rate(const SystemParams& params, const FadingModel& model);

/// theta = 0 limit: max over r of (r/B) P{z > alpha(r)}.
double effective_capacity_theta0(double snr, double bandwidth,
                                 const FadingModel& model);

/// snr / spectral_efficiency; +infinity when the efficiency is zero.
double bit_energy(double snr, double spectral_efficiency);
double bit_energy_db(double snr, double spectral_efficiency);

namespace detail {

/// ON-OFF fixed-rate channel with a generalized threshold
/// alpha(r) = (2^(s r) - 1)/snr. The perfect-CSI link uses s = 1/B; the
/// training-based link reuses the same machinery with s = T/(TB - 1) and
/// a unit-mean exponential threshold variable.
struct RateChannel {
  FadingModel model;
  double snr;
  double exponent_scale;  ///< s above
  double theta;
  double T;
  double B;
};

double rate_threshold(const RateChannel& ch, double r);
double objective(const RateChannel& ch, double r);
double stationarity_residual(const RateChannel& ch, double r);
EffCapPoint optimize_fixed_rate(const RateChannel& ch);

/// theta = 0 counterpart: maximizes (r/B) ccdf(alpha(r)).
EffCapPoint optimize_fixed_rate_theta0(const FadingModel& model, double snr,
                                       double exponent_scale, double bandwidth);

}  // namespace detail

}  // namespace qoscap
