#pragma once

#include <span>
#include <vector>

#include "qoscap/effcap.hpp"

namespace qoscap {

/// Link parameters for pilot-assisted transmission with MMSE channel
/// estimation. One pilot symbol per frame; the remaining TB - 1 symbols
/// carry data, so TB must exceed 2.
struct TrainingParams {
  double gamma;  ///< mean channel power gain E{z}
  double T;      ///< frame duration, s
  double B;      ///< bandwidth, Hz
  double theta;  ///< QoS exponent, 1/bit (>= 0)
  double snr;    ///< average SNR = Pbar/(N0 B)

  void validate() const;
};

/// Fixed-rate optimum of the training-based link.
struct TrainingPoint {
  double rho_opt;              ///< pilot energy fraction, in (0, 1)
  double snr_eff;              ///< post-estimation effective SNR
  double r_opt;                ///< bits/s
  double alpha_opt;            ///< (2^(r T/(TB-1)) - 1)/snr_eff
  double spectral_efficiency;  ///< bits/s/Hz
  double bit_energy_db;        ///< relative to the true SNR, not snr_eff
};

/// rho_opt = sqrt(eta (eta + 1)) - eta with
/// eta = (gamma TB snr + TB - 1)/(gamma TB (TB - 2) snr).
/// Independent of theta and of the transmission rate.
double optimal_training_fraction(double snr, double gamma, double T, double B);

/// Effective SNR of the MMSE-estimated link at pilot fraction rho;
/// vanishes at rho = 0 and rho = 1.
double effective_snr(double rho, double snr, double gamma, double T, double B);

/// Optimizes the pilot fraction analytically, then the fixed rate
/// numerically. theta = 0 uses the average-rate limit path.
TrainingPoint optimize_rate_training(const TrainingParams& params);

struct MinBitEnergyScan {
  double snr_star;
  double eb_min_db;
  std::vector<double> snr;    ///< echo of the scanned grid
  std::vector<double> eb_db;  ///< bit energy along the grid
  bool boundary_warning;      ///< minimizer fell on a grid endpoint
};

/// Scans bit energy along a decreasing SNR grid (>= 3 decades) and refines
/// the interior minimizer by golden section between its grid neighbors.
MinBitEnergyScan min_bit_energy_scan(double theta, double T, double B,
                                     double gamma,
                                     std::span<const double> snr_grid);

/// Leading coefficient of snr_eff at the optimal pilot fraction:
/// snr_eff = gamma^2 T^2 B^2 / (4 (TB - 1)) snr^2 + o(snr^2).
double lowpower_snr_eff_coefficient(double gamma, double T, double B);

}  // namespace qoscap
