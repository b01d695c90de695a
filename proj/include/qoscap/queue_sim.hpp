#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qoscap/effcap.hpp"
#include "qoscap/fading.hpp"

namespace qoscap {

/// Inputs of one buffered ON-OFF link simulation.
struct QueueParams {
  double arrival_rate;   ///< a, bits/s (fluid arrivals, a T bits per frame)
  double rate;           ///< fixed transmission rate r, bits/s
  double alpha;          ///< outage threshold on z
  double T;              ///< frame duration, s
  FadingModel model;
  std::size_t n_frames;
  std::uint64_t seed;
  std::uint64_t stream_index = 0;
};

/// Queue occupancy at frame boundaries, Q_{k+1} = max(Q_k + aT - R_k, 0)
/// with R_k = rT when z_k > alpha and 0 otherwise.
struct QueueTrace {
  std::vector<double> queue_samples;  ///< bits, Q_0 = 0 convention applied
  std::vector<std::uint8_t> on_state;
  QueueParams params;
};

/// Tail-decay fit of ln P(Q >= q) against q.
struct DecayEstimate {
  double theta_hat;  ///< 1/bit
  double q_lo;       ///< fit window, bits
  double q_hi;
  double r_squared;
  std::size_t n_frames;
};

QueueTrace simulate_queue(const QueueParams& params);

/// Least-squares slope of the empirical log tail over the ccdf window
/// [ccdf_lo, ccdf_hi]. Throws SolverError when the window holds fewer
/// than 10 distinct queue levels (run longer or raise the arrival rate).
DecayEstimate estimate_decay_rate(const QueueTrace& trace,
                                  double ccdf_lo = 1e-5, double ccdf_hi = 1e-2);
DecayEstimate estimate_decay_rate(std::span<const double> queue_samples,
                                  double ccdf_lo = 1e-5, double ccdf_hi = 1e-2);

/// Empirical P{D >= d} for the fluid waiting time D = Q/a; informational
/// only, the buffer-to-delay constant is not modeled.
double delay_tail(const QueueTrace& trace, double d_seconds);

/// End-to-end check: load the queue at exactly the effective capacity and
/// compare the fitted decay rate against the target QoS exponent.
struct ValidationReport {
  EffCapPoint point;
  double arrival_rate;           ///< a = R_E B, bits/s
  DecayEstimate decay;
  double mgf_identity_residual;  ///< |(-Lambda/theta) - aT| / aT
  bool within_band;              ///< theta_hat/theta in [0.85, 1.15]
};

ValidationReport validate_effective_capacity(double theta, double snr,
                                             double T, double B,
                                             const FadingModel& model,
                                             std::size_t n_frames,
                                             std::uint64_t seed);

/// CSV with header `frame,queue_bits,on_state`.
void write_trace_csv(const QueueTrace& trace, std::ostream& os);

/// Single-line record `theta_hat,q_lo,q_hi,r2,n_frames`.
std::string decay_record(const DecayEstimate& estimate);

}  // namespace qoscap
