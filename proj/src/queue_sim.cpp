#include "qoscap/queue_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "qoscap/errors.hpp"

namespace qoscap {

QueueTrace simulate_queue(const QueueParams& params) {
  if (!(params.arrival_rate >= 0.0) || !(params.rate >= 0.0)) {
    throw std::invalid_argument("arrival and service rates must be >= 0");
  }
  if (params.n_frames < 1) {
    throw std::invalid_argument("n_frames must be >= 1");
  }
  QueueTrace trace{{}, {}, params};
  trace.queue_samples.resize(params.n_frames);
  trace.on_state.resize(params.n_frames);

  RandomStream stream(params.seed, params.stream_index);
  double arrivals = params.arrival_rate * params.T;
  double service = params.rate * params.T;
  double q = 0.0;
  for (std::size_t k = 0; k < params.n_frames; ++k) {
    double z = sample(params.model, stream);
    bool on = z > params.alpha;
    trace.queue_samples[k] = q;
    trace.on_state[k] = on ? 1 : 0;
    q = std::max(q + arrivals - (on ? service : 0.0), 0.0);
  }
  return trace;
}

DecayEstimate estimate_decay_rate(std::span<const double> queue_samples,
                                  double ccdf_lo, double ccdf_hi) {
  if (!(ccdf_lo > 0.0 && ccdf_lo < ccdf_hi && ccdf_hi < 1.0)) {
    throw std::invalid_argument("fit window must satisfy 0 < lo < hi < 1");
  }
  std::vector<double> sorted(queue_samples.begin(), queue_samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();

  // Sorted ascending: P(Q >= sorted[i]) = (n - i)/n.
  std::vector<double> qs, lns;
  double q_prev = -1.0;
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double ccdf = static_cast<double>(n - i) / n;
    if (ccdf > ccdf_hi || ccdf < ccdf_lo) continue;
    if (!(sorted[i] > 0.0)) continue;
    if (sorted[i] != q_prev) {
      ++distinct;
      q_prev = sorted[i];
    }
    qs.push_back(sorted[i]);
    lns.push_back(std::log(ccdf));
  }
  if (distinct < 10) {
    throw SolverError(
        "estimate_decay_rate: tail window holds fewer than 10 distinct "
        "queue levels; run more frames or raise the arrival rate");
  }

  double mean_q = 0.0, mean_l = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    mean_q += qs[i];
    mean_l += lns[i];
  }
  mean_q /= qs.size();
  mean_l /= qs.size();
  double sqq = 0.0, sql = 0.0, sll = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    double dq = qs[i] - mean_q;
    double dl = lns[i] - mean_l;
    sqq += dq * dq;
    sql += dq * dl;
    sll += dl * dl;
  }
  if (!(sqq > 0.0)) {
    throw SolverError("estimate_decay_rate: degenerate fit window");
  }
  double slope = sql / sqq;

  DecayEstimate est;
  est.theta_hat = -slope;
  est.q_lo = qs.front();
  est.q_hi = qs.back();
  est.r_squared = sll > 0.0 ? (sql * sql) / (sqq * sll) : 0.0;
  est.n_frames = n;
  return est;
}

DecayEstimate estimate_decay_rate(const QueueTrace& trace, double ccdf_lo,
                                  double ccdf_hi) {
  return estimate_decay_rate(std::span<const double>(trace.queue_samples),
                             ccdf_lo, ccdf_hi);
}

double delay_tail(const QueueTrace& trace, double d_seconds) {
  double a = trace.params.arrival_rate;
  if (!(a > 0.0)) return 0.0;
  double q_thresh = a * d_seconds;
  std::size_t count = 0;
  for (double q : trace.queue_samples) {
    if (q >= q_thresh) ++count;
  }
  return static_cast<double>(count) / trace.queue_samples.size();
}

ValidationReport validate_effective_capacity(double theta, double snr,
                                             double T, double B,
                                             const FadingModel& model,
                                             std::size_t n_frames,
                                             std::uint64_t seed) {
  if (!(theta > 0.0)) throw std::invalid_argument("theta must be > 0");
  SystemParams params{T, B, theta, snr};
  EffCapPoint point = optimize_rate(params, model);

  ValidationReport report;
  report.point = point;
  report.arrival_rate = point.spectral_efficiency * B;

  double p_on = model.ccdf(point.alpha_opt);
  double lambda = log_mgf_per_frame(point.r_opt, theta, T, p_on);
  double per_frame_bits = report.arrival_rate * T;
  report.mgf_identity_residual =
      std::abs(-lambda / theta - per_frame_bits) / per_frame_bits;

  QueueParams qp{report.arrival_rate, point.r_opt, point.alpha_opt,
                 T,                   model,       n_frames,
                 seed};
  QueueTrace trace = simulate_queue(qp);
  report.decay = estimate_decay_rate(trace);
  double ratio = report.decay.theta_hat / theta;
  report.within_band = (ratio >= 0.85 && ratio <= 1.15);
  return report;
}

void write_trace_csv(const QueueTrace& trace, std::ostream& os) {
  os << "frame,queue_bits,on_state\n";
  char buf[64];
  for (std::size_t k = 0; k < trace.queue_samples.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.10g,%u\n", k,
                  trace.queue_samples[k],
                  static_cast<unsigned>(trace.on_state[k]));
    os << buf;
  }
}

std::string decay_record(const DecayEstimate& estimate) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%.10g,%.10g,%zu",
                estimate.theta_hat, estimate.q_lo, estimate.q_hi,
                estimate.r_squared, estimate.n_frames);
  return buf;
}

}  // namespace qoscap
