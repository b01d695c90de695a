#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qoscap {

/// Distribution of the squared fading magnitude z = |h|^2.
///
/// All supported variants are Gamma laws internally:
///   Rayleigh{mean_gain g}  -> Gamma(shape 1, rate 1/g), mean g
///   Nakagami{m}            -> Gamma(shape m, rate m), mean 1
///   Gamma{n, lambda}       -> Gamma(shape n, rate lambda), mean n/lambda
class FadingModel {
 public:
  enum class Kind { Rayleigh, Nakagami, Gamma };

  static FadingModel rayleigh(double mean_gain = 1.0);
  static FadingModel nakagami(double m);
  static FadingModel gamma(int n, double lambda);

  Kind kind() const { return kind_; }
  double shape() const { return shape_; }
  double rate() const { return rate_; }
  double mean() const { return shape_ / rate_; }
  bool integer_shape() const;

  /// Density p_z(x). Throws std::domain_error for x < 0.
  double pdf(double x) const;

  /// Tail probability P{z > x}. Uses the closed-form finite sum for
  /// integer shape and the regularized upper incomplete gamma otherwise.
  /// Throws std::domain_error for x < 0.
  double ccdf(double x) const;

  /// P{z > x} / p_z(x). Throws SolverError where pdf(x) == 0.
  double hazard_ratio(double x) const;

  /// Smallest x with ccdf(x) <= tail; used to size scan grids.
  double tail_quantile(double tail) const;

  std::string describe() const;

 private:
  FadingModel(Kind kind, double shape, double rate);

  Kind kind_;
  double shape_;
  double rate_;
};

/// Seedable deterministic pseudorandom stream. Generation algorithm:
/// std::mt19937_64 seeded through std::seed_seq{seed, stream_index}, with
/// uniforms taken as the top 53 bits mapped into (0, 1]. Identical
/// (seed, stream_index) pairs always reproduce identical sequences;
/// distinct stream indices give independent streams for parallel replicas.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  /// Uniform draw in (0, 1].
  double uniform();

  /// Exponential draw with the given rate, by inverse transform.
  double exponential(double rate);

  /// Standard normal draw via the Marsaglia polar method.
  double standard_normal();

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// One i.i.d. draw of z. Shape 1 uses inverse-transform exponential,
/// small integer shapes a sum of exponentials, and general shapes the
/// Marsaglia-Tsang squeeze method (with the Stuart shape+1 boost for
/// shape < 1). Deterministic per stream.
double sample(const FadingModel& model, RandomStream& stream);

/// Parses the model grammar used by the CLI and config files:
///   rayleigh:gamma=1.0 | nakagami:m=2 | gamma:n=3,lambda=3
/// Case-insensitive. Unknown names or keys throw std::invalid_argument.
FadingModel parse_model(std::string_view text);

}  // namespace qoscap
