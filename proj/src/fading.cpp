#include "qoscap/fading.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "qoscap/errors.hpp"

namespace qoscap {

namespace {

constexpr double kIntegerTol = 1e-12;

void require_nonnegative(double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("fading evaluation requires x >= 0, got " +
                            std::to_string(x));
  }
}

}  // namespace

FadingModel::FadingModel(Kind kind, double shape, double rate)
    : kind_(kind), shape_(shape), rate_(rate) {}

FadingModel FadingModel::rayleigh(double mean_gain) {
  if (!(mean_gain > 0.0)) {
    throw std::invalid_argument("Rayleigh mean gain must be positive");
  }
  return FadingModel(Kind::Rayleigh, 1.0, 1.0 / mean_gain);
}

FadingModel FadingModel::nakagami(double m) {
  if (!(m > 0.0)) {
    throw std::invalid_argument("Nakagami m must be positive");
  }
  return FadingModel(Kind::Nakagami, m, m);
}

FadingModel FadingModel::gamma(int n, double lambda) {
  if (n < 1) {
    throw std::invalid_argument("Gamma n must be a positive integer");
  }
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("Gamma lambda must be positive");
  }
  return FadingModel(Kind::Gamma, static_cast<double>(n), lambda);
}

bool FadingModel::integer_shape() const {
  return std::abs(shape_ - std::round(shape_)) <= kIntegerTol * shape_;
}

double FadingModel::pdf(double x) const {
  require_nonnegative(x);
  if (x == 0.0) {
    if (shape_ > 1.0) return 0.0;
    if (shape_ == 1.0) return rate_;
    return std::numeric_limits<double>::infinity();
  }
  if (std::isinf(x)) return 0.0;
  // rate^k x^(k-1) e^(-rate x) / Gamma(k), evaluated in log space.
  double log_pdf = shape_ * std::log(rate_) + (shape_ - 1.0) * std::log(x) -
                   rate_ * x - std::lgamma(shape_);
  return std::exp(log_pdf);
}

double FadingModel::ccdf(double x) const {
  require_nonnegative(x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  double u = rate_ * x;
  if (integer_shape()) {
    // e^(-u) sum_{m=0}^{n-1} u^m / m!, each term in log space so large u
    // underflows gracefully instead of overflowing the powers.
    int n = static_cast<int>(std::round(shape_));
    double log_u = std::log(u);
    double sum = 0.0;
    double lfact = 0.0;  // lgamma(m+1)
    for (int m = 0; m < n; ++m) {
      if (m > 0) lfact += std::log(static_cast<double>(m));
      sum += std::exp(m * log_u - lfact - u);
    }
    return std::min(sum, 1.0);
  }
  return boost::math::gamma_q(shape_, u);
}

double FadingModel::hazard_ratio(double x) const {
  double density = pdf(x);
  if (!(density > 0.0)) {
    throw SolverError("hazard_ratio: pdf vanishes at x = " + std::to_string(x));
  }
  return ccdf(x) / density;
}

double FadingModel::tail_quantile(double tail) const {
  double hi = std::max(mean(), 1.0);
  while (ccdf(hi) > tail) hi *= 2.0;
  double lo = hi / 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
    double mid = 0.5 * (lo + hi);
    (ccdf(mid) > tail ? lo : hi) = mid;
  }
  return hi;
}

std::string FadingModel::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Rayleigh:
      os << "rayleigh:gamma=" << mean();
      break;
    case Kind::Nakagami:
      os << "nakagami:m=" << shape_;
      break;
    case Kind::Gamma:
      os << "gamma:n=" << static_cast<int>(std::round(shape_))
         << ",lambda=" << rate_;
      break;
  }
  return os.str();
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_index),
                    static_cast<std::uint32_t>(stream_index >> 32)};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  // Top 53 bits mapped into (0, 1]; never returns 0 so log(u) is finite.
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RandomStream::exponential(double rate) {
  return -std::log(uniform()) / rate;
}

double RandomStream::standard_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_normal_ = v * f;
  has_spare_ = true;
  return u * f;
}

namespace {

// Marsaglia-Tsang for shape >= 1; unit rate.
double gamma_variate_mt(double shape, RandomStream& stream) {
  double d = shape - 1.0 / 3.0;
  double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = stream.standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    double u = stream.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample(const FadingModel& model, RandomStream& stream) {
  double shape = model.shape();
  double rate = model.rate();
  if (shape == 1.0) {
    return stream.exponential(rate);
  }
  if (model.integer_shape() && shape <= 16.0) {
    int n = static_cast<int>(std::round(shape));
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += stream.exponential(rate);
    return acc;
  }
  if (shape < 1.0) {
    // Stuart's theorem: G(shape) = G(shape + 1) * U^(1/shape).
    double g = gamma_variate_mt(shape + 1.0, stream);
    return g * std::pow(stream.uniform(), 1.0 / shape) / rate;
  }
  return gamma_variate_mt(shape, stream) / rate;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

double parse_number(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric value for '" + key +
                                "': " + value);
  }
}

std::vector<std::pair<std::string, std::string>> parse_kv(
    const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected key=value, got '" + item + "'");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

}  // namespace

FadingModel parse_model(std::string_view text) {
  std::string spec = lower(text);
  std::string name = spec;
  std::string args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  auto kv = args.empty()
                ? std::vector<std::pair<std::string, std::string>>{}
                : parse_kv(args);

  if (name == "rayleigh") {
    double gamma = 1.0;
    for (const auto& [k, v] : kv) {
      if (k == "gamma") {
        gamma = parse_number(k, v);
      } else {
        throw std::invalid_argument("unknown rayleigh key '" + k + "'");
      }
    }
    return FadingModel::rayleigh(gamma);
  }
  if (name == "nakagami") {
    double m = 0.0;
    bool have_m = false;
    for (const auto& [k, v] : kv) {
      if (k == "m") {
        m = parse_number(k, v);
        have_m = true;
      } else {
        throw std::invalid_argument("unknown nakagami key '" + k + "'");
      }
    }
    if (!have_m) throw std::invalid_argument("nakagami requires m=<value>");
    return FadingModel::nakagami(m);
  }
  if (name == "gamma") {
    double n = 0.0, lambda = 0.0;
    bool have_n = false, have_lambda = false;
    for (const auto& [k, v] : kv) {
      if (k == "n") {
        n = parse_number(k, v);
        have_n = true;
      } else if (k == "lambda") {
        lambda = parse_number(k, v);
        have_lambda = true;
      } else {
        throw std::invalid_argument("unknown gamma key '" + k + "'");
      }
    }
    if (!have_n || !have_lambda) {
      throw std::invalid_argument("gamma requires n=<int>,lambda=<value>");
    }
    if (n != std::round(n) || n < 1.0) {
      throw std::invalid_argument("gamma n must be a positive integer");
    }
    return FadingModel::gamma(static_cast<int>(n), lambda);
  }
  throw std::invalid_argument("unknown fading model '" + name + "'");
}

}  // namespace qoscap
