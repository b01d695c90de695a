#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qoscap/effcap.hpp"
#include "qoscap/training.hpp"

using namespace qoscap;

namespace {
constexpr double kT = 2e-3;
constexpr double kB = 1e5;
}  // namespace

TEST_CASE("optimal training fraction limits") {
  // snr -> 0 drives eta -> infinity and rho -> 1/2.
  CHECK(std::abs(optimal_training_fraction(1e-9, 1.0, kT, 1e7) - 0.5) < 1e-3);
  // snr -> infinity with TB = 2e4.
  CHECK(std::abs(optimal_training_fraction(1e9, 1.0, kT, 1e7) - 0.007) < 5e-4);
}

TEST_CASE("training fraction maximizes the effective snr") {
  double snr = 0.3, gamma = 1.5;
  double rho = optimal_training_fraction(snr, gamma, kT, kB);
  double best = effective_snr(rho, snr, gamma, kT, kB);
  for (int i = 1; i < 1000; ++i) {
    double x = static_cast<double>(i) / 1000.0;
    CHECK(best >= effective_snr(x, snr, gamma, kT, kB) - 1e-15);
  }
  // First-order condition at the analytic optimum.
  double h = 1e-6;
  double d = (effective_snr(rho + h, snr, gamma, kT, kB) -
              effective_snr(rho - h, snr, gamma, kT, kB)) /
             (2.0 * h);
  CHECK(std::abs(d) * rho / best <= 1e-6);
}

TEST_CASE("effective snr endpoints and low-snr scaling") {
  CHECK(effective_snr(0.0, 1.0, 1.0, kT, kB) == 0.0);
  CHECK(effective_snr(1.0, 1.0, 1.0, kT, kB) == 0.0);

  double coeff = lowpower_snr_eff_coefficient(1.0, kT, kB);
  CHECK(coeff == doctest::Approx(200.0 * 200.0 / (4.0 * 199.0)).epsilon(1e-12));
  CHECK(lowpower_snr_eff_coefficient(2.0, kT, kB) ==
        doctest::Approx(4.0 * coeff).epsilon(1e-12));

  double snr = 1e-6;
  double rho = optimal_training_fraction(snr, 1.0, kT, kB);
  double ratio = effective_snr(rho, snr, 1.0, kT, kB) / (snr * snr);
  CHECK(std::abs(ratio - coeff) < 1e-3 * coeff);
}

TEST_CASE("rho_opt ignores the QoS exponent and decreases in snr") {
  double prev = 1.0;
  for (double snr : {1e-4, 1e-2, 1.0, 1e2, 1e4}) {
    double rho = optimal_training_fraction(snr, 1.0, kT, kB);
    CHECK(rho < prev);
    CHECK(rho > 0.0);
    CHECK(rho < 0.5 + 1e-12);
    prev = rho;

    // theta enters optimize_rate_training only after rho is fixed.
    TrainingParams a{1.0, kT, kB, 0.001, snr};
    TrainingParams b{1.0, kT, kB, 1.0, snr};
    CHECK(optimize_rate_training(a).rho_opt ==
          optimize_rate_training(b).rho_opt);
  }
}

TEST_CASE("training optimizer dominates a rate grid") {
  TrainingParams p{1.0, kT, kB, 0.01, 0.1};
  auto pt = optimize_rate_training(p);
  double s = kT / (kT * kB - 1.0);
  double theta_tb = p.theta * kT * kB;
  for (int i = 1; i <= 1000; ++i) {
    double r = pt.r_opt * 20.0 * i / 1000.0;
    double alpha = std::expm1(s * r * std::log(2.0)) / pt.snr_eff;
    double value =
        -std::log1p(std::exp(-alpha) * std::expm1(-p.theta * kT * r)) /
        theta_tb;
    CHECK(pt.spectral_efficiency >= value - 1e-12);
  }
  CHECK(pt.alpha_opt ==
        doctest::Approx(std::expm1(s * pt.r_opt * std::log(2.0)) / pt.snr_eff)
            .epsilon(1e-12));
}

TEST_CASE("training path reduces to the perfect-CSI optimizer structurally") {
  // Force snr_eff = snr and the exponent scale to 1/B; the two problems
  // then coincide on a unit-mean exponential gain.
  auto ray = FadingModel::rayleigh(1.0);
  SystemParams p{kT, kB, 0.01, 0.25};
  auto reference = optimize_rate(p, ray);
  detail::RateChannel ch{ray, p.snr, 1.0 / kB, p.theta, kT, kB};
  auto pt = detail::optimize_fixed_rate(ch);
  CHECK(pt.spectral_efficiency ==
        doctest::Approx(reference.spectral_efficiency).epsilon(1e-9));
  CHECK(pt.r_opt == doctest::Approx(reference.r_opt).epsilon(1e-6));
}

TEST_CASE("bit energy diverges as snr vanishes") {
  double prev_db = -1e300;
  for (double snr : {1e-2, 1e-3, 1e-4, 1e-5}) {
    TrainingParams p{1.0, kT, kB, 0.01, snr};
    auto pt = optimize_rate_training(p);
    CHECK(pt.bit_energy_db > prev_db);
    prev_db = pt.bit_energy_db;
  }
}

TEST_CASE("minimum bit energy scan finds an interior minimum") {
  std::vector<double> grid;
  for (int i = 0; i < 60; ++i) {
    grid.push_back(std::pow(10.0, 1.0 - 5.0 * i / 59.0));
  }
  auto scan = min_bit_energy_scan(0.01, kT, kB, 1.0, grid);
  CHECK_FALSE(scan.boundary_warning);
  CHECK(scan.snr_star > grid.back());
  CHECK(scan.snr_star < grid.front());

  auto eb_at = [&](double snr) {
    TrainingParams p{1.0, kT, kB, 0.01, snr};
    return optimize_rate_training(p).bit_energy_db;
  };
  CHECK(eb_at(scan.snr_star / 4.0) > scan.eb_min_db);
  CHECK(eb_at(4.0 * scan.snr_star) > scan.eb_min_db);

  // Each halving of snr deep below the minimizer costs about 3 dB once
  // the quadratic snr_eff regime dominates.
  double s = scan.snr_star / 100.0;
  double prev = eb_at(s);
  for (int i = 0; i < 4; ++i) {
    s /= 2.0;
    double cur = eb_at(s);
    CHECK(cur - prev >= 2.5);
    prev = cur;
  }
}

TEST_CASE("larger bandwidth lowers the training minimum bit energy") {
  auto scan_at = [](double B) {
    std::vector<double> grid;
    for (int i = 0; i < 48; ++i) {
      grid.push_back(std::pow(10.0, 1.0 - 4.0 * i / 47.0));
    }
    return min_bit_energy_scan(0.01, kT, B, 1.0, grid);
  };
  CHECK(scan_at(1e6).eb_min_db <= scan_at(1e5).eb_min_db);
}

TEST_CASE("parameter validation") {
  TrainingParams bad{1.0, 1e-5, 1e5, 0.01, 0.1};  // TB = 1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TrainingParams neg{-1.0, kT, kB, 0.01, 0.1};
  CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
  std::vector<double> narrow{1.0, 0.5, 0.25};  // well under 3 decades
  CHECK_THROWS_AS(min_bit_energy_scan(0.01, kT, kB, 1.0, narrow),
                  std::invalid_argument);
}
