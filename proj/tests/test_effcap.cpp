#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "qoscap/effcap.hpp"
#include "qoscap/errors.hpp"
#include "qoscap/fading.hpp"

using namespace qoscap;

TEST_CASE("instantaneous capacity") {
  CHECK(instantaneous_capacity(1.0, 0.0, 1e5) == 0.0);
  CHECK(instantaneous_capacity(1.0, 1.0, 1e5) == doctest::Approx(1e5));
  CHECK(instantaneous_capacity(0.1, 3.0, 1e5) ==
        doctest::Approx(37851.162325372985).epsilon(1e-12));
}

TEST_CASE("outage threshold") {
  CHECK(outage_threshold(0.0, 1e5, 1.0) == 0.0);
  CHECK(outage_threshold(1e5, 1e5, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // r/B = 1e-6: naive 2^x - 1 would lose digits here.
  CHECK(outage_threshold(0.1, 1e5, 1e-3) ==
        doctest::Approx(6.931474207865077e-4).epsilon(1e-12));
}

TEST_CASE("on probability equals the fading tail") {
  auto ray = FadingModel::rayleigh(1.0);
  CHECK(on_probability(ray, 0.0) == 1.0);
  CHECK(on_probability(ray, 1.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  auto nak5 = FadingModel::nakagami(5.0);
  CHECK(on_probability(nak5, 0.6974) ==
        doctest::Approx(nak5.ccdf(0.6974)).epsilon(1e-14));
}

TEST_CASE("per-frame log MGF") {
  CHECK(log_mgf_per_frame(1e5, 0.01, 2e-3, 1.0) ==
        doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(log_mgf_per_frame(1e5, 0.01, 2e-3, 0.0) == 0.0);
  // p_on = e^-1, theta T r = 2: ln(1 - e^-1 (1 - e^-2)).
  CHECK(log_mgf_per_frame(1e5, 0.01, 2e-3, std::exp(-1.0)) ==
        doctest::Approx(-0.38286107430555766).epsilon(1e-12));
  CHECK(log_mgf_per_frame(5e4, 0.3, 1e-3, 0.7) <= 0.0);
}

TEST_CASE("effective capacity at a fixed rate") {
  auto ray = FadingModel::rayleigh(1.0);
  SystemParams p{2e-3, 1e5, 0.01, 1.0};
  CHECK(effective_capacity_at_rate(0.0, p, ray) == 0.0);
  // r = B, snr = 1 puts alpha at 1 and theta T r at 2.
  CHECK(effective_capacity_at_rate(1e5, p, ray) ==
        doctest::Approx(0.19143053715277883).epsilon(1e-12));
  CHECK(effective_capacity_at_rate(1e12, p, ray) < 1e-15);
}

TEST_CASE("optimize_rate matches wideband table entries") {
  auto ray = FadingModel::rayleigh(1.0);
  // Wideband surrogate: Pbar/N0 = 1e4 spread over B = 1e9.
  SystemParams p{2e-3, 1e9, 0.01, 1e4 / 1e9};
  auto pt = optimize_rate(p, ray);
  CHECK(std::abs(pt.alpha_opt - 0.8786) < 1e-3);
  CHECK(std::abs(pt.stationarity_residual) <= 1e-8);

  p.theta = 1.0;
  auto pt2 = optimize_rate(p, ray);
  CHECK(std::abs(pt2.alpha_opt - 0.1177) < 1e-3);
}

TEST_CASE("optimizer dominates a rate grid") {
  auto ray = FadingModel::rayleigh(1.0);
  for (double snr : {0.05, 1.0}) {
    SystemParams p{2e-3, 1e5, 0.05, snr};
    auto pt = optimize_rate(p, ray);
    double r_hi = pt.r_opt * 50.0;
    for (int i = 1; i <= 1000; ++i) {
      double r = r_hi * i / 1000.0;
      CHECK(pt.spectral_efficiency >=
            effective_capacity_at_rate(r, p, ray) - 1e-12);
    }
  }
}

TEST_CASE("theta0 limit agrees with a brute-force grid") {
  auto ray = FadingModel::rayleigh(1.0);
  double best = 0.0;
  double B = 1e5, snr = 0.1;
  for (int i = 1; i <= 100000; ++i) {
    double r = 2e5 * i / 100000.0;
    double alpha = outage_threshold(r, B, snr);
    best = std::max(best, (r / B) * ray.ccdf(alpha));
  }
  double v = effective_capacity_theta0(snr, B, ray);
  CHECK(v >= best - 1e-9);
  CHECK(v == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("theta0 optimal alpha tends to 1 for Rayleigh at low snr") {
  auto ray = FadingModel::rayleigh(1.0);
  auto pt = detail::optimize_fixed_rate_theta0(ray, 1e-4, 1e-5, 1e5);
  CHECK(std::abs(pt.alpha_opt - 1.0) < 1e-3);
}

TEST_CASE("small-theta optimum approaches the theta0 limit") {
  auto ray = FadingModel::rayleigh(1.0);
  for (double snr : {0.01, 0.1, 1.0}) {
    SystemParams p{2e-3, 1e5, 1e-6, snr};
    auto pt = optimize_rate(p, ray);
    double v0 = effective_capacity_theta0(snr, 1e5, ray);
    CHECK(pt.spectral_efficiency == doctest::Approx(v0).epsilon(1e-3));
  }
}

TEST_CASE("throughput is nonincreasing in the QoS exponent") {
  auto nak = FadingModel::nakagami(2.0);
  double prev = std::numeric_limits<double>::infinity();
  for (double theta : {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0}) {
    SystemParams p{2e-3, 1e5, theta, 0.5};
    auto pt = optimize_rate(p, nak);
    CHECK(pt.spectral_efficiency <= prev + 1e-12);
    prev = pt.spectral_efficiency;
  }
}

TEST_CASE("bit energy") {
  CHECK(bit_energy(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(bit_energy_db(1.0, 1.0) == doctest::Approx(0.0));
  CHECK(bit_energy(1e-2, 5.3e-3) == doctest::Approx(1.8868).epsilon(1e-4));
  CHECK(bit_energy_db(1e-2, 5.3e-3) == doctest::Approx(2.758).epsilon(1e-3));
  CHECK(std::isinf(bit_energy(1.0, 0.0)));
}

TEST_CASE("parameter validation") {
  SystemParams bad{2e-3, 1e5, -0.1, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  SystemParams tiny{1e-5, 1e5, 0.01, 1.0};  // TB = 1, below the floor
  CHECK_THROWS_AS(tiny.validate(), std::invalid_argument);
  SystemParams ok{2e-3, 1e5, 0.0, 1.0};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("returned point is internally consistent") {
  auto ray = FadingModel::rayleigh(1.0);
  SystemParams p{2e-3, 1e5, 0.02, 0.3};
  auto pt = optimize_rate(p, ray);
  CHECK(pt.alpha_opt ==
        doctest::Approx(outage_threshold(pt.r_opt, p.B, p.snr)).epsilon(1e-12));
  CHECK(pt.spectral_efficiency ==
        doctest::Approx(effective_capacity_at_rate(pt.r_opt, p, ray))
            .epsilon(1e-12));
  CHECK(pt.bit_energy_db ==
        doctest::Approx(bit_energy_db(p.snr, pt.spectral_efficiency))
            .epsilon(1e-12));
}
