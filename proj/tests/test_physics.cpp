#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rectdyne/constants.hpp"
#include "rectdyne/errors.hpp"
#include "rectdyne/physics.hpp"
#include "rectdyne/quadrature.hpp"

using namespace rectdyne;
using doctest::Approx;

namespace {

// Independent J0 oracle: composite Simpson on (1/pi) Int_0^pi cos(x sin t) dt.
double j0_simpson(double x) {
  return quadrature::composite_simpson(
             [x](double t) { return std::cos(x * std::sin(t)); }, 0.0,
             constants::kPi, 4000) /
         constants::kPi;
}

}  // namespace

TEST_CASE("bessel_j0 basic values") {
  CHECK(physics::bessel_j0(0.0) == 1.0);
  CHECK(physics::bessel_j0(-1.0) == physics::bessel_j0(1.0));  // even function
  // Reference values from an independent implementation.
  CHECK(physics::bessel_j0(0.5) == Approx(0.938469807240813).epsilon(1e-12));
  CHECK(physics::bessel_j0(1.0) == Approx(0.7651976865579665).epsilon(1e-12));
  CHECK(physics::bessel_j0(3.0) == Approx(-0.2600519549019335).epsilon(1e-12));
  CHECK(physics::bessel_j0(12.0) == Approx(0.04768931079683335).epsilon(1e-11));
  CHECK(physics::bessel_j0(25.0) == Approx(0.09626678327595801).epsilon(1e-11));
  CHECK(physics::bessel_j0(50.0) == Approx(0.055812327669252086).epsilon(1e-11));
  // First root.
  CHECK(std::abs(physics::bessel_j0(2.4048255576957724)) < 1e-12);
  CHECK_THROWS_AS(physics::bessel_j0(std::nan("")), std::invalid_argument);
}

TEST_CASE("bessel_j0 agrees with an in-test quadrature oracle") {
  for (double x : {0.5, 1.0, 3.0}) {
    CHECK(physics::bessel_j0(x) == Approx(j0_simpson(x)).epsilon(1e-9));
  }
}

TEST_CASE("bessel_j0 agrees with the standard library across a grid") {
  for (double x = 0.0; x <= 20.0; x += 0.37) {
    CHECK(physics::bessel_j0(x) == Approx(std::cyl_bessel_j(0.0, x)).epsilon(1e-11));
  }
}

TEST_CASE("sinc_pi") {
  CHECK(physics::sinc_pi(0.0) == 1.0);
  CHECK(std::abs(physics::sinc_pi(constants::kPi)) < 1e-15);
  CHECK(physics::sinc_pi(constants::kPi / 2) ==
        Approx(2.0 / constants::kPi).epsilon(1e-14));
  const double eps = 1e-7;
  CHECK(physics::sinc_pi(eps) == Approx(1.0 - eps * eps / 6.0).epsilon(1e-15));
  CHECK(physics::sinc_pi(-2.5) == physics::sinc_pi(2.5));
}

TEST_CASE("alpha_from_field and its inverse") {
  // 664 nT over 24 us of sensing at the electron gyromagnetic ratio.
  const double alpha = physics::alpha_from_field(664e-9, 24e-6);
  CHECK(alpha / constants::kPi == Approx(0.5689412845925835).epsilon(1e-13));
  CHECK(physics::field_from_alpha(alpha, 24e-6) == Approx(664e-9).epsilon(1e-13));
  // Scales linearly in both arguments.
  CHECK(physics::alpha_from_field(2 * 664e-9, 24e-6) == Approx(2 * alpha).epsilon(1e-14));
  CHECK(physics::alpha_from_field(664e-9, 48e-6) == Approx(2 * alpha).epsilon(1e-14));
}

TEST_CASE("readout probabilities") {
  CHECK(physics::p0_x_readout(0.0) == 1.0);
  CHECK(physics::p0_x_readout(constants::kPi) == Approx(0.0).epsilon(1e-15));
  CHECK(physics::p0_x_readout(constants::kPi / 2) == Approx(0.5).epsilon(1e-15));
  // Phase-sensitive readout: quadrature phases give no information.
  CHECK(physics::p0_y_readout(1.3, constants::kPi / 2) == Approx(0.5).epsilon(1e-12));
  CHECK(physics::p0_y_readout(1.3, -constants::kPi / 2) == Approx(0.5).epsilon(1e-12));
  // Full deflection at alpha = pi/2 and phase 0.
  CHECK(physics::p0_y_readout(constants::kPi / 2, 0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(physics::p0_y_readout(constants::kPi / 2, constants::kPi) ==
        Approx(0.0).epsilon(1e-15));
}

TEST_CASE("accumulated_phase") {
  const double alpha = 1.7;
  // On resonance the sinc factor is 1.
  CHECK(physics::accumulated_phase(alpha, 0.0, 8, 0.0, 3e-6) == Approx(alpha));
  CHECK(physics::accumulated_phase(alpha, constants::kPi / 3, 8, 0.0, 3e-6) ==
        Approx(alpha * 0.5).epsilon(1e-12));
  // Detuning of a full filter period nulls the response: N_p pi delta tau = 4 pi.
  const double tau = 3e-6;
  const double delta = 1.0 / (2.0 * tau);
  CHECK(std::abs(physics::accumulated_phase(alpha, 0.0, 8, delta, tau)) < 1e-12);
}

TEST_CASE("dd_lineshape") {
  const double alpha = 0.57 * constants::kPi;
  const double f_t = 166666.0;
  const double tau_res = 1.0 / (2.0 * f_t);

  SUBCASE("on resonance the signal is (1 - J0(alpha))/2") {
    const auto s = physics::dd_lineshape(alpha, 8, std::vector<double>{tau_res}, f_t);
    CHECK(s.size() == 1);
    CHECK(s[0] == Approx((1.0 - physics::bessel_j0(alpha)) / 2.0).epsilon(1e-12));
  }

  SUBCASE("zero interaction gives zero signal") {
    const auto s = physics::dd_lineshape(0.0, 8,
                                         std::vector<double>{0.8 * tau_res, tau_res}, f_t);
    for (double v : s) {
      CHECK(v == Approx(0.0).epsilon(1e-15));
    }
  }

  SUBCASE("values stay within the J0 range") {
    std::vector<double> taus;
    for (int i = 0; i < 200; ++i) {
      taus.push_back(tau_res * (0.5 + 1e-2 * i));
    }
    const auto s = physics::dd_lineshape(4.0, 8, taus, f_t);
    for (double v : s) {
      CHECK(v >= 0.0);
      CHECK(v <= (1.0 + 0.403) / 2.0);  // min J0 ~ -0.4028
    }
  }

  SUBCASE("non-positive pulse spacing throws") {
    CHECK_THROWS_AS(physics::dd_lineshape(alpha, 8, std::vector<double>{0.0}, f_t),
                    std::invalid_argument);
    CHECK_THROWS_AS(physics::dd_lineshape(alpha, 8, std::vector<double>{-1e-6}, f_t),
                    std::invalid_argument);
  }
}

TEST_CASE("interaction params validation") {
  physics::InteractionParams p;
  p.alpha_rad = 1.0;
  CHECK_NOTHROW(p.validate());
  p.alpha_rad = -1.0;
  CHECK_THROWS_AS(p.validate(), config_error);
  p.alpha_rad = 1.0;
  p.gyromagnetic_hz_per_t = 0.0;
  CHECK_THROWS_AS(p.validate(), config_error);
}

TEST_CASE("phase average of the y readout is one half") {
  // (1/2pi) Int p0_y(alpha, phi) dphi = 1/2 for any alpha: the sine averages out.
  for (double alpha : {0.4, 1.0, 1.9783405802251253}) {
    const double avg = quadrature::integrate_adaptive(
                           [alpha](double phi) { return physics::p0_y_readout(alpha, phi); },
                           0.0, constants::kTwoPi, 1e-12) /
                       constants::kTwoPi;
    CHECK(avg == Approx(0.5).epsilon(1e-10));
  }
}
