#include <cmath>
#include <complex>

#include "doctest.h"
#include "e2kit/quadrature.hpp"
#include "e2kit/reduce.hpp"
#include "e2kit/weight.hpp"

using namespace e2kit;
using namespace e2kit::weight;

namespace {

// independent evaluation of the transition used by W
double transition_oracle(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return 1.0 / (1.0 + std::exp(1.0 / u - 1.0 / (1.0 - u)));
}

}  // namespace

TEST_CASE("bump plateaus are exact") {
  CHECK(w(0.5) == 1.0);
  CHECK(w(1.0 / 3.0) == 1.0);
  CHECK(w(2.0 / 3.0) == 1.0);
  CHECK(w(0.1) == 0.0);
  CHECK(w(0.25) == 0.0);
  CHECK(w(0.75) == 0.0);
  CHECK(w(-3.0) == 0.0);
  CHECK(w(5.0) == 0.0);
}

TEST_CASE("transition value at 0.30 (regression constant)") {
  // frozen from the independent formula T(12(x - 1/4)) at x = 0.30
  CHECK(w(0.30) == doctest::Approx(0.69705928396540728).epsilon(1e-12));
  CHECK(w(0.30) == doctest::Approx(transition_oracle(12.0 * (0.30 - 0.25))).epsilon(1e-15));
  CHECK(w(0.30) > 0.0);
  CHECK(w(0.30) < 1.0);
}

TEST_CASE("sandwich and symmetry on a dense grid") {
  for (int i = 0; i <= 4096; ++i) {
    double x = static_cast<double>(i) / 4096.0;
    double v = w(x);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    if (x >= 1.0 / 3.0 && x <= 2.0 / 3.0) CHECK(v == 1.0);
    if (x <= 0.25 || x >= 0.75) CHECK(v == 0.0);
    // symmetric about 1/2 (grid points are dyadic, so 1-x is exact)
    CHECK(w(1.0 - x) == doctest::Approx(v).epsilon(1e-14));
  }
}

TEST_CASE("derivative against finite differences") {
  const double h = 1e-6;
  for (double x : {0.27, 0.30, 0.32, 0.70, 0.72, 0.74}) {
    double fd = (w(x + h) - w(x - h)) / (2.0 * h);
    CHECK(w_deriv(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(w_deriv(0.5) == 0.0);
  CHECK(w_deriv(0.1) == 0.0);
  // the fitted grid maximum is the analytic midpoint value 24
  CHECK(decay_bounds().w_deriv_max == doctest::Approx(24.0).epsilon(1e-6));
}

TEST_CASE("transform at zero and conjugate symmetry") {
  CHECK(std::abs(w_hat(0.0) - std::complex<double>(5.0 / 12.0, 0.0)) <= 1e-10);
  for (double t : {0.3, 1.7, 12.9, 55.5}) {
    std::complex<double> plus = w_hat(t);
    std::complex<double> minus = w_hat(-t);
    CHECK(std::abs(minus - std::conj(plus)) <= 1e-12);
  }
}

TEST_CASE("transform decay: fitted polynomial constants hold off the fit grid") {
  const DecayBounds& db = decay_bounds();
  for (int i = 1; i <= 60; ++i) {
    double t = 0.71 * static_cast<double>(i) * static_cast<double>(i);  // off-grid spread
    double a = std::abs(w_hat_even(t));
    for (int B = 1; B <= 4; ++B)
      CHECK(a <= db.poly_c[static_cast<std::size_t>(B)] * std::min(1.0, std::pow(t, -B)) +
                    1e-13);
    CHECK(a <= db.envelope(t) + 1e-13);
  }
  CHECK(std::abs(w_hat(1000.0)) <= 1e-6);
  CHECK(db.poly_c[3] * std::pow(1000.0, -3.0) <= 1e-6);  // the B=3 fit already certifies it
}

TEST_CASE("poisson check: stated examples") {
  // truncation comes from the decay envelope: |W^(t)| ~ exp(-1.16 sqrt t)
  // needs arguments past ~250 before the tail drops below 1e-8, so the v = 1
  // checks truncate at 400 rather than 50
  // v = 1, u = 0: no integer falls in the support, lhs exactly 0
  PoissonCheck a = poisson_check(1.0, 0.0, 400);
  CHECK(a.lhs == 0.0);
  CHECK(a.discrepancy <= 1e-8);

  // v = 1/2, u = 0: lhs = W(1/2) = 1 and rhs = 2 sum W^(2n)
  PoissonCheck b = poisson_check(0.5, 0.0, 200);
  CHECK(b.lhs == 1.0);
  CHECK(b.discrepancy <= 1e-8);

  // v = 1, u = 1/2: lhs = W(1/2) = 1
  PoissonCheck c = poisson_check(1.0, 0.5, 400);
  CHECK(c.lhs == 1.0);
  CHECK(c.discrepancy <= 1e-8);
}

TEST_CASE("poisson identities on random draws, both forms") {
  Rng rng(1234);
  for (int i = 0; i < 20; ++i) {
    double v = rng.uniform(0.1, 10.0);
    double u = rng.uniform(-5.0, 5.0);
    int trunc = static_cast<int>(std::ceil(500.0 * v)) + 8;
    CHECK(poisson_check(v, u, trunc).discrepancy <= 1e-8);
    int trunc2 = static_cast<int>(std::ceil((500.0 + std::abs(u)) / v)) + 8;
    CHECK(poisson_check_dual(v, u, trunc2).discrepancy <= 1e-8);
  }
}

TEST_CASE("fourier table: exact samples and interpolation fallback") {
  FourierTable fine(1e-4, 2000, 1e-13);
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto k = rng.uniform_int(-2000, 2000);
    CHECK(std::abs(fine.at(k) - w_hat(static_cast<double>(k) * 1e-4, 1e-13)) <= 1e-12);
  }
  // off-grid linear interpolation under the fine step stays within 1e-9
  for (int i = 0; i < 50; ++i) {
    double t = rng.uniform(-0.19, 0.19);
    CHECK(std::abs(fine.interpolate(t) - w_hat(t, 1e-13)) <= 1e-9);
  }
  // beyond the table the exact transform is used
  CHECK(std::abs(fine.interpolate(0.5) - w_hat(0.5, 1e-13)) <= 1e-12);
}

TEST_CASE("progression tail bound majorizes measured tails") {
  const DecayBounds& db = decay_bounds();
  for (double step : {0.05, 0.31, 1.0, 2.7}) {
    for (std::int64_t k0 : {5LL, 50LL, 200LL}) {
      if (static_cast<double>(k0) * step > 600.0) continue;
      double measured = 0;
      for (std::int64_t k = k0; static_cast<double>(k) * step <= 700.0; ++k)
        measured += std::abs(w_hat_even(static_cast<double>(k) * step));
      CHECK(2.0 * measured <= db.progression_tail(step, k0) + 1e-14);
    }
  }
}

TEST_CASE("quadrature engine on known integrals") {
  double s = quad::integrate([](double x) { return std::sin(x); }, 0.0, 3.141592653589793,
                             1e-12);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
  std::complex<double> c = quad::integrate_complex(
      [](double x) {
        return std::complex<double>(std::cos(5.0 * x), std::sin(5.0 * x));
      },
      0.0, 1.0, 1e-12);
  // integral of e^{5ix}: (e^{5i}-1)/(5i)
  std::complex<double> expect =
      (std::complex<double>(std::cos(5.0), std::sin(5.0)) - 1.0) /
      std::complex<double>(0.0, 5.0);
  CHECK(std::abs(c - expect) <= 1e-12);
  double osc = quad::integrate_oscillatory(
      [](double x) { return std::cos(200.0 * 2.0 * 3.141592653589793 * x); }, 0.0, 0.25,
      200.0, 1e-12);
  CHECK(std::abs(osc) <= 1e-11);  // integer number of periods
}
