#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

// The smooth cutoff used everywhere in this project:
//
//   W(x) = 0 outside [1/4, 3/4],  W(x) = 1 on [1/3, 2/3],  0 <= W <= 1,
//
// realized with the standard C-infinity transition
// T(u) = psi(u) / (psi(u) + psi(1-u)), psi(t) = exp(-1/t), rising on
// [1/4, 1/3] and falling symmetrically on [2/3, 3/4].  W is symmetric about
// 1/2, so its Fourier transform (convention  f^(t) = Int f(u) e(-ut) du,
// e(x) = exp(2 pi i x))  factors as
//
//   W^(t) = e(-t/2) * A(t),   A real and even,  A(0) = Int W = 5/12.

namespace e2kit::weight {

double w(double x);
double w_deriv(double x);

inline constexpr double kWHat0 = 5.0 / 12.0;  // exact for this symmetric bump

// A(t): the real even factor of W^.  Adaptive quadrature, |error| <= tol.
double w_hat_even(double t, double tol = 1e-12);

std::complex<double> w_hat(double t, double tol = 1e-12);

// Fitted decay data for W^ (computed once, then cached):
//  - poly_c[B] with |W^(t)| <= poly_c[B] * min(1, |t|^-B), B = 1..4
//  - an exp(-c sqrt|t|) envelope, which is the true decay class of this bump
//    and is what the truncation logic uses
//  - max |W'| on a dense grid
struct DecayBounds {
  std::array<double, 5> poly_c{};
  double exp_coeff = 0;
  double exp_rate = 0;
  double w_deriv_max = 0;

  double envelope(double t) const;
  // bound on sum_{|k| >= k0} |W^(k*step)| for step > 0
  double progression_tail(double step, std::int64_t k0) const;
};

const DecayBounds& decay_bounds();

// Exact W^ samples on the progression {k*step : |k| <= kmax}; linear
// interpolation between samples for off-grid queries and full quadrature
// beyond the table.  Immutable after construction.
class FourierTable {
 public:
  FourierTable(double step, std::int64_t kmax, double tol = 1e-12);

  double step() const { return step_; }
  std::int64_t kmax() const { return kmax_; }
  double tolerance() const { return tol_; }

  double even_at(std::int64_t k) const;                // A(k*step), |k| <= kmax
  std::complex<double> at(std::int64_t k) const;       // W^(k*step)
  std::complex<double> interpolate(double t) const;    // off-grid helper

 private:
  double step_;
  std::int64_t kmax_;
  double tol_;
  std::vector<double> even_;  // A(k*step), k = 0..kmax
};

// One Poisson-summation check.  Direct form:
//   lhs = sum_m W(v m + u),  rhs = (1/v) sum_{|n| <= truncation} W^(n/v) e(un/v).
// Dual form:
//   lhs = sum_n W(n/v) e(un/v)  (finite),  rhs = v sum_m W^(v m - u) truncated.
struct PoissonCheck {
  double lhs = 0;
  std::complex<double> rhs;
  double discrepancy = 0;
};

PoissonCheck poisson_check(double v, double u, int truncation);
PoissonCheck poisson_check_dual(double v, double u, int truncation);

}  // namespace e2kit::weight
