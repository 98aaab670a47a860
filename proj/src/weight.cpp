#include "e2kit/weight.hpp"

#include <algorithm>
#include <cmath>

#include "e2kit/errors.hpp"
#include "e2kit/quadrature.hpp"
#include "e2kit/reduce.hpp"

namespace e2kit::weight {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double transition(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double g = 1.0 / u - 1.0 / (1.0 - u);
  if (g > 745.0) return 0.0;  // exp would overflow; limit is exact 0
  if (g < -745.0) return 1.0;
  return 1.0 / (1.0 + std::exp(g));
}

double transition_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double g = 1.0 / u - 1.0 / (1.0 - u);
  if (std::abs(g) > 700.0) return 0.0;
  double eg = std::exp(g);
  double gp = -1.0 / (u * u) - 1.0 / ((1.0 - u) * (1.0 - u));
  double denom = (1.0 + eg) * (1.0 + eg);
  return -gp * eg / denom;
}

}  // namespace

double w(double x) {
  if (x <= 0.25 || x >= 0.75) return 0.0;
  if (x >= 1.0 / 3.0 && x <= 2.0 / 3.0) return 1.0;
  if (x < 0.5) return transition(12.0 * (x - 0.25));
  return transition(12.0 * (0.75 - x));
}

double w_deriv(double x) {
  if (x <= 0.25 || x >= 0.75) return 0.0;
  if (x >= 1.0 / 3.0 && x <= 2.0 / 3.0) return 0.0;
  if (x < 0.5) return 12.0 * transition_deriv(12.0 * (x - 0.25));
  return -12.0 * transition_deriv(12.0 * (0.75 - x));
}

double w_hat_even(double t, double tol) {
  // A(t) = Int w_c(v) cos(2 pi v t) dv over [-1/4,1/4], w_c(v) = W(v + 1/2):
  // an exact plateau part over |v| <= 1/6 plus one transition integral.
  double plateau = (t == 0.0) ? (1.0 / 3.0) : std::sin(kPi * t / 3.0) / (kPi * t);
  double edge = quad::integrate_oscillatory(
      [t](double v) { return transition(3.0 - 12.0 * v) * std::cos(2.0 * kPi * v * t); },
      1.0 / 6.0, 0.25, std::abs(t), 0.5 * tol);
  return plateau + 2.0 * edge;
}

std::complex<double> w_hat(double t, double tol) {
  double a = w_hat_even(t, tol);
  // e(-t/2) = exp(-i pi t)
  return std::complex<double>(std::cos(kPi * t), -std::sin(kPi * t)) * a;
}

double DecayBounds::envelope(double t) const {
  t = std::abs(t);
  double best = kWHat0 + 1e-15;
  if (t >= 1.0) {
    for (int b = 1; b <= 4; ++b)
      best = std::min(best, poly_c[static_cast<std::size_t>(b)] * std::pow(t, -b));
  }
  best = std::min(best, exp_coeff * std::exp(-exp_rate * std::sqrt(t)));
  return best;
}

double DecayBounds::progression_tail(double step, std::int64_t k0) const {
  if (step <= 0 || k0 <= 0) return 1e300;
  // sum_{k >= k0} C exp(-c sqrt(k step)) bounded by the first term plus the
  // integral; Int_a^inf exp(-c sqrt(u)) du = 2 (sqrt(a)/c + 1/c^2) exp(-c sqrt(a))
  double a = static_cast<double>(k0) * step;
  double sq = std::sqrt(a);
  double e = std::exp(-exp_rate * sq);
  double integral = 2.0 * (sq / exp_rate + 1.0 / (exp_rate * exp_rate)) * e;
  double one_sided = exp_coeff * (e + integral / step);
  return 2.0 * one_sided;
}

namespace {

DecayBounds fit_decay_bounds() {
  DecayBounds b;
  // dense grid for max |W'|
  for (int i = 0; i <= 20000; ++i) {
    double x = i / 20000.0;
    b.w_deriv_max = std::max(b.w_deriv_max, std::abs(w_deriv(x)));
  }

  // log-spaced samples of |A(t)| out to t = 600
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i <= 240; ++i) {
    double t = std::pow(10.0, -0.2 + i * (std::log10(600.0) + 0.2) / 240.0);
    samples.emplace_back(t, std::abs(w_hat_even(t, 1e-13)));
  }

  b.poly_c.fill(kWHat0);
  for (auto& [t, a] : samples)
    for (int B = 1; B <= 4; ++B)
      b.poly_c[static_cast<std::size_t>(B)] =
          std::max(b.poly_c[static_cast<std::size_t>(B)], a * std::pow(t, B) * 1.05);

  // exp(-c sqrt t) envelope: least-squares slope of log|A| against sqrt(t)
  // over the decaying range, then deflate the rate and inflate the constant
  // until it majorizes every sample
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (auto& [t, a] : samples) {
    if (t < 5.0 || a < 1e-300) continue;
    double x = std::sqrt(t), y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  double slope = (n > 1) ? (n * sxy - sx * sy) / (n * sxx - sx * sx) : -1.0;
  b.exp_rate = std::max(0.25, -slope * 0.9);
  b.exp_coeff = kWHat0;
  for (auto& [t, a] : samples)
    b.exp_coeff = std::max(b.exp_coeff, a * std::exp(b.exp_rate * std::sqrt(t)) * 1.1);
  return b;
}

}  // namespace

const DecayBounds& decay_bounds() {
  static const DecayBounds fitted = fit_decay_bounds();
  return fitted;
}

FourierTable::FourierTable(double step, std::int64_t kmax, double tol)
    : step_(step), kmax_(kmax), tol_(tol) {
  if (step <= 0) throw std::invalid_argument("FourierTable: step must be > 0");
  if (kmax < 0) throw std::invalid_argument("FourierTable: kmax must be >= 0");
  even_.resize(static_cast<std::size_t>(kmax) + 1);
  for (std::int64_t k = 0; k <= kmax; ++k)
    even_[static_cast<std::size_t>(k)] = w_hat_even(static_cast<double>(k) * step, tol);
}

double FourierTable::even_at(std::int64_t k) const {
  std::int64_t a = k < 0 ? -k : k;
  return even_[static_cast<std::size_t>(a)];
}

std::complex<double> FourierTable::at(std::int64_t k) const {
  double t = static_cast<double>(k) * step_;
  return std::complex<double>(std::cos(kPi * t), -std::sin(kPi * t)) * even_at(k);
}

std::complex<double> FourierTable::interpolate(double t) const {
  // linear interpolation error <= step^2 max|A''| / 8 with max|A''| < 0.42;
  // steps beyond ~1.39e-4 cannot meet the 1e-9 budget, so fall back to
  // exact quadrature
  if (step_ > 1.39e-4) return w_hat(t, tol_);
  double s = std::abs(t) / step_;
  auto k = static_cast<std::int64_t>(s);
  if (k + 1 > kmax_) return w_hat(t, tol_);
  double frac = s - static_cast<double>(k);
  double a = even_[static_cast<std::size_t>(k)] * (1.0 - frac) +
             even_[static_cast<std::size_t>(k) + 1] * frac;
  return std::complex<double>(std::cos(kPi * t), -std::sin(kPi * t)) * a;
}

PoissonCheck poisson_check(double v, double u, int truncation) {
  if (v <= 0) throw std::invalid_argument("poisson_check: v must be > 0");
  if (truncation < 1) throw std::invalid_argument("poisson_check: truncation must be >= 1");
  PoissonCheck out;

  // lhs is a finite sum: W(vm+u) != 0 needs vm+u in (1/4, 3/4)
  auto m_lo = static_cast<std::int64_t>(std::ceil((0.25 - u) / v)) - 1;
  auto m_hi = static_cast<std::int64_t>(std::floor((0.75 - u) / v)) + 1;
  Kahan lhs;
  for (std::int64_t m = m_lo; m <= m_hi; ++m)
    lhs.add(w(v * static_cast<double>(m) + u));
  out.lhs = lhs.value();

  FourierTable table(1.0 / v, truncation, 1e-13);
  Kahan re, im;
  for (std::int64_t n = -truncation; n <= truncation; ++n) {
    std::complex<double> wh = table.at(n);
    double ang = 2.0 * kPi * u * static_cast<double>(n) / v;
    std::complex<double> term = wh * std::complex<double>(std::cos(ang), std::sin(ang));
    re.add(term.real());
    im.add(term.imag());
  }
  out.rhs = std::complex<double>(re.value(), im.value()) / v;
  out.discrepancy = std::abs(std::complex<double>(out.lhs, 0.0) - out.rhs);
  return out;
}

PoissonCheck poisson_check_dual(double v, double u, int truncation) {
  if (v <= 0) throw std::invalid_argument("poisson_check_dual: v must be > 0");
  if (truncation < 1) throw std::invalid_argument("poisson_check_dual: truncation must be >= 1");
  PoissonCheck out;

  // lhs = sum_n W(n/v) e(un/v): support n/v in (1/4, 3/4)
  auto n_lo = static_cast<std::int64_t>(std::ceil(0.25 * v)) - 1;
  auto n_hi = static_cast<std::int64_t>(std::floor(0.75 * v)) + 1;
  Kahan lre, lim;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    double wv = w(static_cast<double>(n) / v);
    if (wv == 0.0) continue;
    double ang = 2.0 * kPi * u * static_cast<double>(n) / v;
    lre.add(wv * std::cos(ang));
    lim.add(wv * std::sin(ang));
  }
  std::complex<double> lhs(lre.value(), lim.value());

  Kahan rre, rim;
  for (std::int64_t m = -truncation; m <= truncation; ++m) {
    std::complex<double> wh = w_hat(v * static_cast<double>(m) - u, 1e-13);
    rre.add(wh.real());
    rim.add(wh.imag());
  }
  out.rhs = std::complex<double>(rre.value(), rim.value()) * v;
  out.lhs = std::abs(lhs);  // reported magnitude; discrepancy uses the complex values
  out.discrepancy = std::abs(lhs - out.rhs);
  return out;
}

}  // namespace e2kit::weight
