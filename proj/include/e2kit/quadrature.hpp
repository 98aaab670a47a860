#pragma once

#include <complex>
#include <functional>

namespace e2kit::quad {

// Adaptive Gauss-Kronrod (G7, K15) to an absolute tolerance.  Throws
// ComputeError if the interval budget is exhausted before convergence.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_intervals = 4000);

std::complex<double> integrate_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double abs_tol, int max_intervals = 4000);

// Same, but the caller declares an oscillation frequency (cycles per unit):
// the interval is pre-split into ~2.5 panels per cycle before the adaptive
// stage, which keeps the error estimate honest for e(freq * t) factors.
double integrate_oscillatory(const std::function<double(double)>& f, double a,
                             double b, double freq, double abs_tol);

std::complex<double> integrate_oscillatory_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b,
    double freq, double abs_tol);

}  // namespace e2kit::quad
