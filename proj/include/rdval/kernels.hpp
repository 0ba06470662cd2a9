#pragma once

// Gaussian-mixture accumulation used by every posterior-on-G quadrature:
//
//   out[j] = sum_i amps[i] * phi((points[j] - locs[i]) / scale) / scale
//
// The serial version is the reference. The OpenMP version splits the outer
// loop over output points and keeps the inner sum in the serial order, so
// the two produce bit-identical results.

#include <span>

namespace rdval {

enum class Execution { Serial, Parallel };

namespace kernels {

void gaussian_mixture_serial(std::span<const double> points, std::span<const double> locs,
                             std::span<const double> amps, double scale,
                             std::span<double> out);

void gaussian_mixture_parallel(std::span<const double> points, std::span<const double> locs,
                               std::span<const double> amps, double scale,
                               std::span<double> out);

void gaussian_mixture(Execution exec, std::span<const double> points,
                      std::span<const double> locs, std::span<const double> amps, double scale,
                      std::span<double> out);

}  // namespace kernels
}  // namespace rdval
