#include "rdval/kernels.hpp"

#include "rdval/error.hpp"

#include <cmath>
#include <cstddef>

namespace rdval::kernels {
namespace {

void check_shapes(std::span<const double> points, std::span<const double> locs,
                  std::span<const double> amps, double scale, std::span<double> out) {
    if (locs.size() != amps.size() || points.size() != out.size()) {
        throw DomainError("gaussian_mixture: mismatched span sizes");
    }
    if (!(scale > 0.0)) throw DomainError("gaussian_mixture: scale must be positive");
}

// Inner sum for one output point; shared so both drivers agree bitwise.
inline double mixture_at(double x, std::span<const double> locs, std::span<const double> amps,
                         double inv_scale, double norm) {
    double acc = 0.0;
    for (std::size_t i = 0; i < locs.size(); ++i) {
        if (amps[i] == 0.0) continue;
        const double u = (x - locs[i]) * inv_scale;
        acc += amps[i] * std::exp(-0.5 * u * u);
    }
    return acc * norm;
}

}  // namespace

void gaussian_mixture_serial(std::span<const double> points, std::span<const double> locs,
                             std::span<const double> amps, double scale,
                             std::span<double> out) {
    check_shapes(points, locs, amps, scale, out);
    const double inv_scale = 1.0 / scale;
    const double norm = 0.398942280401432677939946059934 * inv_scale;
    for (std::size_t j = 0; j < points.size(); ++j) {
        out[j] = mixture_at(points[j], locs, amps, inv_scale, norm);
    }
}

void gaussian_mixture_parallel(std::span<const double> points, std::span<const double> locs,
                               std::span<const double> amps, double scale,
                               std::span<double> out) {
    check_shapes(points, locs, amps, scale, out);
    const double inv_scale = 1.0 / scale;
    const double norm = 0.398942280401432677939946059934 * inv_scale;
    const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < n; ++j) {
        const auto k = static_cast<std::size_t>(j);
        out[k] = mixture_at(points[k], locs, amps, inv_scale, norm);
    }
}

void gaussian_mixture(Execution exec, std::span<const double> points,
                      std::span<const double> locs, std::span<const double> amps, double scale,
                      std::span<double> out) {
    if (exec == Execution::Parallel) {
        gaussian_mixture_parallel(points, locs, amps, scale, out);
    } else {
        gaussian_mixture_serial(points, locs, amps, scale, out);
    }
}

}  // namespace rdval::kernels
