#include "rdval/grid_density.hpp"

#include "rdval/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rdval {

UniformGrid::UniformGrid(double lo, double hi, std::size_t n_points)
    : lo_(lo), hi_(hi), n_(n_points), h_(0.0) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw DomainError("grid requires finite lo < hi");
    }
    if (n_points < 3 || n_points % 2 == 0) {
        throw DomainError("grid requires an odd number of points >= 3, got " +
                          std::to_string(n_points));
    }
    h_ = (hi - lo) / static_cast<double>(n_points - 1);
}

UniformGrid UniformGrid::centered(double center, double half_width, std::size_t n_points) {
    return UniformGrid(center - half_width, center + half_width, n_points);
}

std::vector<double> UniformGrid::nodes() const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

std::vector<double> UniformGrid::simpson_weights() const {
    std::vector<double> w(n_);
    const double third = h_ / 3.0;
    for (std::size_t i = 0; i < n_; ++i) {
        if (i == 0 || i + 1 == n_) {
            w[i] = third;
        } else {
            w[i] = (i % 2 == 1 ? 4.0 : 2.0) * third;
        }
    }
    return w;
}

GridDensity::GridDensity(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), cumulative_(grid_.size(), 0.0) {
    if (values_.size() != grid_.size()) {
        throw DomainError("GridDensity: " + std::to_string(values_.size()) +
                          " values for a grid of " + std::to_string(grid_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v) || v < 0.0) {
            throw DomainError("GridDensity values must be finite and non-negative");
        }
    }
    const double h = grid_.spacing();
    for (std::size_t k = 0; k + 2 < values_.size(); k += 2) {
        const double f0 = values_[k];
        const double f1 = values_[k + 1];
        const double f2 = values_[k + 2];
        const double panel = h / 3.0 * (f0 + 4.0 * f1 + f2);
        const double first = std::clamp(h / 12.0 * (5.0 * f0 + 8.0 * f1 - f2), 0.0, panel);
        cumulative_[k + 1] = cumulative_[k] + first;
        cumulative_[k + 2] = cumulative_[k] + panel;
    }
}

GridDensity GridDensity::from_function(const UniformGrid& grid,
                                       const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.node(i));
    return GridDensity(grid, std::move(v));
}

double GridDensity::antiderivative(double x) const {
    if (x <= lo()) return 0.0;
    if (x >= hi()) return total_mass();
    const double h = grid_.spacing();
    const double pos = (x - lo()) / h;
    auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= size()) k = size() - 2;
    const double t = std::clamp(pos - static_cast<double>(k), 0.0, 1.0);
    const double cell = cumulative_[k + 1] - cumulative_[k];
    if (t == 0.0 || cell == 0.0) return cumulative_[k];
    const double f0 = values_[k];
    const double f1 = values_[k + 1];
    const double trap = 0.5 * (f0 + f1);
    const double frac = trap > 0.0 ? (t * f0 + 0.5 * t * t * (f1 - f0)) / trap : t;
    return cumulative_[k] + std::clamp(frac, 0.0, 1.0) * cell;
}

GridDensity GridDensity::scaled(double factor) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= factor;
    return GridDensity(grid_, std::move(v));
}

GridDensity GridDensity::normalized() const {
    const double mass = total_mass();
    if (!(mass >= kDegenerateMass)) {
        throw DegenerateDensityError("cannot normalize a density with total mass " +
                                     std::to_string(mass));
    }
    return scaled(1.0 / mass);
}

double GridDensity::mean() const {
    const double mass = total_mass();
    if (!(mass >= kDegenerateMass)) throw DegenerateDensityError("mean of a zero-mass density");
    const auto w = grid_.simpson_weights();
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) m += w[i] * grid_.node(i) * values_[i];
    return m / mass;
}

double GridDensity::sd() const {
    const double mu = mean();
    const auto w = grid_.simpson_weights();
    double v = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double d = grid_.node(i) - mu;
        v += w[i] * d * d * values_[i];
    }
    return std::sqrt(v / total_mass());
}

double integrate(const GridDensity& gd, double a, double b) {
    if (std::isnan(a) || std::isnan(b)) throw DomainError("integrate: NaN limit");
    if (a > b) throw DomainError("integrate: lower limit exceeds upper limit");
    return gd.antiderivative(b) - gd.antiderivative(a);
}

double cdf_of(const GridDensity& gd, double x) {
    const double mass = gd.total_mass();
    if (!(mass >= kDegenerateMass)) {
        throw DegenerateDensityError("cdf_of: density has zero total mass");
    }
    return std::clamp(gd.antiderivative(x) / mass, 0.0, 1.0);
}

std::vector<double> cdf_at_nodes(const GridDensity& gd) {
    const double mass = gd.total_mass();
    if (!(mass >= kDegenerateMass)) {
        throw DegenerateDensityError("cdf_at_nodes: density has zero total mass");
    }
    std::vector<double> out(gd.cumulative().begin(), gd.cumulative().end());
    for (double& c : out) c = std::min(c / mass, 1.0);
    return out;
}

}  // namespace rdval
