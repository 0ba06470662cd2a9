#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rdval {

inline constexpr std::size_t kDefaultGridPoints = 2001;

/// Uniform grid of an odd number of nodes (>= 3) on [lo, hi], so composite
/// Simpson applies over the whole range.
class UniformGrid {
public:
    UniformGrid(double lo, double hi, std::size_t n_points);

    /// Grid of n_points spanning center +/- half_width.
    static UniformGrid centered(double center, double half_width,
                                std::size_t n_points = kDefaultGridPoints);

    [[nodiscard]] double lo() const noexcept { return lo_; }
    [[nodiscard]] double hi() const noexcept { return hi_; }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double spacing() const noexcept { return h_; }
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return i + 1 == n_ ? hi_ : lo_ + static_cast<double>(i) * h_;
    }
    [[nodiscard]] std::vector<double> nodes() const;

    /// Composite Simpson weights (h/3 * {1,4,2,...,4,1}).
    [[nodiscard]] std::vector<double> simpson_weights() const;

    friend bool operator==(const UniformGrid&, const UniformGrid&) = default;

private:
    double lo_;
    double hi_;
    std::size_t n_;
    double h_;
};

/// Non-negative, possibly unnormalized density sampled on a UniformGrid.
///
/// The running integral is built once at construction: over each pair of cells
/// it equals the Simpson panel exactly, and the split inside a panel uses the
/// three-point quadratic through the panel nodes. Limits that fall between
/// nodes take the fraction of the cell mass given by the linearly
/// interpolated integrand. Every integral is a difference of one running
/// antiderivative, so integrals over adjacent ranges add up to rounding and
/// the cumulative is monotone.
class GridDensity {
public:
    /// Throws DomainError on size mismatch, negative or non-finite values.
    GridDensity(UniformGrid grid, std::vector<double> values);

    static GridDensity from_function(const UniformGrid& grid,
                                     const std::function<double(double)>& f);

    [[nodiscard]] const UniformGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] double lo() const noexcept { return grid_.lo(); }
    [[nodiscard]] double hi() const noexcept { return grid_.hi(); }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Simpson integral over the full grid.
    [[nodiscard]] double total_mass() const noexcept { return cumulative_.back(); }

    /// Running integral from lo to each node.
    [[nodiscard]] std::span<const double> cumulative() const noexcept { return cumulative_; }

    /// Antiderivative from lo to x; x is clamped to [lo, hi].
    [[nodiscard]] double antiderivative(double x) const;

    [[nodiscard]] GridDensity scaled(double factor) const;

    /// Rescaled to unit mass. Throws DegenerateDensityError when mass < 1e-300.
    [[nodiscard]] GridDensity normalized() const;

    /// Mean and standard deviation of the normalized density.
    [[nodiscard]] double mean() const;
    [[nodiscard]] double sd() const;

private:
    UniformGrid grid_;
    std::vector<double> values_;
    std::vector<double> cumulative_;
};

inline constexpr double kDegenerateMass = 1e-300;

/// Integral of gd over [a, b]. Limits outside [lo, hi] are clamped to the
/// grid support (the density is taken as zero outside it). Throws DomainError
/// when a > b or a limit is NaN.
[[nodiscard]] double integrate(const GridDensity& gd, double a, double b);

/// Normalized cumulative distribution at x: integrate(lo, x) / total mass.
/// Throws DegenerateDensityError when the total mass is below 1e-300.
[[nodiscard]] double cdf_of(const GridDensity& gd, double x);

/// Normalized cumulative at every grid node.
[[nodiscard]] std::vector<double> cdf_at_nodes(const GridDensity& gd);

}  // namespace rdval
