#pragma once

// Univariate and bivariate normal kernels.

namespace rdval {

class Gaussian1D {
public:
    /// Throws DomainError unless sd > 0 and both arguments are finite.
    Gaussian1D(double mean, double sd);

    [[nodiscard]] double mean() const noexcept { return mean_; }
    [[nodiscard]] double sd() const noexcept { return sd_; }

    friend bool operator==(const Gaussian1D&, const Gaussian1D&) = default;

private:
    double mean_;
    double sd_;
};

/// Joint normal law of (G, delta) with correlation rho.
class BivariateGaussian {
public:
    BivariateGaussian(Gaussian1D g, Gaussian1D delta, double rho);

    [[nodiscard]] const Gaussian1D& g() const noexcept { return g_; }
    [[nodiscard]] const Gaussian1D& delta() const noexcept { return delta_; }
    [[nodiscard]] double rho() const noexcept { return rho_; }

    /// Joint density at (g, delta).
    [[nodiscard]] double pdf(double g, double delta) const;

private:
    Gaussian1D g_;
    Gaussian1D delta_;
    double rho_;
};

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;

/// Standard normal density.
[[nodiscard]] double std_normal_pdf(double x) noexcept;

/// Phi(x), evaluated through erfc so both tails keep full relative accuracy.
[[nodiscard]] double std_normal_cdf(double x) noexcept;

/// Phi^{-1}(p) by Wichura's AS241 (PPND16), relative accuracy about 1e-16.
/// Throws DomainError for p outside (0, 1).
[[nodiscard]] double std_normal_quantile(double p);

[[nodiscard]] double normal_pdf(double x, const Gaussian1D& g) noexcept;

/// Law of G given delta under a bivariate normal.
[[nodiscard]] Gaussian1D conditional_g_given_delta(const BivariateGaussian& bvn, double delta);

/// Throws DomainError unless -1 < rho < 1.
void require_open_correlation(double rho);

}  // namespace rdval
