#include "rdval/error.hpp"
#include "rdval/grid_density.hpp"
#include "rdval/normal.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace rdval;
using rdval::testing::oracle_cdf;

namespace {

GridDensity std_normal_grid(double half = 8.0, std::size_t n = 2001) {
    const Gaussian1D g(0.0, 1.0);
    return GridDensity::from_function(UniformGrid::centered(0.0, half, n),
                                      [&](double x) { return normal_pdf(x, g); });
}

}  // namespace

TEST(UniformGrid, Validation) {
    EXPECT_THROW(UniformGrid(0.0, 1.0, 4), DomainError);
    EXPECT_THROW(UniformGrid(0.0, 1.0, 1), DomainError);
    EXPECT_THROW(UniformGrid(1.0, 1.0, 5), DomainError);
    const UniformGrid g(-1.0, 1.0, 5);
    EXPECT_DOUBLE_EQ(g.spacing(), 0.5);
    EXPECT_DOUBLE_EQ(g.node(4), 1.0);
}

TEST(GridDensity, RejectsBadValues) {
    const UniformGrid g(0.0, 1.0, 3);
    EXPECT_THROW(GridDensity(g, {1.0, -1e-3, 1.0}), DomainError);
    EXPECT_THROW(GridDensity(g, {1.0, 1.0}), DomainError);
    EXPECT_THROW(GridDensity(g, {1.0, std::nan(""), 1.0}), DomainError);
}

TEST(GridDensity, SimpsonIsExactForCubics) {
    const auto gd = GridDensity::from_function(UniformGrid(0.0, 2.0, 11),
                                               [](double x) { return x * x * x + 1.0; });
    EXPECT_NEAR(gd.total_mass(), 6.0, 1e-13);
}

TEST(Integrate, FullRangeOfNormalizedDensity) {
    EXPECT_NEAR(integrate(std_normal_grid(), -8.0, 8.0), 1.0, 1e-6);
}

TEST(Integrate, EmptyInterval) {
    const auto gd = std_normal_grid();
    EXPECT_EQ(integrate(gd, 0.3217, 0.3217), 0.0);
    EXPECT_EQ(integrate(gd, 0.0, 0.0), 0.0);
}

TEST(Integrate, CentralNinetyFivePercent) {
    const auto gd = std_normal_grid();
    const double expected = oracle_cdf(1.95996) - oracle_cdf(-1.95996);
    EXPECT_NEAR(integrate(gd, -1.95996, 1.95996), expected, 1e-6);
    EXPECT_NEAR(integrate(gd, -1.95996, 1.95996), 0.95, 1e-5);
}

TEST(Integrate, OffNodeLimitsMatchOracle) {
    const auto gd = std_normal_grid();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int k = 0; k < 200; ++k) {
        double a = u(rng), b = u(rng);
        if (a > b) std::swap(a, b);
        ASSERT_NEAR(integrate(gd, a, b), oracle_cdf(b) - oracle_cdf(a), 1e-6);
    }
}

TEST(Integrate, ReversedLimitsThrow) {
    EXPECT_THROW((void)integrate(std_normal_grid(), 1.0, 0.0), DomainError);
    EXPECT_THROW((void)integrate(std_normal_grid(), std::nan(""), 0.0), DomainError);
}

TEST(Integrate, ClampsToSupport) {
    const auto gd = std_normal_grid();
    EXPECT_EQ(integrate(gd, -100.0, 100.0), gd.total_mass());
    EXPECT_EQ(integrate(gd, 20.0, 30.0), 0.0);
}

TEST(Integrate, Additive) {
    const auto gd = std_normal_grid(6.0, 401);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-7.0, 7.0);
    for (int k = 0; k < 500; ++k) {
        std::array<double, 3> p{u(rng), u(rng), u(rng)};
        std::sort(p.begin(), p.end());
        const double whole = integrate(gd, p[0], p[2]);
        const double parts = integrate(gd, p[0], p[1]) + integrate(gd, p[1], p[2]);
        ASSERT_NEAR(parts, whole, 1e-12 * std::max(whole, 1e-300) + 1e-16);
    }
}

TEST(CdfOf, Endpoints) {
    const auto gd = std_normal_grid();
    EXPECT_EQ(cdf_of(gd, gd.hi()), 1.0);
    EXPECT_EQ(cdf_of(gd, gd.lo()), 0.0);
    EXPECT_NEAR(cdf_of(gd, 0.0), 0.5, 1e-6);
}

TEST(CdfOf, MatchesPhi) {
    const auto gd = std_normal_grid();
    EXPECT_NEAR(cdf_of(gd, 1.6449), oracle_cdf(1.6449), 1e-6);
    EXPECT_NEAR(cdf_of(gd, 1.6449), 0.95, 1e-5);
}

TEST(CdfOf, NormalizesUnnormalizedDensity) {
    const auto gd = std_normal_grid().scaled(0.25);
    EXPECT_NEAR(cdf_of(gd, 0.0), 0.5, 1e-6);
}

TEST(CdfOf, DegenerateDensityThrows) {
    const GridDensity zero(UniformGrid(0.0, 1.0, 5), std::vector<double>(5, 0.0));
    EXPECT_THROW((void)cdf_of(zero, 0.5), DegenerateDensityError);
    EXPECT_THROW((void)zero.normalized(), DegenerateDensityError);
}

TEST(CdfOf, MonotoneAtEveryNode) {
    // Skewed, heavy-tailed shape to stress the within-panel split.
    const auto gd = GridDensity::from_function(UniformGrid(-3.0, 12.0, 301), [](double x) {
        return x < 0 ? std::exp(8 * x) : std::exp(-x) * (1 + std::sin(3 * x) * 0.9);
    });
    const auto cdf = cdf_at_nodes(gd);
    for (std::size_t i = 1; i < cdf.size(); ++i) ASSERT_GE(cdf[i], cdf[i - 1]) << i;
    double prev = 0.0;
    for (double x = -3.0; x <= 12.0; x += 0.0137) {
        const double c = cdf_of(gd, x);
        ASSERT_GE(c, prev) << x;
        prev = c;
    }
}

TEST(GridDensity, MomentsOfGriddedNormal) {
    const Gaussian1D g(0.7, 1.3);
    const auto gd = GridDensity::from_function(UniformGrid::centered(0.7, 13.0),
                                               [&](double x) { return normal_pdf(x, g); })
                        .scaled(0.3);
    EXPECT_NEAR(gd.mean(), 0.7, 1e-10);
    EXPECT_NEAR(gd.sd(), 1.3, 1e-10);
    EXPECT_NEAR(gd.normalized().total_mass(), 1.0, 1e-14);
}
