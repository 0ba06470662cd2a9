#include "rdval/normal.hpp"

#include "rdval/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rdval {

Gaussian1D::Gaussian1D(double mean, double sd) : mean_(mean), sd_(sd) {
    if (!std::isfinite(mean) || !std::isfinite(sd) || !(sd > 0.0)) {
        throw DomainError("Gaussian1D requires finite mean and sd > 0 (got mean=" +
                          std::to_string(mean) + ", sd=" + std::to_string(sd) + ")");
    }
}

void require_open_correlation(double rho) {
    if (!(rho > -1.0 && rho < 1.0)) {
        throw DomainError("correlation must lie in (-1, 1), got " + std::to_string(rho));
    }
}

BivariateGaussian::BivariateGaussian(Gaussian1D g, Gaussian1D delta, double rho)
    : g_(g), delta_(delta), rho_(rho) {
    require_open_correlation(rho);
}

double BivariateGaussian::pdf(double g, double delta) const {
    const double zg = (g - g_.mean()) / g_.sd();
    const double zd = (delta - delta_.mean()) / delta_.sd();
    const double one_minus_r2 = 1.0 - rho_ * rho_;
    const double q = (zg * zg - 2.0 * rho_ * zg * zd + zd * zd) / one_minus_r2;
    return std::exp(-0.5 * q) /
           (2.0 * std::numbers::pi * g_.sd() * delta_.sd() * std::sqrt(one_minus_r2));
}

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("std_normal_quantile requires 0 < p < 1, got " + std::to_string(p));
    }
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                     67265.770927008700853) * r + 45921.953931549871457) * r +
                   13731.693765509461125) * r + 1971.5909503065514427) * r +
                 133.14166789178437745) * r + 3.387132872796366608) /
               (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                     39307.89580009271061) * r + 21213.794301586595867) * r +
                   5394.1960214247511077) * r + 687.1870074920579083) * r +
                 42.313330701600911252) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
    } else {
        r -= 5.0;
        x = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
    }
    return q < 0.0 ? -x : x;
}

double normal_pdf(double x, const Gaussian1D& g) noexcept {
    return std_normal_pdf((x - g.mean()) / g.sd()) / g.sd();
}

Gaussian1D conditional_g_given_delta(const BivariateGaussian& bvn, double delta) {
    const auto& g = bvn.g();
    const auto& d = bvn.delta();
    const double rho = bvn.rho();
    return Gaussian1D(g.mean() + rho * (g.sd() / d.sd()) * (delta - d.mean()),
                      g.sd() * std::sqrt(1.0 - rho * rho));
}

}  // namespace rdval
