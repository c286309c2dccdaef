#pragma once

#include <cmath>
#include <span>

#include <Eigen/Dense>

#include "fairscope/error.hpp"

namespace fairscope {

/// Lower bound on a fitted standard deviation, in target units. Keeps the
/// divergence finite for groups whose predictions are all identical.
inline constexpr double kSigmaFloor = 1e-9;

/// Normal density fitted to one group's predictions.
struct GroupDensity {
    double mu = 0.0;
    double sigma = 1.0;
    std::size_t count = 0;

    bool operator==(const GroupDensity&) const = default;
};

/// Sample mean and population (divide-by-n) standard deviation, floored.
inline GroupDensity fit_normal(std::span<const double> values)
{
    if (values.empty()) {
        throw DataError("cannot fit a normal density to an empty group");
    }
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw DataError("non-finite value in a group's predictions");
        }
        sum += v;
    }
    const double mu = sum / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mu) * (v - mu);
    }
    return GroupDensity{mu, std::max(std::sqrt(ss / n), kSigmaFloor), values.size()};
}

inline GroupDensity fit_normal(const Eigen::VectorXd& values)
{
    return fit_normal(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// KL(p || q) between two normals:
///   log(sigma_q / sigma_p) + (sigma_p^2 + (mu_p - mu_q)^2) / (2 sigma_q^2) - 1/2
inline double kl_gaussian(const GroupDensity& p, const GroupDensity& q)
{
    const double ratio = p.sigma / q.sigma;
    const double gap = (p.mu - q.mu) / q.sigma;
    // Rounding can leave a tiny negative value for identical densities.
    const double kl = -std::log(ratio) + 0.5 * (ratio * ratio + gap * gap) - 0.5;
    return kl > 0.0 ? kl : 0.0;
}

}  // namespace fairscope
