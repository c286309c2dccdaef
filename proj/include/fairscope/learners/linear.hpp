#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairscope/error.hpp"
#include "fairscope/learners/model.hpp"

namespace fairscope {

namespace linear_detail {

inline void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    if (x.rows() == 0) {
        throw DataError("cannot fit on an empty dataset");
    }
    if (x.rows() != y.size()) {
        throw DataError("feature rows and target length differ");
    }
    if (!x.allFinite() || !y.allFinite()) {
        throw DataError("inputs contain non-finite values");
    }
}

inline std::vector<std::string> default_names(Eigen::Index p)
{
    std::vector<std::string> names;
    for (Eigen::Index j = 0; j < p; ++j) {
        names.push_back("x" + std::to_string(j));
    }
    return names;
}

}  // namespace linear_detail

/// Least squares with an intercept. Columns are centered and scaled to unit
/// variance before solving the normal equations; if that system is
/// numerically singular, ridge_eps is added to its diagonal once.
inline Model fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double ridge_eps = 1e-8)
{
    linear_detail::check_inputs(x, y);
    const auto n = static_cast<double>(x.rows());
    const Eigen::Index p = x.cols();
    const Eigen::RowVectorXd mean_x = x.colwise().mean();
    const double mean_y = y.mean();

    Eigen::MatrixXd z = x.rowwise() - mean_x;
    Eigen::VectorXd scale(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double sd = std::sqrt(z.col(j).squaredNorm() / n);
        scale[j] = sd > 0.0 ? sd : 0.0;
        if (sd > 0.0) {
            z.col(j) /= sd;
        } else {
            z.col(j).setZero();
        }
    }
    const Eigen::VectorXd yc = y.array() - mean_y;

    Eigen::VectorXd w_scaled = Eigen::VectorXd::Zero(p);
    if (p > 0) {
        Eigen::MatrixXd gram = z.transpose() * z / n;
        const Eigen::VectorXd rhs = z.transpose() * yc / n;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        const bool singular = ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.rcond() < 1e-12;
        if (singular) {
            gram.diagonal().array() += ridge_eps;
            ldlt.compute(gram);
        }
        w_scaled = ldlt.solve(rhs);
        if (!w_scaled.allFinite()) {
            throw DataError("least-squares solve produced non-finite weights; increase ridge_eps");
        }
    }

    Model model;
    model.kind = LearnerKind::ols;
    model.config = preset("linear");
    model.config.ridge_eps = ridge_eps;
    model.feature_names = linear_detail::default_names(p);
    model.weights.resize(static_cast<std::size_t>(p));
    double intercept = mean_y;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double w = scale[j] > 0.0 ? w_scaled[j] / scale[j] : 0.0;
        model.weights[static_cast<std::size_t>(j)] = w;
        intercept -= w * mean_x[j];
    }
    model.intercept = intercept;
    model.base_score = mean_y;
    return model;
}

struct LassoFit {
    Model model;
    /// Objective value after each completed sweep.
    std::vector<double> objective_per_sweep;
};

/// Cyclic coordinate descent with soft-thresholding on
///   (1/(2n)) ||Xw + b - y||^2 + lambda_l1 ||w||_1,
/// intercept unpenalized. Uses covariance updates, so a sweep costs O(p^2).
/// Stops once the largest coordinate change in a sweep falls below tol;
/// running out of sweeps is reported through info.converged, not thrown.
inline LassoFit fit_lasso_traced(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda_l1, double tol,
                                 std::uint32_t max_sweeps)
{
    linear_detail::check_inputs(x, y);
    if (!(lambda_l1 >= 0.0) || !std::isfinite(lambda_l1)) {
        throw ConfigError("lambda_l1 must be finite and non-negative");
    }
    const auto n = static_cast<double>(x.rows());
    const Eigen::Index p = x.cols();
    const Eigen::RowVectorXd mean_x = x.colwise().mean();
    const double mean_y = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - mean_x;
    const Eigen::VectorXd yc = y.array() - mean_y;
    const Eigen::MatrixXd gram = xc.transpose() * xc / n;
    const Eigen::VectorXd corr = xc.transpose() * yc / n;
    const double yy = yc.squaredNorm() / n;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    // gw = gram * w, kept current after each coordinate move.
    Eigen::VectorXd gw = Eigen::VectorXd::Zero(p);
    auto objective = [&] { return 0.5 * (yy - 2.0 * corr.dot(w) + w.dot(gw)) + lambda_l1 * w.lpNorm<1>(); };

    LassoFit fit;
    bool converged = p == 0;
    std::uint32_t sweep = 0;
    while (!converged && sweep < max_sweeps) {
        ++sweep;
        double max_change = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double g = gram(j, j);
            if (g <= 0.0) {
                continue;
            }
            const double rho = corr[j] - gw[j] + g * w[j];
            const double updated = tree_detail::soft_threshold(rho, lambda_l1) / g;
            const double delta = updated - w[j];
            if (delta != 0.0) {
                w[j] = updated;
                gw += gram.col(j) * delta;
                max_change = std::max(max_change, std::abs(delta));
            }
        }
        fit.objective_per_sweep.push_back(objective());
        converged = max_change < tol;
    }

    auto& model = fit.model;
    model.kind = LearnerKind::lasso;
    model.config = preset("lasso");
    model.config.lambda_l1 = lambda_l1;
    model.config.tol = tol;
    model.config.max_sweeps = max_sweeps;
    model.feature_names = linear_detail::default_names(p);
    model.weights.assign(w.data(), w.data() + p);
    model.intercept = mean_y - mean_x.dot(w);
    model.base_score = mean_y;
    model.info.converged = converged;
    model.info.iterations = sweep;
    return fit;
}

inline Model fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda_l1, double tol = 1e-7,
                       std::uint32_t max_sweeps = 10000)
{
    return fit_lasso_traced(x, y, lambda_l1, tol, max_sweeps).model;
}

}  // namespace fairscope
