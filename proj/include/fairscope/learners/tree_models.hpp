#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "fairscope/error.hpp"
#include "fairscope/learners/linear.hpp"
#include "fairscope/learners/model.hpp"
#include "fairscope/learners/tree.hpp"
#include "fairscope/random.hpp"

namespace fairscope {

namespace tree_models_detail {

inline std::vector<std::size_t> all_features(Eigen::Index m)
{
    std::vector<std::size_t> f(static_cast<std::size_t>(m));
    std::iota(f.begin(), f.end(), std::size_t{0});
    return f;
}

inline std::size_t fraction_count(double fraction, std::size_t total)
{
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(fraction * static_cast<double>(total))), 1,
                                   std::max<std::size_t>(total, 1));
}

inline Model empty_tree_model(LearnerKind kind, const LearnerConfig& config, Eigen::Index p)
{
    Model m;
    m.kind = kind;
    m.config = config;
    m.feature_names = linear_detail::default_names(p);
    return m;
}

}  // namespace tree_models_detail

/// Single CART regression tree (variance-reduction splits, mean leaves).
inline Model fit_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LearnerConfig& config)
{
    linear_detail::check_inputs(x, y);
    config.validate();
    Model model = tree_models_detail::empty_tree_model(LearnerKind::tree, config, x.cols());
    const PresortedColumns sorted(x);
    const std::vector<double> weight(static_cast<std::size_t>(x.rows()), 1.0);
    const auto features = tree_models_detail::all_features(x.cols());
    TreeParams params;
    params.max_depth = config.max_depth;
    params.min_child_weight = config.min_child_weight;
    model.trees.push_back(build_tree(x, sorted, std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                                     weight, features, params));
    return model;
}

/// Random forest: each tree sees a resample of the rows (with replacement
/// when bootstrap is on, round(subsample*n) draws) and samples
/// round(colsample*m) candidate features at every node. Tree t draws from its
/// own stream derived from (seed, t).
inline Model fit_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LearnerConfig& config)
{
    linear_detail::check_inputs(x, y);
    config.validate();
    Model model = tree_models_detail::empty_tree_model(LearnerKind::forest, config, x.cols());
    const auto n = static_cast<std::size_t>(x.rows());
    const PresortedColumns sorted(x);
    const auto features = tree_models_detail::all_features(x.cols());
    const std::span<const double> target(y.data(), n);
    TreeParams params;
    params.max_depth = config.max_depth;
    params.min_child_weight = config.min_child_weight;
    params.node_colsample = config.colsample;

    std::vector<double> weight(n);
    for (std::uint32_t t = 0; t < config.n_estimators; ++t) {
        Rng rng(derive_seed(config.seed, t));
        std::fill(weight.begin(), weight.end(), 0.0);
        const auto draws = tree_models_detail::fraction_count(config.subsample, n);
        if (config.bootstrap) {
            for (std::size_t d = 0; d < draws; ++d) {
                weight[static_cast<std::size_t>(uniform_index(rng, n))] += 1.0;
            }
        } else if (draws < n) {
            for (auto r : sample_without_replacement(n, draws, rng)) {
                weight[r] = 1.0;
            }
        } else {
            std::fill(weight.begin(), weight.end(), 1.0);
        }
        model.trees.push_back(build_tree(x, sorted, target, weight, features, params, &rng));
    }
    return model;
}

struct GbtFit {
    Model model;
    /// Training MSE after each stage; entry 0 is the base score alone.
    std::vector<double> train_mse;
};

/// Stagewise squared-loss boosting from base_score = mean(y). Each stage
/// fits a tree to the current residuals on a row subsample (without
/// replacement) and a per-tree feature subsample. Leaf values are
/// soft_threshold(sum residual, alpha) / (count + lambda_l2), times the
/// learning rate.
inline GbtFit fit_gbt_traced(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LearnerConfig& config)
{
    linear_detail::check_inputs(x, y);
    config.validate();
    GbtFit fit;
    Model& model = fit.model;
    model = tree_models_detail::empty_tree_model(LearnerKind::gbt, config, x.cols());
    const auto n = static_cast<std::size_t>(x.rows());
    const auto m = static_cast<std::size_t>(x.cols());
    model.base_score = y.mean();

    std::vector<double> pred(n, model.base_score);
    std::vector<double> residual(n);
    auto mse = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[static_cast<Eigen::Index>(i)] - pred[i];
            acc += r * r;
        }
        return acc / static_cast<double>(n);
    };
    fit.train_mse.push_back(mse());
    if (config.n_estimators == 0) {
        return fit;
    }

    const PresortedColumns sorted(x);
    TreeParams params;
    params.max_depth = config.max_depth;
    params.min_child_weight = config.min_child_weight;
    params.lambda_l2 = config.lambda_l2;
    params.alpha = config.alpha;
    params.leaf_scale = config.learning_rate;

    std::vector<double> weight(n);
    for (std::uint32_t s = 0; s < config.n_estimators; ++s) {
        Rng rng(derive_seed(config.seed, s));
        const auto rows = tree_models_detail::fraction_count(config.subsample, n);
        if (rows < n) {
            std::fill(weight.begin(), weight.end(), 0.0);
            for (auto r : sample_without_replacement(n, rows, rng)) {
                weight[r] = 1.0;
            }
        } else {
            std::fill(weight.begin(), weight.end(), 1.0);
        }
        std::vector<std::size_t> features;
        const auto cols = tree_models_detail::fraction_count(config.colsample, m);
        if (cols < m) {
            features = sample_without_replacement(m, cols, rng);
            std::sort(features.begin(), features.end());
        } else {
            features = tree_models_detail::all_features(x.cols());
        }
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = y[static_cast<Eigen::Index>(i)] - pred[i];
        }
        Tree tree = build_tree(x, sorted, residual, weight, features, params);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] += tree.predict(x, static_cast<Eigen::Index>(i));
        }
        model.trees.push_back(std::move(tree));
        fit.train_mse.push_back(mse());
    }
    return fit;
}

inline Model fit_gbt(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const LearnerConfig& config)
{
    return fit_gbt_traced(x, y, config).model;
}

}  // namespace fairscope
