#pragma once

#include <Eigen/Dense>

#include "fairscope/ingest/frame.hpp"
#include "fairscope/learners/config.hpp"
#include "fairscope/learners/linear.hpp"
#include "fairscope/learners/model.hpp"
#include "fairscope/learners/tree_models.hpp"

namespace fairscope {

/// Fits whichever learner `config` names.
inline Model fit(const LearnerConfig& config, const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    config.validate();
    Model model;
    switch (config.kind) {
    case LearnerKind::ols: model = fit_ols(x, y, config.ridge_eps); break;
    case LearnerKind::lasso: model = fit_lasso(x, y, config.lambda_l1, config.tol, config.max_sweeps); break;
    case LearnerKind::tree: model = fit_tree(x, y, config); break;
    case LearnerKind::forest: model = fit_forest(x, y, config); break;
    case LearnerKind::gbt: model = fit_gbt(x, y, config); break;
    }
    // Echo the full request, including the fields this kind ignores.
    model.config = config;
    return model;
}

inline Model fit(const LearnerConfig& config, const Frame& frame)
{
    Model model = fit(config, frame.feature_matrix(), frame.target_vector());
    model.feature_names = frame.feature_names();
    return model;
}

}  // namespace fairscope
