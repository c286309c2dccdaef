#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fairscope/error.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/learners/config.hpp"
#include "fairscope/learners/tree.hpp"

namespace fairscope {

struct FitInfo {
    bool converged = true;
    std::uint32_t iterations = 0;

    bool operator==(const FitInfo&) const = default;
};

/// A fitted regressor. Linear kinds use `weights` and `intercept`; tree kinds
/// predict base_score plus the sum (gbt) or mean (tree, forest) of `trees`.
struct Model {
    LearnerKind kind = LearnerKind::ols;
    LearnerConfig config;
    std::vector<std::string> feature_names;
    double base_score = 0.0;
    std::vector<double> weights;
    double intercept = 0.0;
    std::vector<Tree> trees;
    FitInfo info;

    bool averages_trees() const { return kind == LearnerKind::tree || kind == LearnerKind::forest; }

    bool operator==(const Model&) const = default;
};

inline Eigen::VectorXd predict(const Model& model, const Eigen::MatrixXd& x)
{
    if (static_cast<std::size_t>(x.cols()) != model.feature_names.size()) {
        throw DataError("model expects " + std::to_string(model.feature_names.size()) + " features, got "
                        + std::to_string(x.cols()));
    }
    const Eigen::Index n = x.rows();
    Eigen::VectorXd out(n);
    switch (model.kind) {
    case LearnerKind::ols:
    case LearnerKind::lasso:
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = model.intercept;
            for (std::size_t j = 0; j < model.weights.size(); ++j) {
                acc += model.weights[j] * x(i, static_cast<Eigen::Index>(j));
            }
            out[i] = acc;
        }
        break;
    case LearnerKind::tree:
    case LearnerKind::forest:
    case LearnerKind::gbt:
        for (Eigen::Index i = 0; i < n; ++i) {
            double acc = 0.0;
            for (const auto& t : model.trees) {
                acc += t.predict(x, i);
            }
            if (model.averages_trees() && !model.trees.empty()) {
                acc /= static_cast<double>(model.trees.size());
            }
            out[i] = model.base_score + acc;
        }
        break;
    }
    return out;
}

/// Prediction over a frame; its feature columns must match the model's by
/// name and order.
inline Eigen::VectorXd predict(const Model& model, const Frame& frame)
{
    if (frame.feature_names() != model.feature_names) {
        throw DataError("frame features do not match the model's feature order");
    }
    return predict(model, frame.feature_matrix());
}

inline nlohmann::ordered_json to_json(const Tree& tree)
{
    nlohmann::ordered_json j;
    j["split_feature"] = tree.split_feature;
    j["threshold"] = tree.threshold;
    j["left"] = tree.left;
    j["right"] = tree.right;
    j["value"] = tree.value;
    return j;
}

inline Tree tree_from_json(const nlohmann::json& j)
{
    Tree t;
    t.split_feature = j.at("split_feature").get<std::vector<std::int32_t>>();
    t.threshold = j.at("threshold").get<std::vector<double>>();
    t.left = j.at("left").get<std::vector<std::int32_t>>();
    t.right = j.at("right").get<std::vector<std::int32_t>>();
    t.value = j.at("value").get<std::vector<double>>();
    const auto n = t.value.size();
    if (t.split_feature.size() != n || t.threshold.size() != n || t.left.size() != n || t.right.size() != n) {
        throw DataError("tree arrays have inconsistent lengths");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (t.split_feature[i] >= 0) {
            const auto l = t.left[i];
            const auto r = t.right[i];
            if (l <= static_cast<std::int32_t>(i) || r <= static_cast<std::int32_t>(i)
                || l >= static_cast<std::int32_t>(n) || r >= static_cast<std::int32_t>(n)) {
                throw DataError("tree node " + std::to_string(i) + " has invalid children");
            }
        }
    }
    return t;
}

inline nlohmann::ordered_json to_json(const Model& model)
{
    nlohmann::ordered_json j;
    j["format"] = "fairscope-model/1";
    j["kind"] = to_string(model.kind);
    j["config"] = to_json(model.config);
    j["feature_names"] = model.feature_names;
    j["base_score"] = model.base_score;
    j["intercept"] = model.intercept;
    j["weights"] = model.weights;
    j["trees"] = nlohmann::ordered_json::array();
    for (const auto& t : model.trees) {
        j["trees"].push_back(to_json(t));
    }
    j["converged"] = model.info.converged;
    j["iterations"] = model.info.iterations;
    return j;
}

inline Model model_from_json(const nlohmann::json& j)
{
    Model m;
    try {
        m.kind = learner_kind_from_string(j.at("kind").get<std::string>());
        m.config = learner_config_from_json(j.at("config"));
        m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        m.base_score = j.at("base_score").get<double>();
        m.intercept = j.at("intercept").get<double>();
        m.weights = j.at("weights").get<std::vector<double>>();
        for (const auto& t : j.at("trees")) {
            m.trees.push_back(tree_from_json(t));
        }
        m.info.converged = j.value("converged", true);
        m.info.iterations = j.value("iterations", 0u);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
    for (const auto& t : m.trees) {
        for (auto f : t.split_feature) {
            if (f >= static_cast<std::int32_t>(m.feature_names.size())) {
                throw DataError("tree splits on a feature index beyond the model's features");
            }
        }
    }
    if ((m.kind == LearnerKind::ols || m.kind == LearnerKind::lasso) && m.weights.size() != m.feature_names.size()) {
        throw DataError("linear model weight count does not match its features");
    }
    return m;
}

}  // namespace fairscope
