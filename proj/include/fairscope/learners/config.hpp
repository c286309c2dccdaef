#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <json.hpp>

#include "fairscope/error.hpp"

namespace fairscope {

enum class LearnerKind { ols, lasso, tree, forest, gbt };

inline std::string to_string(LearnerKind kind)
{
    switch (kind) {
    case LearnerKind::ols: return "ols";
    case LearnerKind::lasso: return "lasso";
    case LearnerKind::tree: return "tree";
    case LearnerKind::forest: return "forest";
    case LearnerKind::gbt: return "gbt";
    }
    return "unknown";
}

inline LearnerKind learner_kind_from_string(const std::string& text)
{
    if (text == "ols") return LearnerKind::ols;
    if (text == "lasso") return LearnerKind::lasso;
    if (text == "tree") return LearnerKind::tree;
    if (text == "forest") return LearnerKind::forest;
    if (text == "gbt") return LearnerKind::gbt;
    throw ConfigError("unknown learner kind '" + text + "'");
}

/// Hyperparameters for every learner kind; each kind reads the fields that
/// apply to it.
struct LearnerConfig {
    std::string name;
    LearnerKind kind = LearnerKind::ols;
    double ridge_eps = 1e-8;
    double lambda_l1 = 1.0;
    double tol = 1e-7;
    std::uint32_t max_sweeps = 10000;
    std::uint32_t max_depth = 6;
    double min_child_weight = 1.0;
    std::uint32_t n_estimators = 300;
    double learning_rate = 0.1;
    double subsample = 0.8;
    double colsample = 0.8;
    double lambda_l2 = 1.0;
    double alpha = 0.0;
    /// Forest only: resample rows with replacement for each tree.
    bool bootstrap = true;
    std::uint64_t seed = 0;

    void validate() const
    {
        auto fraction = [&](double v, const char* field) {
            if (!(v > 0.0 && v <= 1.0)) {
                throw ConfigError("learner '" + name + "': " + field + " must lie in (0,1]");
            }
        };
        auto nonneg = [&](double v, const char* field) {
            if (!std::isfinite(v) || v < 0.0) {
                throw ConfigError("learner '" + name + "': " + field + " must be finite and non-negative");
            }
        };
        fraction(learning_rate, "learning_rate");
        fraction(subsample, "subsample");
        fraction(colsample, "colsample");
        nonneg(ridge_eps, "ridge_eps");
        nonneg(lambda_l1, "lambda_l1");
        nonneg(min_child_weight, "min_child_weight");
        nonneg(lambda_l2, "lambda_l2");
        nonneg(alpha, "alpha");
        if (!std::isfinite(tol) || tol <= 0.0) {
            throw ConfigError("learner '" + name + "': tol must be positive");
        }
        if (kind == LearnerKind::forest && n_estimators == 0) {
            throw ConfigError("learner '" + name + "': a forest needs at least one tree");
        }
    }

    bool operator==(const LearnerConfig&) const = default;
};

/// Named starting points. The three boosting presets stand in for the XGBoost,
/// LightGBM and scikit-learn GradientBoosting regressors.
inline LearnerConfig preset(const std::string& preset_name)
{
    LearnerConfig c;
    c.name = preset_name;
    if (preset_name == "xgb") {
        c.kind = LearnerKind::gbt;
    } else if (preset_name == "lgbm") {
        c.kind = LearnerKind::gbt;
        c.max_depth = 8;
        c.min_child_weight = 20;
        c.lambda_l2 = 0.0;
    } else if (preset_name == "gb") {
        c.kind = LearnerKind::gbt;
        c.max_depth = 3;
        c.subsample = 1.0;
        c.colsample = 1.0;
        c.lambda_l2 = 0.0;
    } else if (preset_name == "rf") {
        c.kind = LearnerKind::forest;
        c.n_estimators = 200;
        c.colsample = 0.7;
        c.subsample = 1.0;
        c.max_depth = 14;
        c.min_child_weight = 3;
        c.lambda_l2 = 0.0;
    } else if (preset_name == "tree") {
        c.kind = LearnerKind::tree;
        c.lambda_l2 = 0.0;
        c.subsample = 1.0;
        c.colsample = 1.0;
    } else if (preset_name == "linear" || preset_name == "ols") {
        c.kind = LearnerKind::ols;
    } else if (preset_name == "lasso") {
        c.kind = LearnerKind::lasso;
    } else {
        throw ConfigError("unknown learner preset '" + preset_name + "'");
    }
    return c;
}

inline LearnerConfig default_config(LearnerKind kind)
{
    switch (kind) {
    case LearnerKind::ols: return preset("linear");
    case LearnerKind::lasso: return preset("lasso");
    case LearnerKind::tree: return preset("tree");
    case LearnerKind::forest: return preset("rf");
    case LearnerKind::gbt: return preset("xgb");
    }
    return {};
}

inline nlohmann::ordered_json to_json(const LearnerConfig& c)
{
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["kind"] = to_string(c.kind);
    j["ridge_eps"] = c.ridge_eps;
    j["lambda_l1"] = c.lambda_l1;
    j["tol"] = c.tol;
    j["max_sweeps"] = c.max_sweeps;
    j["max_depth"] = c.max_depth;
    j["min_child_weight"] = c.min_child_weight;
    j["n_estimators"] = c.n_estimators;
    j["learning_rate"] = c.learning_rate;
    j["subsample"] = c.subsample;
    j["colsample"] = c.colsample;
    j["lambda_l2"] = c.lambda_l2;
    j["alpha"] = c.alpha;
    j["bootstrap"] = c.bootstrap;
    j["seed"] = c.seed;
    return j;
}

/// Reads a learner block. "preset" (or else "kind") picks the defaults and
/// any other listed field overrides them.
template <typename Json>
LearnerConfig learner_config_from_json(const Json& j)
{
    LearnerConfig c;
    try {
        if (j.contains("preset")) {
            c = preset(j.at("preset").template get<std::string>());
        } else if (j.contains("kind")) {
            c = default_config(learner_kind_from_string(j.at("kind").template get<std::string>()));
        } else {
            throw ConfigError("learner block needs 'preset' or 'kind'");
        }
        if (j.contains("preset") && j.contains("kind")
            && learner_kind_from_string(j.at("kind").template get<std::string>()) != c.kind) {
            throw ConfigError("learner kind contradicts its preset");
        }
        c.name = j.value("name", c.name.empty() ? to_string(c.kind) : c.name);
        c.ridge_eps = j.value("ridge_eps", c.ridge_eps);
        c.lambda_l1 = j.value("lambda_l1", c.lambda_l1);
        c.tol = j.value("tol", c.tol);
        c.max_sweeps = j.value("max_sweeps", c.max_sweeps);
        c.max_depth = j.value("max_depth", c.max_depth);
        c.min_child_weight = j.value("min_child_weight", c.min_child_weight);
        c.n_estimators = j.value("n_estimators", c.n_estimators);
        c.learning_rate = j.value("learning_rate", c.learning_rate);
        c.subsample = j.value("subsample", c.subsample);
        c.colsample = j.value("colsample", c.colsample);
        c.lambda_l2 = j.value("lambda_l2", c.lambda_l2);
        c.alpha = j.value("alpha", c.alpha);
        c.bootstrap = j.value("bootstrap", c.bootstrap);
        c.seed = j.value("seed", c.seed);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed learner block: ") + e.what());
    }
    c.validate();
    return c;
}

}  // namespace fairscope
