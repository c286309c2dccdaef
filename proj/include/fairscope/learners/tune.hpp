#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fairscope/error.hpp"
#include "fairscope/ingest/folds.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/learners/config.hpp"
#include "fairscope/learners/fit.hpp"
#include "fairscope/parallel.hpp"
#include "fairscope/random.hpp"

namespace fairscope {

struct ParamRange {
    enum class Type { continuous, integer, categorical };
    Type type = Type::continuous;
    double lo = 0.0;
    double hi = 0.0;
    bool log_scale = false;
    std::vector<double> choices;

    bool operator==(const ParamRange&) const = default;
};

/// Search space over LearnerConfig fields, kept sorted by parameter name so
/// sampling order never depends on how the space was written.
struct HyperSpace {
    std::vector<std::pair<std::string, ParamRange>> params;

    void add(std::string name, ParamRange range)
    {
        params.emplace_back(std::move(name), std::move(range));
        std::sort(params.begin(), params.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    }

    bool empty() const { return params.empty(); }
};

struct TuneTrial {
    LearnerConfig config;
    double cv_rmse = 0.0;
};

struct TuneResult {
    LearnerConfig best_config;
    double best_cv_rmse = std::numeric_limits<double>::infinity();
    std::vector<TuneTrial> trials;
};

namespace tune_detail {

inline const std::vector<std::string>& tunable_names()
{
    static const std::vector<std::string> names{"alpha",     "colsample",    "lambda_l1",     "lambda_l2",
                                                "learning_rate", "max_depth", "min_child_weight", "n_estimators",
                                                "seed",      "subsample"};
    return names;
}

inline std::string canonical_name(const std::string& name)
{
    if (name == "lambda") return "lambda_l2";
    if (name == "random_state") return "seed";
    if (name == "colsample_bytree") return "colsample";
    return name;
}

inline void assign(LearnerConfig& c, const std::string& name, double v)
{
    if (name == "alpha") c.alpha = v;
    else if (name == "colsample") c.colsample = v;
    else if (name == "lambda_l1") c.lambda_l1 = v;
    else if (name == "lambda_l2") c.lambda_l2 = v;
    else if (name == "learning_rate") c.learning_rate = v;
    else if (name == "max_depth") c.max_depth = static_cast<std::uint32_t>(std::llround(v));
    else if (name == "min_child_weight") c.min_child_weight = v;
    else if (name == "n_estimators") c.n_estimators = static_cast<std::uint32_t>(std::llround(v));
    else if (name == "seed") c.seed = static_cast<std::uint64_t>(std::llround(v));
    else if (name == "subsample") c.subsample = v;
    else throw ConfigError("parameter '" + name + "' cannot be tuned");
}

inline double draw(const ParamRange& r, Rng& rng)
{
    switch (r.type) {
    case ParamRange::Type::continuous:
        if (r.log_scale) {
            return std::exp(uniform(rng, std::log(r.lo), std::log(r.hi)));
        }
        return uniform(rng, r.lo, r.hi);
    case ParamRange::Type::integer: {
        const auto lo = static_cast<std::int64_t>(std::llround(r.lo));
        const auto hi = static_cast<std::int64_t>(std::llround(r.hi));
        return static_cast<double>(lo + static_cast<std::int64_t>(uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1))));
    }
    case ParamRange::Type::categorical:
        return r.choices[static_cast<std::size_t>(uniform_index(rng, r.choices.size()))];
    }
    return 0.0;
}

}  // namespace tune_detail

/// Reads {"name": {"float": [lo, hi], "log": bool} | {"int": [lo, hi]} |
/// {"choice": [...]}, ...}.
template <typename Json>
HyperSpace hyper_space_from_json(const Json& j)
{
    HyperSpace space;
    try {
        for (const auto& [raw_name, spec] : j.items()) {
            const auto name = tune_detail::canonical_name(raw_name);
            const auto& names = tune_detail::tunable_names();
            if (std::find(names.begin(), names.end(), name) == names.end()) {
                throw ConfigError("parameter '" + raw_name + "' cannot be tuned");
            }
            ParamRange r;
            if (spec.contains("float")) {
                r.type = ParamRange::Type::continuous;
                r.lo = spec.at("float").at(0).template get<double>();
                r.hi = spec.at("float").at(1).template get<double>();
                r.log_scale = spec.value("log", false);
                if (r.log_scale && !(r.lo > 0.0)) {
                    throw ConfigError("log-scale range for '" + raw_name + "' must be positive");
                }
            } else if (spec.contains("int")) {
                r.type = ParamRange::Type::integer;
                r.lo = spec.at("int").at(0).template get<double>();
                r.hi = spec.at("int").at(1).template get<double>();
            } else if (spec.contains("choice")) {
                r.type = ParamRange::Type::categorical;
                r.choices = spec.at("choice").template get<std::vector<double>>();
                if (r.choices.empty()) {
                    throw ConfigError("choice list for '" + raw_name + "' is empty");
                }
            } else {
                throw ConfigError("range for '" + raw_name + "' needs float, int or choice");
            }
            if (r.type != ParamRange::Type::categorical && !(r.lo <= r.hi)) {
                throw ConfigError("range for '" + raw_name + "' has lo > hi");
            }
            space.add(name, r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed search space: ") + e.what());
    }
    return space;
}

/// Pooled out-of-fold RMSE of `config` under `plan`.
inline double cv_rmse(const LearnerConfig& config, const Frame& frame, const FoldPlan& plan)
{
    const Eigen::MatrixXd x = frame.feature_matrix();
    const Eigen::VectorXd y = frame.target_vector();
    double sq = 0.0;
    for (std::size_t f = 0; f < plan.k; ++f) {
        const auto train = plan.train_indices(f);
        const auto test = plan.test_indices(f);
        Eigen::MatrixXd x_train(static_cast<Eigen::Index>(train.size()), x.cols());
        Eigen::VectorXd y_train(static_cast<Eigen::Index>(train.size()));
        for (std::size_t i = 0; i < train.size(); ++i) {
            x_train.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(train[i]));
            y_train[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(train[i])];
        }
        Eigen::MatrixXd x_test(static_cast<Eigen::Index>(test.size()), x.cols());
        for (std::size_t i = 0; i < test.size(); ++i) {
            x_test.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(test[i]));
        }
        const Eigen::VectorXd pred = predict(fit(config, x_train, y_train), x_test);
        for (std::size_t i = 0; i < test.size(); ++i) {
            const double r = pred[static_cast<Eigen::Index>(i)] - y[static_cast<Eigen::Index>(test[i])];
            sq += r * r;
        }
    }
    return std::sqrt(sq / static_cast<double>(plan.n_samples()));
}

/// Uniform (log-uniform where flagged) random search. Trial t samples from
/// its own seed stream, so results do not depend on the thread count.
inline TuneResult tune(const LearnerConfig& base, const Frame& frame, const HyperSpace& space, std::size_t budget,
                       std::size_t k, std::uint64_t seed, unsigned threads = 1)
{
    if (space.empty()) {
        throw ConfigError("search space is empty");
    }
    if (budget == 0) {
        throw ConfigError("tuning budget must be at least 1");
    }
    const FoldPlan plan = make_folds(frame.n_rows(), k, seed);
    TuneResult result;
    result.trials.resize(budget);
    for (std::size_t t = 0; t < budget; ++t) {
        Rng rng(derive_seed(seed, 0x7475'6e65ULL + t));
        LearnerConfig c = base;
        for (const auto& [name, range] : space.params) {
            tune_detail::assign(c, name, tune_detail::draw(range, rng));
        }
        c.validate();
        result.trials[t].config = c;
    }
    parallel_for(budget, threads,
                 [&](std::size_t t) { result.trials[t].cv_rmse = cv_rmse(result.trials[t].config, frame, plan); });
    for (const auto& trial : result.trials) {
        if (trial.cv_rmse < result.best_cv_rmse) {
            result.best_cv_rmse = trial.cv_rmse;
            result.best_config = trial.config;
        }
    }
    return result;
}

inline nlohmann::ordered_json to_json(const TuneResult& r)
{
    nlohmann::ordered_json j;
    j["best_config"] = to_json(r.best_config);
    j["best_cv_rmse"] = r.best_cv_rmse;
    j["trials"] = nlohmann::ordered_json::array();
    for (const auto& t : r.trials) {
        j["trials"].push_back({{"config", to_json(t.config)}, {"cv_rmse", t.cv_rmse}});
    }
    return j;
}

}  // namespace fairscope
