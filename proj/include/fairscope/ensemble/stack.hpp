#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fairscope/error.hpp"
#include "fairscope/learners/model.hpp"

namespace fairscope {

/// Weighted-average stack. Members name learners of the audit config; the
/// weights are raw units and need not sum to one.
struct StackSpec {
    std::string name = "stacked";
    std::vector<std::string> members;
    std::vector<double> weights;
    /// Attributes to audit with the stack; empty means the ones every single
    /// learner flagged.
    std::vector<std::string> attributes;

    void validate() const
    {
        if (members.empty()) {
            throw ConfigError("stack has no members");
        }
        if (members.size() != weights.size()) {
            throw ConfigError("stack lists " + std::to_string(members.size()) + " members but "
                              + std::to_string(weights.size()) + " weights");
        }
        for (double w : weights) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw ConfigError("stack weights must be positive and finite");
            }
        }
    }

    bool operator==(const StackSpec&) const = default;
};

/// sum_i w_i * p_i / sum_i w_i, row by row, accumulated in member order.
inline Eigen::VectorXd stack_combine(const std::vector<Eigen::VectorXd>& member_predictions,
                                     const std::vector<double>& weights)
{
    if (member_predictions.empty()) {
        throw ConfigError("stack has no members");
    }
    if (member_predictions.size() != weights.size()) {
        throw ConfigError("stack member and weight counts differ");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw ConfigError("stack weights must be positive and finite");
        }
        total += w;
    }
    const auto n = member_predictions.front().size();
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < member_predictions.size(); ++k) {
        if (member_predictions[k].size() != n) {
            throw DataError("stack members predicted different row counts");
        }
        out += (weights[k] / total) * member_predictions[k];
    }
    return out;
}

inline Eigen::VectorXd stack_predict(const std::vector<Model>& models, const std::vector<double>& weights,
                                     const Eigen::MatrixXd& x)
{
    if (models.empty()) {
        throw ConfigError("stack has no members");
    }
    if (models.size() != weights.size()) {
        throw ConfigError("stack member and weight counts differ");
    }
    std::vector<Eigen::VectorXd> preds;
    preds.reserve(models.size());
    for (const auto& m : models) {
        preds.push_back(predict(m, x));
    }
    return stack_combine(preds, weights);
}

template <typename Json>
StackSpec stack_from_json(const Json& j)
{
    StackSpec s;
    try {
        s.name = j.value("name", s.name);
        s.members = j.at("members").template get<std::vector<std::string>>();
        s.weights = j.at("weights").template get<std::vector<double>>();
        if (j.contains("attributes")) {
            s.attributes = j.at("attributes").template get<std::vector<std::string>>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed stack block: ") + e.what());
    }
    s.validate();
    return s;
}

inline nlohmann::ordered_json to_json(const StackSpec& s)
{
    nlohmann::ordered_json j;
    j["name"] = s.name;
    j["members"] = s.members;
    j["weights"] = s.weights;
    j["attributes"] = s.attributes;
    return j;
}

}  // namespace fairscope
