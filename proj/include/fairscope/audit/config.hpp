#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairscope/alternation/alternate.hpp"
#include "fairscope/ensemble/stack.hpp"
#include "fairscope/error.hpp"
#include "fairscope/learners/config.hpp"

namespace fairscope {

enum class AuditMode {
    /// The fold's fitted model scores the alternated test rows.
    predict_alternated,
    /// A second model is fitted on the alternated training rows.
    retrain_alternated,
};

inline std::string to_string(AuditMode mode)
{
    return mode == AuditMode::predict_alternated ? "predict-alternated" : "retrain-alternated";
}

inline AuditMode audit_mode_from_string(const std::string& text)
{
    if (text == "predict-alternated") return AuditMode::predict_alternated;
    if (text == "retrain-alternated") return AuditMode::retrain_alternated;
    throw ConfigError("mode must be predict-alternated or retrain-alternated, got '" + text + "'");
}

struct AuditConfig {
    std::vector<AlternationSpec> pba_specs;
    std::vector<LearnerConfig> learners;
    std::optional<StackSpec> stack;
    std::size_t k = 15;
    std::uint64_t seed = 0;
    AuditMode mode = AuditMode::predict_alternated;
    double pba_threshold = 0.05;

    void validate() const
    {
        if (k < 2) {
            throw ConfigError("k must be at least 2, got " + std::to_string(k));
        }
        if (learners.empty()) {
            throw ConfigError("learners: at least one learner is required");
        }
        if (pba_specs.empty()) {
            throw ConfigError("attributes: at least one protected attribute is required");
        }
        if (!(pba_threshold >= 0.0) || !std::isfinite(pba_threshold)) {
            throw ConfigError("pba_threshold must be finite and non-negative");
        }
        std::set<std::string> names;
        for (const auto& l : learners) {
            l.validate();
            if (!names.insert(l.name).second) {
                throw ConfigError("learners: duplicate learner name '" + l.name + "'");
            }
        }
        std::set<std::string> attrs;
        for (const auto& a : pba_specs) {
            if (!attrs.insert(a.attribute).second) {
                throw ConfigError("attributes: '" + a.attribute + "' listed twice");
            }
        }
        if (stack) {
            stack->validate();
            for (const auto& m : stack->members) {
                if (!names.count(m)) {
                    throw ConfigError("stack: member '" + m + "' is not a configured learner");
                }
            }
            for (const auto& a : stack->attributes) {
                if (!attrs.count(a)) {
                    throw ConfigError("stack: attribute '" + a + "' is not a configured attribute");
                }
            }
            if (names.count(stack->name)) {
                throw ConfigError("stack: name '" + stack->name + "' collides with a learner");
            }
        }
    }
};

/// Parses the audit block of a config document. Field names follow the
/// config file format: attributes, learners, stack, k, seed, mode,
/// pba_threshold.
template <typename Json>
AuditConfig audit_config_from_json(const Json& j)
{
    AuditConfig c;
    try {
        if (j.contains("attributes")) {
            for (const auto& a : j.at("attributes")) {
                c.pba_specs.push_back(alternation_from_json(a));
            }
        }
        if (j.contains("learners")) {
            for (const auto& l : j.at("learners")) {
                c.learners.push_back(learner_config_from_json(l));
            }
        }
        if (j.contains("stack") && !j.at("stack").is_null()) {
            c.stack = stack_from_json(j.at("stack"));
        }
        if (j.contains("k")) {
            const auto k = j.at("k").template get<std::int64_t>();
            if (k < 2) {
                throw ConfigError("k must be at least 2, got " + std::to_string(k));
            }
            c.k = static_cast<std::size_t>(k);
        }
        c.seed = j.value("seed", c.seed);
        if (j.contains("mode")) {
            c.mode = audit_mode_from_string(j.at("mode").template get<std::string>());
        }
        c.pba_threshold = j.value("pba_threshold", c.pba_threshold);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed audit config: ") + e.what());
    }
    c.validate();
    return c;
}

inline nlohmann::ordered_json to_json(const AuditConfig& c)
{
    nlohmann::ordered_json j;
    j["k"] = c.k;
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["pba_threshold"] = c.pba_threshold;
    j["attributes"] = nlohmann::ordered_json::array();
    for (const auto& a : c.pba_specs) {
        j["attributes"].push_back(to_json(a));
    }
    j["learners"] = nlohmann::ordered_json::array();
    for (const auto& l : c.learners) {
        j["learners"].push_back(to_json(l));
    }
    j["stack"] = c.stack ? to_json(*c.stack) : nlohmann::ordered_json();
    return j;
}

}  // namespace fairscope
