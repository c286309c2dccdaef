#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "fairscope/error.hpp"
#include "fairscope/ingest/frame.hpp"

namespace fairscope {

/// Which protected attribute to flip, and how to label its two groups.
struct AlternationSpec {
    std::string attribute;
    std::map<int, std::string> group_names{{0, "0"}, {1, "1"}};

    const std::string& group_name(int code) const { return group_names.at(code); }

    bool operator==(const AlternationSpec&) const = default;
};

/// Throws unless `spec.attribute` is an encoded categorical-binary column.
inline void check_alternation(const Frame& frame, const AlternationSpec& spec)
{
    const auto* col = frame.find(spec.attribute);
    if (col == nullptr) {
        throw ConfigError("attribute '" + spec.attribute + "' is not a column of the data");
    }
    if (col->kind != ColumnKind::categorical_binary) {
        throw ConfigError("attribute '" + spec.attribute + "' is not categorical-binary");
    }
    if (!col->encoded()) {
        throw DataError("attribute '" + spec.attribute + "' has not been encoded");
    }
    for (double v : col->values) {
        if (v != 0.0 && v != 1.0) {
            throw DataError("attribute '" + spec.attribute + "' holds a value outside {0,1}");
        }
    }
}

/// Copy of `frame` with the attribute's 0 and 1 swapped on every row.
/// Everything else, including the recorded original group labels, is kept.
inline Frame alternate(const Frame& frame, const AlternationSpec& spec)
{
    check_alternation(frame, spec);
    Frame out = frame;
    for (auto& col : out.columns) {
        if (col.name == spec.attribute) {
            for (double& v : col.values) {
                v = 1.0 - v;
            }
        }
    }
    return out;
}

/// True when the averaged divergence reaches the threshold.
inline bool classify_pba(double avg_kl, double threshold)
{
    if (!(avg_kl >= 0.0)) {
        throw ConfigError("average divergence must be non-negative");
    }
    return avg_kl >= threshold;
}

template <typename Json>
AlternationSpec alternation_from_json(const Json& j)
{
    AlternationSpec spec;
    try {
        spec.attribute = j.at("attribute").template get<std::string>();
        if (j.contains("groups")) {
            const auto& g = j.at("groups");
            spec.group_names[0] = g.at("0").template get<std::string>();
            spec.group_names[1] = g.at("1").template get<std::string>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed attribute block: ") + e.what());
    }
    if (spec.attribute.empty()) {
        throw ConfigError("attribute name is empty");
    }
    return spec;
}

inline nlohmann::ordered_json to_json(const AlternationSpec& spec)
{
    nlohmann::ordered_json j;
    j["attribute"] = spec.attribute;
    j["groups"] = {{"0", spec.group_names.at(0)}, {"1", spec.group_names.at(1)}};
    return j;
}

}  // namespace fairscope
