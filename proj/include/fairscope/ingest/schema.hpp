#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairscope/error.hpp"

namespace fairscope {

enum class ColumnKind { numeric, categorical_binary, target, dropped };

inline std::string to_string(ColumnKind kind)
{
    switch (kind) {
    case ColumnKind::numeric: return "numeric";
    case ColumnKind::categorical_binary: return "categorical-binary";
    case ColumnKind::target: return "target";
    case ColumnKind::dropped: return "dropped";
    }
    return "unknown";
}

inline ColumnKind column_kind_from_string(const std::string& text)
{
    if (text == "numeric") return ColumnKind::numeric;
    if (text == "categorical-binary") return ColumnKind::categorical_binary;
    if (text == "target") return ColumnKind::target;
    if (text == "dropped") return ColumnKind::dropped;
    throw ConfigError("unknown column kind '" + text + "'");
}

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    /// Raw label -> {0,1}. Only meaningful for categorical-binary columns.
    std::map<std::string, int> encoding;
    /// Code for labels absent from `encoding`; without it they are an error.
    std::optional<int> encoding_default;
    std::vector<std::string> missing_markers;

    /// Encoded value of a raw label, or nullopt if the mapping does not cover it.
    std::optional<int> encode(const std::string& label) const
    {
        if (const auto it = encoding.find(label); it != encoding.end()) {
            return it->second;
        }
        return encoding_default;
    }

    bool is_missing(const std::string& cell) const
    {
        return std::find(missing_markers.begin(), missing_markers.end(), cell) != missing_markers.end();
    }
};

struct Schema {
    std::vector<ColumnSpec> columns;
    std::vector<std::string> leakage_drops;
    /// Accept files without a header row, mapping cells positionally onto
    /// `columns`. The public census distribution ships that way.
    bool headerless_ok = false;

    const ColumnSpec* find(std::string_view name) const
    {
        for (const auto& c : columns) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }

    bool is_leakage(std::string_view name) const
    {
        return std::find(leakage_drops.begin(), leakage_drops.end(), name) != leakage_drops.end();
    }

    const ColumnSpec& target() const
    {
        for (const auto& c : columns) {
            if (c.kind == ColumnKind::target) {
                return c;
            }
        }
        throw ConfigError("schema has no target column");
    }

    /// Throws ConfigError when an invariant does not hold.
    void validate() const
    {
        if (columns.empty()) {
            throw ConfigError("schema lists no columns");
        }
        std::set<std::string> seen;
        int targets = 0;
        for (const auto& c : columns) {
            if (!seen.insert(c.name).second) {
                throw ConfigError("schema column '" + c.name + "' declared twice");
            }
            if (c.kind == ColumnKind::target) {
                ++targets;
                if (is_leakage(c.name)) {
                    throw ConfigError("target column '" + c.name + "' listed as a leakage drop");
                }
            }
            if (c.kind == ColumnKind::categorical_binary) {
                if (c.encoding.empty()) {
                    throw ConfigError("categorical-binary column '" + c.name + "' has no encoding");
                }
                bool has_zero = c.encoding_default == 0;
                bool has_one = c.encoding_default == 1;
                if (c.encoding_default && *c.encoding_default != 0 && *c.encoding_default != 1) {
                    throw ConfigError("encoding_default for '" + c.name + "' must be 0 or 1");
                }
                for (const auto& [label, code] : c.encoding) {
                    if (code != 0 && code != 1) {
                        throw ConfigError("encoding for '" + c.name + "' maps '" + label + "' outside {0,1}");
                    }
                    (code == 0 ? has_zero : has_one) = true;
                }
                if (!has_zero || !has_one) {
                    throw ConfigError("encoding for '" + c.name + "' must produce both 0 and 1");
                }
            } else if (!c.encoding.empty()) {
                throw ConfigError("column '" + c.name + "' has an encoding but is not categorical-binary");
            }
        }
        if (targets != 1) {
            throw ConfigError("schema must declare exactly one target column, found " + std::to_string(targets));
        }
    }
};

inline Schema schema_from_json(const nlohmann::json& doc)
{
    Schema schema;
    try {
        for (const auto& col : doc.at("columns")) {
            ColumnSpec spec;
            spec.name = col.at("name").get<std::string>();
            spec.kind = column_kind_from_string(col.at("kind").get<std::string>());
            if (col.contains("encoding")) {
                for (const auto& [label, code] : col.at("encoding").items()) {
                    spec.encoding[label] = code.get<int>();
                }
            }
            if (col.contains("encoding_default")) {
                spec.encoding_default = col.at("encoding_default").get<int>();
            }
            if (col.contains("missing_markers")) {
                spec.missing_markers = col.at("missing_markers").get<std::vector<std::string>>();
            }
            schema.columns.push_back(std::move(spec));
        }
        if (doc.contains("leakage_drops")) {
            schema.leakage_drops = doc.at("leakage_drops").get<std::vector<std::string>>();
        }
        schema.headerless_ok = doc.value("headerless_ok", false);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed schema: ") + e.what());
    }
    schema.validate();
    return schema;
}

inline nlohmann::ordered_json schema_to_json(const Schema& schema)
{
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : schema.columns) {
        nlohmann::ordered_json col;
        col["name"] = c.name;
        col["kind"] = to_string(c.kind);
        if (!c.encoding.empty()) {
            nlohmann::ordered_json enc = nlohmann::ordered_json::object();
            for (const auto& [label, code] : c.encoding) {
                enc[label] = code;
            }
            col["encoding"] = enc;
        }
        if (c.encoding_default) {
            col["encoding_default"] = *c.encoding_default;
        }
        if (!c.missing_markers.empty()) {
            col["missing_markers"] = c.missing_markers;
        }
        doc["columns"].push_back(col);
    }
    doc["leakage_drops"] = schema.leakage_drops;
    if (schema.headerless_ok) {
        doc["headerless_ok"] = true;
    }
    return doc;
}

inline Schema load_schema(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open schema file " + path.string());
    }
    try {
        return schema_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("schema " + path.string() + " is not valid JSON: " + e.what());
    }
}

}  // namespace fairscope
