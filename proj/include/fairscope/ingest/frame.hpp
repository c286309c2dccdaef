#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairscope/error.hpp"
#include "fairscope/ingest/schema.hpp"

namespace fairscope {

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    /// Parsed numeric cells, or the {0,1} codes of an encoded categorical.
    /// NaN marks a missing numeric cell in a raw frame.
    std::vector<double> values;
    /// Raw categorical labels; populated only before encoding.
    std::vector<std::string> labels;

    bool encoded() const { return labels.empty(); }
    bool operator==(const Column&) const = default;
};

/// The tabular dataset: feature columns plus the continuous target. Treated
/// as immutable once built; every transformation returns a new Frame.
struct Frame {
    std::vector<Column> columns;
    std::string target_name;
    std::vector<double> target;
    /// Original codes of each categorical-binary column, captured at encoding
    /// time and never touched by alternation.
    std::map<std::string, std::vector<std::uint8_t>> group_labels;
    bool preprocessed = false;

    std::size_t n_rows() const { return target.size(); }

    const Column* find(std::string_view name) const
    {
        for (const auto& c : columns) {
            if (c.name == name) {
                return &c;
            }
        }
        return nullptr;
    }

    const Column& column(std::string_view name) const
    {
        if (const auto* c = find(name)) {
            return *c;
        }
        throw DataError("frame has no column '" + std::string(name) + "'");
    }

    /// Names of the model inputs, in column order.
    std::vector<std::string> feature_names() const
    {
        std::vector<std::string> names;
        for (const auto& c : columns) {
            if (c.kind == ColumnKind::numeric || c.kind == ColumnKind::categorical_binary) {
                names.push_back(c.name);
            }
        }
        return names;
    }

    /// n_rows x features matrix. Requires every feature column to be numeric
    /// or encoded.
    Eigen::MatrixXd feature_matrix() const
    {
        std::vector<const Column*> feats;
        for (const auto& c : columns) {
            if (c.kind == ColumnKind::numeric || c.kind == ColumnKind::categorical_binary) {
                if (!c.encoded()) {
                    throw DataError("column '" + c.name + "' is not encoded yet");
                }
                feats.push_back(&c);
            }
        }
        Eigen::MatrixXd x(static_cast<Eigen::Index>(n_rows()), static_cast<Eigen::Index>(feats.size()));
        for (std::size_t j = 0; j < feats.size(); ++j) {
            for (std::size_t i = 0; i < n_rows(); ++i) {
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feats[j]->values[i];
            }
        }
        return x;
    }

    Eigen::VectorXd target_vector() const
    {
        return Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
    }

    /// Row subset in the given order.
    Frame take(std::span<const std::size_t> rows) const
    {
        Frame out;
        out.target_name = target_name;
        out.preprocessed = preprocessed;
        out.target.reserve(rows.size());
        for (auto r : rows) {
            out.target.push_back(target.at(r));
        }
        for (const auto& c : columns) {
            Column sub{c.name, c.kind, {}, {}};
            if (!c.values.empty()) {
                sub.values.reserve(rows.size());
                for (auto r : rows) {
                    sub.values.push_back(c.values[r]);
                }
            }
            if (!c.labels.empty()) {
                sub.labels.reserve(rows.size());
                for (auto r : rows) {
                    sub.labels.push_back(c.labels[r]);
                }
            }
            out.columns.push_back(std::move(sub));
        }
        for (const auto& [name, codes] : group_labels) {
            auto& dst = out.group_labels[name];
            dst.reserve(rows.size());
            for (auto r : rows) {
                dst.push_back(codes[r]);
            }
        }
        return out;
    }

    /// Throws DataError on a violated structural invariant.
    void check_invariants() const
    {
        const auto n = n_rows();
        for (const auto& c : columns) {
            const auto len = c.encoded() ? c.values.size() : c.labels.size();
            if (len != n) {
                throw DataError("column '" + c.name + "' has " + std::to_string(len) + " rows, expected "
                                + std::to_string(n));
            }
            if (c.kind == ColumnKind::categorical_binary && c.encoded()) {
                for (double v : c.values) {
                    if (v != 0.0 && v != 1.0) {
                        throw DataError("categorical-binary column '" + c.name + "' holds a value outside {0,1}");
                    }
                }
            }
        }
        if (preprocessed) {
            for (double y : target) {
                if (!(y > 0.0) || !std::isfinite(y)) {
                    throw DataError("target must be strictly positive and finite after preprocessing");
                }
            }
        }
    }

    bool operator==(const Frame&) const = default;
};

}  // namespace fairscope
