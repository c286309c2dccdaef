#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fairscope/error.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/ingest/schema.hpp"

namespace fairscope {

/// Quantile `q` in [0,1] by sorted-order linear interpolation: position
/// h = (n-1)q, interpolated between its floor and ceiling order statistics.
inline double percentile_linear(std::vector<double> values, double q)
{
    if (values.empty()) {
        throw DataError("percentile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw ConfigError("quantile must lie in [0,1]");
    }
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

struct PreprocessSummary {
    std::size_t rows_in = 0;
    std::size_t dropped_missing = 0;
    std::size_t dropped_nonpositive_target = 0;
    std::size_t dropped_outliers = 0;
    std::size_t rows_out = 0;
    double outlier_threshold = 0.0;
    std::vector<std::string> dropped_columns;
};

struct PreprocessResult {
    Frame frame;
    PreprocessSummary summary;
};

inline constexpr double kOutlierQuantile = 0.99;

/// Encodes every categorical-binary column through its schema mapping and
/// records the original codes. Columns already encoded are left as they are.
inline Frame encode_categoricals(const Frame& frame, const Schema& schema)
{
    Frame out = frame;
    for (auto& col : out.columns) {
        if (col.kind != ColumnKind::categorical_binary) {
            continue;
        }
        if (!col.encoded()) {
            const auto* spec = schema.find(col.name);
            if (spec == nullptr) {
                throw ConfigError("column '" + col.name + "' is not declared in the schema");
            }
            col.values.resize(col.labels.size());
            for (std::size_t i = 0; i < col.labels.size(); ++i) {
                const auto code = spec->encode(col.labels[i]);
                if (!code) {
                    throw DataError("column '" + col.name + "': label '" + col.labels[i]
                                    + "' is not covered by the encoding");
                }
                col.values[i] = static_cast<double>(*code);
            }
            col.labels.clear();
        }
        auto& codes = out.group_labels[col.name];
        codes.clear();
        for (double v : col.values) {
            codes.push_back(static_cast<std::uint8_t>(v != 0.0));
        }
    }
    out.check_invariants();
    return out;
}

/// The cleaning pipeline, in order: drop leakage and unused columns; drop
/// rows with a missing cell; drop rows with target <= 0; label-encode
/// categoricals; drop rows whose target exceeds the 99th percentile of what
/// remains. A frame that has already been through the pipeline is returned
/// unchanged, so the operation is idempotent.
inline PreprocessResult preprocess_with_summary(const Frame& frame, const Schema& schema)
{
    PreprocessResult result;
    auto& summary = result.summary;
    summary.rows_in = frame.n_rows();
    if (frame.preprocessed) {
        result.frame = frame;
        summary.rows_out = frame.n_rows();
        return result;
    }

    Frame kept;
    kept.target_name = frame.target_name;
    kept.target = frame.target;
    for (const auto& col : frame.columns) {
        if (schema.is_leakage(col.name) || col.kind == ColumnKind::dropped) {
            summary.dropped_columns.push_back(col.name);
            continue;
        }
        kept.columns.push_back(col);
    }

    const auto n = kept.n_rows();
    std::vector<std::size_t> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        bool missing = std::isnan(kept.target[i]);
        for (const auto& col : kept.columns) {
            if (missing) {
                break;
            }
            if (col.encoded()) {
                missing = std::isnan(col.values[i]);
            } else {
                const auto* spec = schema.find(col.name);
                missing = spec != nullptr && spec->is_missing(col.labels[i]);
            }
        }
        if (missing) {
            ++summary.dropped_missing;
        } else if (!(kept.target[i] > 0.0)) {
            ++summary.dropped_nonpositive_target;
        } else {
            rows.push_back(i);
        }
    }
    if (rows.empty()) {
        throw DataError("no rows left after dropping missing values and non-positive targets");
    }
    Frame encoded = encode_categoricals(kept.take(rows), schema);

    summary.outlier_threshold = percentile_linear(encoded.target, kOutlierQuantile);
    rows.clear();
    for (std::size_t i = 0; i < encoded.n_rows(); ++i) {
        if (encoded.target[i] > summary.outlier_threshold) {
            ++summary.dropped_outliers;
        } else {
            rows.push_back(i);
        }
    }
    result.frame = encoded.take(rows);
    result.frame.preprocessed = true;
    result.frame.check_invariants();
    summary.rows_out = result.frame.n_rows();
    return result;
}

inline Frame preprocess(const Frame& frame, const Schema& schema)
{
    return preprocess_with_summary(frame, schema).frame;
}

}  // namespace fairscope
