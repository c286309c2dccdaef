#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairscope/audit/run.hpp"
#include "fairscope/ingest/csv.hpp"

namespace fairscope {

inline nlohmann::ordered_json to_json(const GroupDensity& d)
{
    return {{"mu", d.mu}, {"sigma", d.sigma}, {"count", d.count}};
}

inline nlohmann::ordered_json to_json(const FoldResult& f)
{
    nlohmann::ordered_json j;
    j["fold"] = f.fold_index;
    j["skipped"] = f.skipped;
    if (f.skipped) {
        j["warning"] = f.warning;
        return j;
    }
    j["original"] = {to_json(f.p[0]), to_json(f.p[1])};
    j["alternated"] = {to_json(f.q[0]), to_json(f.q[1])};
    j["actual_mean"] = f.actual_mean;
    j["kl"] = f.kl;
    return j;
}

inline nlohmann::ordered_json to_json(const LearnerScore& s)
{
    nlohmann::ordered_json j;
    j["learner"] = s.learner;
    j["mean_prediction"] = s.mean_prediction;
    j["mean_alternated"] = s.mean_alternated;
    j["average_kl"] = s.average_kl;
    j["pba_flag"] = s.pba_flag;
    j["folds"] = nlohmann::ordered_json::array();
    for (const auto& f : s.folds) {
        j["folds"].push_back(to_json(f));
    }
    return j;
}

inline nlohmann::ordered_json to_json(const AttributeResult& a)
{
    nlohmann::ordered_json j;
    j["attribute"] = a.spec.attribute;
    j["groups"] = {a.spec.group_names.at(0), a.spec.group_names.at(1)};
    j["group_count"] = a.group_count;
    j["actual_mean"] = a.actual_mean;
    j["learners"] = nlohmann::ordered_json::array();
    for (const auto& l : a.learners) {
        j["learners"].push_back(to_json(l));
    }
    return j;
}

/// Report document with a fixed field order. Timestamps are written only
/// when present, so deterministic runs can leave them empty.
inline nlohmann::ordered_json to_json(const AuditReport& r)
{
    nlohmann::ordered_json j;
    j["format"] = "fairscope-audit-report/1";
    j["config"] = to_json(r.config);
    nlohmann::ordered_json meta;
    meta["seed"] = r.metadata.seed;
    meta["mode"] = to_string(r.config.mode);
    meta["dataset_digest"] = r.metadata.dataset_digest;
    meta["rows"] = r.metadata.n_rows;
    meta["features"] = r.metadata.n_features;
    if (!r.metadata.started_at.empty()) {
        meta["started_at"] = r.metadata.started_at;
    }
    if (!r.metadata.finished_at.empty()) {
        meta["finished_at"] = r.metadata.finished_at;
    }
    meta["warnings"] = r.metadata.warnings;
    j["metadata"] = meta;
    j["attributes"] = nlohmann::ordered_json::array();
    for (const auto& a : r.attributes) {
        j["attributes"].push_back(to_json(a));
    }
    j["stacked"] = nlohmann::ordered_json::array();
    for (const auto& a : r.stacked) {
        j["stacked"].push_back(to_json(a));
    }
    return j;
}

using TableRow = std::vector<std::string>;

struct BiasTables {
    /// learner, then one average-KL column per attribute in config order.
    std::vector<TableRow> scores;
    /// attribute, learner, group, actual mean, prediction, alternated
    /// prediction, average KL.
    std::vector<TableRow> groups;
};

inline constexpr int kScoreDecimals = 5;
inline constexpr int kMeanDecimals = 4;

/// Tabulates a report: an average-KL matrix (learners x attributes, plus a
/// row for the stack when present) and per-group mean rows.
inline BiasTables bias_table(const AuditReport& report)
{
    BiasTables t;
    TableRow header{"learner"};
    for (const auto& a : report.attributes) {
        header.push_back(a.spec.attribute);
    }
    t.scores.push_back(header);
    for (std::size_t l = 0; l < report.config.learners.size(); ++l) {
        TableRow row{report.config.learners[l].name};
        for (const auto& a : report.attributes) {
            row.push_back(format_fixed(a.learners[l].average_kl, kScoreDecimals));
        }
        t.scores.push_back(row);
    }
    if (report.config.stack) {
        TableRow row{report.config.stack->name};
        for (const auto& a : report.attributes) {
            const auto* s = report.stacked_attribute(a.spec.attribute);
            row.push_back(s != nullptr ? format_fixed(s->learners.front().average_kl, kScoreDecimals) : "");
        }
        t.scores.push_back(row);
    }

    t.groups.push_back({"attribute", "learner", "group", "actual_mean", "prediction", "alternated_prediction",
                        "average_kl"});
    auto emit = [&](const AttributeResult& a) {
        for (const auto& s : a.learners) {
            for (int g = 0; g < 2; ++g) {
                const auto gi = static_cast<std::size_t>(g);
                t.groups.push_back({a.spec.attribute, s.learner, a.spec.group_names.at(g),
                                    format_fixed(a.actual_mean[gi], kMeanDecimals),
                                    format_fixed(s.mean_prediction[gi], kMeanDecimals),
                                    format_fixed(s.mean_alternated[gi], kMeanDecimals),
                                    format_fixed(s.average_kl, kScoreDecimals)});
            }
        }
    };
    for (const auto& a : report.attributes) {
        emit(a);
    }
    for (const auto& a : report.stacked) {
        emit(a);
    }
    return t;
}

/// Per-fold series of one attribute, every learner (and the stack).
inline std::vector<TableRow> fold_table(const AuditReport& report, const std::string& attribute)
{
    std::vector<TableRow> rows;
    rows.push_back({"learner", "fold", "skipped", "count_0", "count_1", "mean_prediction_0", "mean_alternated_0",
                    "mean_prediction_1", "mean_alternated_1", "kl_0", "kl_1"});
    auto emit = [&](const AttributeResult& a) {
        for (const auto& s : a.learners) {
            for (const auto& f : s.folds) {
                if (f.skipped) {
                    rows.push_back({s.learner, std::to_string(f.fold_index), "1", "", "", "", "", "", "", "", ""});
                    continue;
                }
                rows.push_back({s.learner, std::to_string(f.fold_index), "0", std::to_string(f.p[0].count),
                                std::to_string(f.p[1].count), format_fixed(f.p[0].mu, kMeanDecimals),
                                format_fixed(f.q[0].mu, kMeanDecimals), format_fixed(f.p[1].mu, kMeanDecimals),
                                format_fixed(f.q[1].mu, kMeanDecimals), format_fixed(f.kl[0], kScoreDecimals + 3),
                                format_fixed(f.kl[1], kScoreDecimals + 3)});
            }
        }
    };
    emit(report.attribute(attribute));
    if (const auto* s = report.stacked_attribute(attribute)) {
        emit(*s);
    }
    return rows;
}

inline void write_table(const std::vector<TableRow>& rows, std::ostream& out)
{
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) {
                out << ',';
            }
            out << csv_detail::quote_if_needed(row[i]);
        }
        out << '\n';
    }
}

}  // namespace fairscope
