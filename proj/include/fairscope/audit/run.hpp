#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fairscope/alternation/alternate.hpp"
#include "fairscope/audit/config.hpp"
#include "fairscope/divergence/gaussian.hpp"
#include "fairscope/ensemble/stack.hpp"
#include "fairscope/error.hpp"
#include "fairscope/ingest/folds.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/learners/fit.hpp"
#include "fairscope/parallel.hpp"
#include "fairscope/random.hpp"

namespace fairscope {

/// One test fold of one (learner, attribute) cell. Index g is the sample's
/// original attribute code: p[g] fits the predictions before alternation,
/// q[g] the predictions of the same rows after it, and kl[g] = KL(p[g] || q[g]).
struct FoldResult {
    std::size_t fold_index = 0;
    bool skipped = false;
    std::string warning;
    std::array<GroupDensity, 2> p{};
    std::array<GroupDensity, 2> q{};
    std::array<double, 2> actual_mean{};
    std::array<double, 2> kl{};

    std::size_t count(int g) const { return p[static_cast<std::size_t>(g)].count; }
    double mean_prediction(int g) const { return p[static_cast<std::size_t>(g)].mu; }
    double mean_alternated(int g) const { return q[static_cast<std::size_t>(g)].mu; }
};

/// All folds of one learner (or the stack) on one attribute.
struct LearnerScore {
    std::string learner;
    std::vector<FoldResult> folds;
    /// Pooled over every scored test row of the group.
    std::array<double, 2> mean_prediction{};
    std::array<double, 2> mean_alternated{};
    /// Mean of both directions over every scored fold.
    double average_kl = 0.0;
    bool pba_flag = false;
};

struct AttributeResult {
    AlternationSpec spec;
    /// Mean observed target per group over the whole frame.
    std::array<double, 2> actual_mean{};
    std::array<std::size_t, 2> group_count{};
    std::vector<LearnerScore> learners;

    const LearnerScore& learner(std::string_view name) const
    {
        for (const auto& l : learners) {
            if (l.learner == name) {
                return l;
            }
        }
        throw ConfigError("no result for learner '" + std::string(name) + "'");
    }
};

struct RunMetadata {
    std::uint64_t seed = 0;
    std::string dataset_digest;
    std::size_t n_rows = 0;
    std::size_t n_features = 0;
    std::string started_at;
    std::string finished_at;
    std::vector<std::string> warnings;
};

struct AuditReport {
    AuditConfig config;
    std::vector<AttributeResult> attributes;
    /// Stacked-model results, one entry per attribute audited with the stack.
    std::vector<AttributeResult> stacked;
    RunMetadata metadata;

    const AttributeResult& attribute(std::string_view name) const
    {
        for (const auto& a : attributes) {
            if (a.spec.attribute == name) {
                return a;
            }
        }
        throw ConfigError("no result for attribute '" + std::string(name) + "'");
    }

    const AttributeResult* stacked_attribute(std::string_view name) const
    {
        for (const auto& a : stacked) {
            if (a.spec.attribute == name) {
                return &a;
            }
        }
        return nullptr;
    }
};

/// Seed used to fit a learner on a fold, so every fold model is an
/// independent but reproducible draw.
inline std::uint64_t fold_seed(std::uint64_t audit_seed, const LearnerConfig& learner, std::size_t fold)
{
    return derive_seed(mix_seed(audit_seed) ^ learner.seed, fold);
}

/// Groups the fold's rows by original attribute code and compares the two
/// prediction vectors per group. A group with no rows marks the fold skipped.
inline FoldResult fold_result_from_predictions(std::size_t fold_index, std::span<const std::uint8_t> groups,
                                               const Eigen::VectorXd& original, const Eigen::VectorXd& alternated,
                                               std::span<const double> actual)
{
    FoldResult r;
    r.fold_index = fold_index;
    std::array<std::vector<double>, 2> orig;
    std::array<std::vector<double>, 2> alt;
    std::array<double, 2> actual_sum{};
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const auto g = groups[i] ? 1 : 0;
        orig[g].push_back(original[static_cast<Eigen::Index>(i)]);
        alt[g].push_back(alternated[static_cast<Eigen::Index>(i)]);
        actual_sum[g] += actual[i];
    }
    for (int g = 0; g < 2; ++g) {
        if (orig[g].empty()) {
            r.skipped = true;
            r.warning = "fold " + std::to_string(fold_index) + " has no rows in group " + std::to_string(g);
            return r;
        }
    }
    for (std::size_t g = 0; g < 2; ++g) {
        r.p[g] = fit_normal(orig[g]);
        r.q[g] = fit_normal(alt[g]);
        r.actual_mean[g] = actual_sum[g] / static_cast<double>(orig[g].size());
        r.kl[g] = kl_gaussian(r.p[g], r.q[g]);
    }
    return r;
}

namespace audit_detail {

inline std::size_t feature_index(const Frame& frame, const std::string& attribute)
{
    const auto names = frame.feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] == attribute) {
            return j;
        }
    }
    throw ConfigError("attribute '" + attribute + "' is not a model feature");
}

inline Eigen::MatrixXd rows_of(const Eigen::MatrixXd& x, std::span<const std::size_t> rows)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

inline Eigen::VectorXd rows_of(const Eigen::VectorXd& y, std::span<const std::size_t> rows)
{
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
    }
    return out;
}

inline Eigen::MatrixXd flipped(Eigen::MatrixXd x, std::size_t column)
{
    auto col = x.col(static_cast<Eigen::Index>(column));
    col = (1.0 - col.array()).matrix();
    return x;
}

/// Pools fold results into the per-learner summary.
inline LearnerScore summarize(std::string learner, std::vector<FoldResult> folds, double threshold,
                              const std::string& attribute)
{
    LearnerScore s;
    s.learner = std::move(learner);
    s.folds = std::move(folds);
    std::array<double, 2> sum_pred{};
    std::array<double, 2> sum_alt{};
    std::array<double, 2> count{};
    double kl_sum = 0.0;
    std::size_t kl_terms = 0;
    for (const auto& f : s.folds) {
        if (f.skipped) {
            continue;
        }
        for (std::size_t g = 0; g < 2; ++g) {
            const auto c = static_cast<double>(f.p[g].count);
            sum_pred[g] += f.p[g].mu * c;
            sum_alt[g] += f.q[g].mu * c;
            count[g] += c;
            kl_sum += f.kl[g];
            ++kl_terms;
        }
    }
    if (kl_terms == 0) {
        throw DataError("attribute '" + attribute + "' has an empty group in every fold");
    }
    for (std::size_t g = 0; g < 2; ++g) {
        s.mean_prediction[g] = sum_pred[g] / count[g];
        s.mean_alternated[g] = sum_alt[g] / count[g];
    }
    s.average_kl = kl_sum / static_cast<double>(kl_terms);
    s.pba_flag = classify_pba(s.average_kl, threshold);
    return s;
}

}  // namespace audit_detail

/// One fold of the procedure for a single learner and attribute: fit on
/// `train`, predict `test`, alternate the attribute, predict again (with the
/// same model, or one refitted on the alternated training rows), then
/// compare per-group prediction densities.
inline FoldResult run_fold(const Frame& train, const Frame& test, const LearnerConfig& learner,
                           const AlternationSpec& spec, AuditMode mode, std::size_t fold_index = 0)
{
    check_alternation(train, spec);
    check_alternation(test, spec);
    const Model model = fit(learner, train);
    const Eigen::VectorXd original = predict(model, test);
    const Frame test_alt = alternate(test, spec);
    Eigen::VectorXd alternated;
    if (mode == AuditMode::predict_alternated) {
        alternated = predict(model, test_alt);
    } else {
        alternated = predict(fit(learner, alternate(train, spec)), test_alt);
    }
    std::vector<std::uint8_t> groups;
    if (const auto it = test.group_labels.find(spec.attribute); it != test.group_labels.end()) {
        groups = it->second;
    } else {
        for (double v : test.column(spec.attribute).values) {
            groups.push_back(v != 0.0 ? 1 : 0);
        }
    }
    return fold_result_from_predictions(fold_index, groups, original, alternated, test.target);
}

/// The full audit: one fold plan from (n, k, seed); every learner on every
/// fold; every attribute scored from those fits; then, if configured, the
/// weighted stack on the requested (or unanimously flagged) attributes.
/// Work is spread over `threads` workers with results stored by
/// (learner, fold) slot, so the report does not depend on the thread count.
inline AuditReport run_audit(const Frame& frame, const AuditConfig& config, unsigned threads = 1)
{
    config.validate();
    for (const auto& spec : config.pba_specs) {
        check_alternation(frame, spec);
    }
    const FoldPlan plan = make_folds(frame.n_rows(), config.k, config.seed);
    const Eigen::MatrixXd x = frame.feature_matrix();
    const Eigen::VectorXd y = frame.target_vector();
    const auto feature_names = frame.feature_names();
    const auto n_learners = config.learners.size();
    const auto n_attrs = config.pba_specs.size();
    const auto k = config.k;

    std::vector<std::size_t> attr_column(n_attrs);
    for (std::size_t a = 0; a < n_attrs; ++a) {
        attr_column[a] = audit_detail::feature_index(frame, config.pba_specs[a].attribute);
    }
    std::vector<std::vector<std::size_t>> test_rows(k);
    std::vector<std::vector<std::size_t>> train_rows(k);
    for (std::size_t f = 0; f < k; ++f) {
        test_rows[f] = plan.test_indices(f);
        train_rows[f] = plan.train_indices(f);
    }

    // original[l][f], alternated[l][a][f]
    std::vector<std::vector<Eigen::VectorXd>> original(n_learners, std::vector<Eigen::VectorXd>(k));
    std::vector<std::vector<std::vector<Eigen::VectorXd>>> alternated(
        n_learners, std::vector<std::vector<Eigen::VectorXd>>(n_attrs, std::vector<Eigen::VectorXd>(k)));

    parallel_for(n_learners * k, threads, [&](std::size_t task) {
        const auto l = task / k;
        const auto f = task % k;
        LearnerConfig learner = config.learners[l];
        learner.seed = fold_seed(config.seed, config.learners[l], f);
        const Eigen::MatrixXd x_train = audit_detail::rows_of(x, train_rows[f]);
        const Eigen::VectorXd y_train = audit_detail::rows_of(y, train_rows[f]);
        const Eigen::MatrixXd x_test = audit_detail::rows_of(x, test_rows[f]);
        const Model model = fit(learner, x_train, y_train);
        original[l][f] = predict(model, x_test);
        for (std::size_t a = 0; a < n_attrs; ++a) {
            const Eigen::MatrixXd x_test_alt = audit_detail::flipped(x_test, attr_column[a]);
            if (config.mode == AuditMode::predict_alternated) {
                alternated[l][a][f] = predict(model, x_test_alt);
            } else {
                const Model refit = fit(learner, audit_detail::flipped(x_train, attr_column[a]), y_train);
                alternated[l][a][f] = predict(refit, x_test_alt);
            }
        }
    });

    AuditReport report;
    report.config = config;
    report.metadata.seed = config.seed;
    report.metadata.n_rows = frame.n_rows();
    report.metadata.n_features = feature_names.size();

    // Original codes per attribute; alternation never touches these.
    std::vector<std::vector<std::uint8_t>> codes(n_attrs);
    for (std::size_t a = 0; a < n_attrs; ++a) {
        const auto it = frame.group_labels.find(config.pba_specs[a].attribute);
        if (it != frame.group_labels.end()) {
            codes[a] = it->second;
        } else {
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                codes[a].push_back(x(i, static_cast<Eigen::Index>(attr_column[a])) != 0.0 ? 1 : 0);
            }
        }
    }
    auto fold_groups = [&](std::size_t a, std::size_t f) {
        std::vector<std::uint8_t> groups;
        std::vector<double> actual;
        for (auto r : test_rows[f]) {
            groups.push_back(codes[a][r]);
            actual.push_back(y[static_cast<Eigen::Index>(r)]);
        }
        return std::pair{groups, actual};
    };

    auto score_cell = [&](const std::string& name, std::size_t a,
                          const std::function<const Eigen::VectorXd&(std::size_t)>& orig_of,
                          const std::function<const Eigen::VectorXd&(std::size_t)>& alt_of) {
        std::vector<FoldResult> folds;
        for (std::size_t f = 0; f < k; ++f) {
            const auto [groups, actual] = fold_groups(a, f);
            auto r = fold_result_from_predictions(f, groups, orig_of(f), alt_of(f), actual);
            if (r.skipped) {
                report.metadata.warnings.push_back(name + " / " + config.pba_specs[a].attribute + ": " + r.warning);
            }
            folds.push_back(std::move(r));
        }
        return audit_detail::summarize(name, std::move(folds), config.pba_threshold, config.pba_specs[a].attribute);
    };

    for (std::size_t a = 0; a < n_attrs; ++a) {
        AttributeResult result;
        result.spec = config.pba_specs[a];
        std::array<double, 2> sum{};
        for (std::size_t i = 0; i < frame.n_rows(); ++i) {
            const auto g = static_cast<std::size_t>(codes[a][i]);
            sum[g] += y[static_cast<Eigen::Index>(i)];
            ++result.group_count[g];
        }
        for (std::size_t g = 0; g < 2; ++g) {
            result.actual_mean[g] = result.group_count[g] > 0 ? sum[g] / static_cast<double>(result.group_count[g]) : 0.0;
        }
        for (std::size_t l = 0; l < n_learners; ++l) {
            result.learners.push_back(score_cell(
                config.learners[l].name, a, [&](std::size_t f) -> const Eigen::VectorXd& { return original[l][f]; },
                [&](std::size_t f) -> const Eigen::VectorXd& { return alternated[l][a][f]; }));
        }
        report.attributes.push_back(std::move(result));
    }

    if (config.stack) {
        const auto& stack = *config.stack;
        std::vector<std::size_t> members;
        for (const auto& m : stack.members) {
            for (std::size_t l = 0; l < n_learners; ++l) {
                if (config.learners[l].name == m) {
                    members.push_back(l);
                }
            }
        }
        std::vector<std::size_t> stack_attrs;
        for (std::size_t a = 0; a < n_attrs; ++a) {
            const auto& res = report.attributes[a];
            const bool requested = std::find(stack.attributes.begin(), stack.attributes.end(), res.spec.attribute)
                != stack.attributes.end();
            const bool unanimous = std::all_of(res.learners.begin(), res.learners.end(),
                                               [](const LearnerScore& s) { return s.pba_flag; });
            if (stack.attributes.empty() ? unanimous : requested) {
                stack_attrs.push_back(a);
            }
        }
        std::vector<Eigen::VectorXd> stacked_original(k);
        for (std::size_t f = 0; f < k; ++f) {
            std::vector<Eigen::VectorXd> preds;
            for (auto l : members) {
                preds.push_back(original[l][f]);
            }
            stacked_original[f] = stack_combine(preds, stack.weights);
        }
        for (auto a : stack_attrs) {
            std::vector<Eigen::VectorXd> stacked_alt(k);
            for (std::size_t f = 0; f < k; ++f) {
                std::vector<Eigen::VectorXd> preds;
                for (auto l : members) {
                    preds.push_back(alternated[l][a][f]);
                }
                stacked_alt[f] = stack_combine(preds, stack.weights);
            }
            AttributeResult result;
            result.spec = report.attributes[a].spec;
            result.actual_mean = report.attributes[a].actual_mean;
            result.group_count = report.attributes[a].group_count;
            result.learners.push_back(score_cell(
                stack.name, a, [&](std::size_t f) -> const Eigen::VectorXd& { return stacked_original[f]; },
                [&](std::size_t f) -> const Eigen::VectorXd& { return stacked_alt[f]; }));
            report.stacked.push_back(std::move(result));
        }
    }
    return report;
}

}  // namespace fairscope
