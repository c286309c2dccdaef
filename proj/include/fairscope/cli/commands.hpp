#pragma once

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairscope/audit/config.hpp"
#include "fairscope/audit/report.hpp"
#include "fairscope/audit/run.hpp"
#include "fairscope/cli/svg.hpp"
#include "fairscope/error.hpp"
#include "fairscope/ingest/csv.hpp"
#include "fairscope/ingest/fetch.hpp"
#include "fairscope/ingest/preprocess.hpp"
#include "fairscope/ingest/schema.hpp"
#include "fairscope/learners/tune.hpp"
#include "fairscope/parallel.hpp"
#include "fairscope/synth/generate.hpp"

namespace fairscope::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kConfig = 2,
    kFetch = 3,
    kData = 4,
};

struct AuditOverrides {
    std::optional<std::int64_t> folds;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
    bool deterministic = false;
    unsigned threads = 0;
    std::vector<std::string> argv;
};

/// Record of one run: what was asked, what it consumed, what it wrote.
struct RunManifest {
    std::vector<std::string> command_line;
    std::string config_digest;
    std::string dataset_digest;
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
};

namespace detail {

inline std::string utc_now()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline nlohmann::json read_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + " is not valid JSON: " + e.what());
    }
}

template <typename Json>
void write_json(const std::filesystem::path& path, const Json& doc)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

/// "schema" may be inline or a path relative to the config file.
inline Schema schema_from_config(const nlohmann::json& config, const std::filesystem::path& config_path)
{
    if (!config.contains("schema")) {
        throw ConfigError("schema: config does not name a schema");
    }
    const auto& s = config.at("schema");
    if (s.is_string()) {
        std::filesystem::path p = s.get<std::string>();
        if (p.is_relative()) {
            p = config_path.parent_path() / p;
        }
        return load_schema(p);
    }
    return schema_from_json(s);
}

inline std::string file_token(const std::string& name)
{
    std::string out;
    for (unsigned char ch : name) {
        out.push_back(std::isalnum(ch) ? static_cast<char>(ch) : '_');
    }
    return out;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body)
{
    try {
        return body();
    } catch (const DigestMismatch& e) {
        err << "error: digest mismatch\n  expected: " << e.expected() << "\n  actual:   " << e.actual() << '\n';
        return kFetch;
    } catch (const FetchError& e) {
        err << "error: " << e.what() << '\n';
        return kFetch;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["command_line"] = m.command_line;
    j["config_digest"] = m.config_digest;
    j["dataset_digest"] = m.dataset_digest;
    j["seed"] = m.seed;
    j["artifacts"] = m.artifacts;
    return j;
}

inline int cmd_fetch(const std::string& url, const std::string& sha256, const std::filesystem::path& out,
                     std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return detail::guarded(err, [&] {
        const auto path = fetch_dataset(url, sha256, out);
        log << path.string() << '\n';
        return kOk;
    });
}

/// ingest -> preprocess -> audit, then every artifact under out_dir.
inline int cmd_audit(const std::filesystem::path& config_path, const std::filesystem::path& data_path,
                     const std::filesystem::path& out_dir, const AuditOverrides& overrides = {},
                     std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return detail::guarded(err, [&] {
        const std::string started = overrides.deterministic ? "" : detail::utc_now();
        nlohmann::json doc = detail::read_json(config_path);
        if (overrides.folds) {
            doc["k"] = *overrides.folds;
        }
        if (overrides.seed) {
            doc["seed"] = *overrides.seed;
        }
        if (overrides.mode) {
            doc["mode"] = *overrides.mode;
        }
        const AuditConfig config = audit_config_from_json(doc);
        const Schema schema = detail::schema_from_config(doc, config_path);

        const auto pre = preprocess_with_summary(load_csv(data_path, schema), schema);
        log << "rows: " << pre.summary.rows_in << " read, " << pre.summary.rows_out << " kept (missing "
            << pre.summary.dropped_missing << ", non-positive target " << pre.summary.dropped_nonpositive_target
            << ", outliers " << pre.summary.dropped_outliers << ")\n";

        AuditReport report = run_audit(pre.frame, config, resolve_threads(overrides.threads));
        report.metadata.dataset_digest = sha256_file(data_path);
        report.metadata.started_at = started;
        report.metadata.finished_at = overrides.deterministic ? "" : detail::utc_now();
        for (const auto& w : report.metadata.warnings) {
            err << "warning: " << w << '\n';
        }

        std::filesystem::create_directories(out_dir);
        RunManifest manifest;
        manifest.command_line = overrides.argv;
        manifest.config_digest = sha256_file(config_path);
        manifest.dataset_digest = report.metadata.dataset_digest;
        manifest.seed = config.seed;
        auto emit = [&](const std::string& name) {
            manifest.artifacts.push_back(name);
            return out_dir / name;
        };

        detail::write_json(emit("report.json"), to_json(report));
        const auto tables = bias_table(report);
        {
            std::ofstream out(emit("bias_table.csv"), std::ios::binary);
            write_table(tables.scores, out);
        }
        {
            std::ofstream out(emit("group_table.csv"), std::ios::binary);
            write_table(tables.groups, out);
        }
        for (const auto& a : report.attributes) {
            const auto token = detail::file_token(a.spec.attribute);
            {
                std::ofstream out(emit("folds_" + token + ".csv"), std::ios::binary);
                write_table(fold_table(report, a.spec.attribute), out);
            }
            auto plot = [&](const AttributeResult& attr, const LearnerScore& s) {
                std::ofstream out(emit("plot_" + token + "_" + detail::file_token(s.learner) + ".svg"),
                                  std::ios::binary);
                write_fold_plot(out, attr, s, started);
            };
            for (const auto& s : a.learners) {
                plot(a, s);
            }
            if (const auto* st = report.stacked_attribute(a.spec.attribute)) {
                plot(*st, st->learners.front());
            }
        }
        manifest.artifacts.push_back("manifest.json");
        detail::write_json(out_dir / "manifest.json", to_json(manifest));
        for (const auto& row : tables.scores) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                log << (i ? "\t" : "") << row[i];
            }
            log << '\n';
        }
        return kOk;
    });
}

/// Random search for one learner; writes the trial log as JSON.
inline int cmd_tune(const std::filesystem::path& config_path, const std::filesystem::path& data_path,
                    const std::filesystem::path& out, unsigned threads = 0, std::ostream& log = std::cout,
                    std::ostream& err = std::cerr)
{
    return detail::guarded(err, [&] {
        const nlohmann::json doc = detail::read_json(config_path);
        const Schema schema = detail::schema_from_config(doc, config_path);
        LearnerConfig base;
        HyperSpace space;
        std::size_t budget = 0;
        std::size_t k = 5;
        std::uint64_t seed = 0;
        try {
            base = learner_config_from_json(doc.at("learner"));
            space = hyper_space_from_json(doc.at("space"));
            budget = doc.at("budget").get<std::size_t>();
            k = doc.value("k", k);
            seed = doc.value("seed", seed);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed tune config: ") + e.what());
        }
        const Frame frame = preprocess(load_csv(data_path, schema), schema);
        const TuneResult result = tune(base, frame, space, budget, k, seed, resolve_threads(threads));
        if (out.has_parent_path()) {
            std::filesystem::create_directories(out.parent_path());
        }
        detail::write_json(out, to_json(result));
        log << "best cv rmse " << format_fixed(result.best_cv_rmse, 6) << " over " << result.trials.size()
            << " trials\n";
        return kOk;
    });
}

/// Generates a synthetic population; writes the CSV and, next to it,
/// `<stem>.schema.json` for loading it back.
inline int cmd_synth(const std::filesystem::path& spec_path, const std::filesystem::path& out_csv,
                     std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    return detail::guarded(err, [&] {
        const SynthSpec spec = synth_spec_from_json(detail::read_json(spec_path));
        const Frame frame = generate(spec);
        if (out_csv.has_parent_path()) {
            std::filesystem::create_directories(out_csv.parent_path());
        }
        write_csv(frame, out_csv);
        auto schema_path = out_csv;
        schema_path.replace_extension(".schema.json");
        detail::write_json(schema_path, schema_to_json(synth_schema(spec)));
        log << out_csv.string() << ": " << frame.n_rows() << " rows\n";
        return kOk;
    });
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& log = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"fairscope: audit regression models for dependence on protected binary attributes"};
    app.require_subcommand(1);

    std::string url;
    std::string sha;
    std::string fetch_out;
    auto* fetch = app.add_subcommand("fetch", "download a dataset and verify its SHA-256");
    fetch->add_option("--url", url, "source URL")->required();
    fetch->add_option("--sha256", sha, "expected hex digest")->required();
    fetch->add_option("--out", fetch_out, "destination file")->required();

    std::string config;
    std::string data;
    std::string out;
    std::int64_t folds = 0;
    std::uint64_t seed = 0;
    std::string mode;
    bool deterministic = false;
    unsigned threads = 0;
    auto* audit = app.add_subcommand("audit", "run the bias audit and write its report");
    audit->add_option("--config", config, "audit config JSON")->required();
    audit->add_option("--data", data, "CSV data file")->required();
    audit->add_option("--out", out, "output directory")->required();
    auto* folds_opt = audit->add_option("--folds", folds, "fold count override (default 15)");
    auto* seed_opt = audit->add_option("--seed", seed, "seed override");
    auto* mode_opt = audit->add_option("--mode", mode, "predict-alternated | retrain-alternated");
    audit->add_flag("--deterministic", deterministic, "omit timestamps from artifacts");
    audit->add_option("--threads", threads, "worker threads (default FAIRSCOPE_THREADS or all cores)");

    std::string tune_config;
    std::string tune_data;
    std::string tune_out;
    unsigned tune_threads = 0;
    auto* tune_cmd = app.add_subcommand("tune", "random hyperparameter search by k-fold RMSE");
    tune_cmd->add_option("--config", tune_config, "tune config JSON")->required();
    tune_cmd->add_option("--data", tune_data, "CSV data file")->required();
    tune_cmd->add_option("--out", tune_out, "result JSON path")->required();
    tune_cmd->add_option("--threads", tune_threads, "worker threads");

    std::string spec_path;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "generate a synthetic population CSV");
    synth->add_option("--spec", spec_path, "synth spec JSON")->required();
    synth->add_option("--out", synth_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, log, err);
        return rc == 0 ? kOk : kConfig;
    }

    if (fetch->parsed()) {
        return cmd_fetch(url, sha, fetch_out, log, err);
    }
    if (audit->parsed()) {
        AuditOverrides o;
        if (folds_opt->count() > 0) o.folds = folds;
        if (seed_opt->count() > 0) o.seed = seed;
        if (mode_opt->count() > 0) o.mode = mode;
        o.deterministic = deterministic;
        o.threads = threads;
        o.argv.assign(argv, argv + argc);
        return cmd_audit(config, data, out, o, log, err);
    }
    if (tune_cmd->parsed()) {
        return cmd_tune(tune_config, tune_data, tune_out, tune_threads, log, err);
    }
    return cmd_synth(spec_path, synth_out, log, err);
}

}  // namespace fairscope::cli
