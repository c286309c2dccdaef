#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairscope/error.hpp"
#include "fairscope/ingest/frame.hpp"
#include "fairscope/ingest/schema.hpp"
#include "fairscope/random.hpp"

namespace fairscope {

struct SynthFeature {
    std::string name;
    double mean = 0.0;
    double sd = 1.0;
    double coef = 0.0;
};

struct SynthAttribute {
    std::string name;
    double prevalence = 0.5;
    /// Added to the target when the attribute is 1.
    double gap = 0.0;
    /// Optional correlation knob: rows with the attribute set get
    /// `feature_shift` added to feature `shifted_feature`.
    std::string shifted_feature;
    double feature_shift = 0.0;
};

/// Synthetic population: target = base_wage + sum coef*x + sum gap*attr + noise.
struct SynthSpec {
    std::size_t n_rows = 1000;
    std::vector<SynthFeature> numeric_features;
    std::vector<SynthAttribute> binary_attributes;
    double base_wage = 800.0;
    double noise_sigma = 50.0;
    std::uint64_t seed = 0;
    std::string target_name = "wage";

    void validate() const
    {
        if (n_rows == 0) {
            throw ConfigError("n_rows must be positive");
        }
        if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
            throw ConfigError("noise_sigma must be finite and non-negative");
        }
        for (const auto& f : numeric_features) {
            if (!(f.sd >= 0.0) || !std::isfinite(f.mean) || !std::isfinite(f.coef)) {
                throw ConfigError("feature '" + f.name + "' has an invalid mean, sd or coef");
            }
        }
        for (const auto& a : binary_attributes) {
            if (!(a.prevalence > 0.0 && a.prevalence < 1.0)) {
                throw ConfigError("attribute '" + a.name + "': prevalence must lie in (0,1)");
            }
            if (!std::isfinite(a.gap) || !std::isfinite(a.feature_shift)) {
                throw ConfigError("attribute '" + a.name + "': gap and feature_shift must be finite");
            }
            if (!a.shifted_feature.empty()) {
                bool found = false;
                for (const auto& f : numeric_features) {
                    found = found || f.name == a.shifted_feature;
                }
                if (!found) {
                    throw ConfigError("attribute '" + a.name + "' shifts unknown feature '" + a.shifted_feature + "'");
                }
            }
        }
    }
};

template <typename Json>
SynthSpec synth_spec_from_json(const Json& j)
{
    SynthSpec s;
    try {
        s.n_rows = j.at("n_rows").template get<std::size_t>();
        s.base_wage = j.value("base_wage", s.base_wage);
        s.noise_sigma = j.value("noise_sigma", s.noise_sigma);
        s.seed = j.value("seed", s.seed);
        s.target_name = j.value("target_name", s.target_name);
        if (j.contains("numeric_features")) {
            for (const auto& f : j.at("numeric_features")) {
                s.numeric_features.push_back({f.at("name").template get<std::string>(), f.value("mean", 0.0),
                                              f.value("sd", 1.0), f.value("coef", 0.0)});
            }
        }
        if (j.contains("binary_attributes")) {
            for (const auto& a : j.at("binary_attributes")) {
                s.binary_attributes.push_back({a.at("name").template get<std::string>(), a.value("prevalence", 0.5),
                                               a.value("gap", 0.0), a.value("shifted_feature", std::string{}),
                                               a.value("feature_shift", 0.0)});
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed synth spec: ") + e.what());
    }
    s.validate();
    return s;
}

/// Schema under which a generated CSV loads back: features numeric,
/// attributes categorical-binary coded "0"/"1".
inline Schema synth_schema(const SynthSpec& spec)
{
    Schema schema;
    for (const auto& f : spec.numeric_features) {
        schema.columns.push_back({f.name, ColumnKind::numeric, {}, {}, {}});
    }
    for (const auto& a : spec.binary_attributes) {
        schema.columns.push_back({a.name, ColumnKind::categorical_binary, {{"0", 0}, {"1", 1}}, {}, {}});
    }
    schema.columns.push_back({spec.target_name, ColumnKind::target, {}, {}, {}});
    return schema;
}

/// Draws the population row by row from one seeded stream.
inline Frame generate(const SynthSpec& spec)
{
    spec.validate();
    const auto n_feat = spec.numeric_features.size();
    const auto n_attr = spec.binary_attributes.size();
    Frame frame;
    frame.target_name = spec.target_name;
    for (const auto& f : spec.numeric_features) {
        frame.columns.push_back({f.name, ColumnKind::numeric, {}, {}});
    }
    for (const auto& a : spec.binary_attributes) {
        frame.columns.push_back({a.name, ColumnKind::categorical_binary, {}, {}});
    }
    for (auto& c : frame.columns) {
        c.values.reserve(spec.n_rows);
    }
    frame.target.reserve(spec.n_rows);

    Rng rng(spec.seed);
    std::vector<double> attr(n_attr);
    std::vector<double> feat(n_feat);
    for (std::size_t i = 0; i < spec.n_rows; ++i) {
        for (std::size_t a = 0; a < n_attr; ++a) {
            attr[a] = uniform01(rng) < spec.binary_attributes[a].prevalence ? 1.0 : 0.0;
        }
        double y = spec.base_wage;
        for (std::size_t f = 0; f < n_feat; ++f) {
            const auto& fs = spec.numeric_features[f];
            double v = fs.mean + fs.sd * standard_normal(rng);
            for (std::size_t a = 0; a < n_attr; ++a) {
                if (spec.binary_attributes[a].shifted_feature == fs.name) {
                    v += attr[a] * spec.binary_attributes[a].feature_shift;
                }
            }
            feat[f] = v;
            y += fs.coef * v;
        }
        for (std::size_t a = 0; a < n_attr; ++a) {
            y += spec.binary_attributes[a].gap * attr[a];
        }
        y += spec.noise_sigma * standard_normal(rng);
        for (std::size_t f = 0; f < n_feat; ++f) {
            frame.columns[f].values.push_back(feat[f]);
        }
        for (std::size_t a = 0; a < n_attr; ++a) {
            frame.columns[n_feat + a].values.push_back(attr[a]);
        }
        frame.target.push_back(y);
    }
    for (std::size_t a = 0; a < n_attr; ++a) {
        auto& codes = frame.group_labels[spec.binary_attributes[a].name];
        for (double v : frame.columns[n_feat + a].values) {
            codes.push_back(static_cast<std::uint8_t>(v != 0.0));
        }
    }
    frame.check_invariants();
    return frame;
}

}  // namespace fairscope
