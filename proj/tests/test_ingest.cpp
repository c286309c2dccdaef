#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "support.hpp"

using namespace fairscope;

namespace {

Schema wage_schema()
{
    Schema s;
    s.columns = {
        {"age", ColumnKind::numeric, {}, {}, {"NaN"}},
        {"sex", ColumnKind::categorical_binary, {{"Male", 0}, {"Female", 1}}, {}, {}},
        {"occupation", ColumnKind::categorical_binary, {{"Manual", 0}, {"Office", 1}}, {}, {"Not in Universe"}},
        {"capital gains", ColumnKind::numeric, {}, {}, {}},
        {"wage", ColumnKind::target, {}, {}, {}},
    };
    s.leakage_drops = {"capital gains"};
    return s;
}

Schema target_only_schema()
{
    Schema s;
    s.columns = {{"x", ColumnKind::numeric, {}, {}, {}}, {"wage", ColumnKind::target, {}, {}, {}}};
    return s;
}

std::string wage_csv()
{
    return "age,sex,occupation,capital gains,wage\n"
           "30,Male,Manual,0,800\n"
           "41,Female,Office,10,950\n"
           "52,Female,Not in Universe,0,700\n"
           "NaN,Male,Office,0,600\n"
           "23,Male,Office,0,0\n"
           "35,Female,Manual,5,-3\n";
}

}  // namespace

TEST(LoadCsv, ThreeRowsWithMatchingSchema)
{
    Schema s;
    s.columns = {{"age", ColumnKind::numeric, {}, {}, {}},
                 {"sex", ColumnKind::categorical_binary, {{"Male", 0}, {"Female", 1}}, {}, {}},
                 {"wage", ColumnKind::target, {}, {}, {}}};
    fstest::TempDir dir("csv");
    fstest::write_file(dir / "d.csv", "age,sex,wage\n25,Male,700\n31,Female,810.5\n47,Male,900\n");
    const Frame f = load_csv(dir / "d.csv", s);
    EXPECT_EQ(f.n_rows(), 3u);
    EXPECT_EQ(f.column("age").values, (std::vector<double>{25, 31, 47}));
    EXPECT_EQ(f.column("sex").labels, (std::vector<std::string>{"Male", "Female", "Male"}));
    EXPECT_EQ(f.target, (std::vector<double>{700, 810.5, 900}));
    EXPECT_FALSE(f.preprocessed);
}

TEST(LoadCsv, HeaderOrderDoesNotMatter)
{
    const Frame f = fstest::parse("wage,x\n10,1\n20,2\n", target_only_schema());
    EXPECT_EQ(f.column("x").values, (std::vector<double>{1, 2}));
    EXPECT_EQ(f.target, (std::vector<double>{10, 20}));
}

TEST(LoadCsv, HeaderMissingColumnIsReported)
{
    try {
        fstest::parse("x\n1\n", target_only_schema());
        FAIL() << "expected a header mismatch";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("missing: [wage]"), std::string::npos) << e.what();
    }
}

TEST(LoadCsv, UnexpectedHeaderColumnIsReported)
{
    try {
        fstest::parse("x,wage,extra\n1,2,3\n", target_only_schema());
        FAIL() << "expected a header mismatch";
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("unexpected: [extra]"), std::string::npos) << e.what();
    }
}

TEST(LoadCsv, MissingFileIsADataError)
{
    EXPECT_THROW(load_csv("/nonexistent/fairscope/data.csv", target_only_schema()), DataError);
}

TEST(LoadCsv, UnparseableNumberNamesLineAndColumn)
{
    try {
        fstest::parse("x,wage\n1,2\nabc,3\n", target_only_schema());
        FAIL() << "expected a parse error";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find(":3:"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'x'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("abc"), std::string::npos) << msg;
    }
}

TEST(LoadCsv, WrongCellCountIsReported)
{
    EXPECT_THROW(fstest::parse("x,wage\n1,2,3\n", target_only_schema()), DataError);
}

TEST(LoadCsv, QuotedCellsKeepCommas)
{
    Schema s;
    s.columns = {{"label", ColumnKind::categorical_binary, {{"a, b", 0}, {"c", 1}}, {}, {}},
                 {"wage", ColumnKind::target, {}, {}, {}}};
    const Frame f = fstest::parse("label,wage\n\"a, b\",1\nc,2\n", s);
    EXPECT_EQ(f.column("label").labels, (std::vector<std::string>{"a, b", "c"}));
}

TEST(LoadCsv, HeaderlessFileReadPositionallyWhenAllowed)
{
    Schema s = target_only_schema();
    EXPECT_THROW(fstest::parse("1,10\n2,20\n", s), DataError);
    s.headerless_ok = true;
    const Frame f = fstest::parse("1,10\n2,20\n", s);
    EXPECT_EQ(f.n_rows(), 2u);
    EXPECT_EQ(f.column("x").values, (std::vector<double>{1, 2}));
}

TEST(LoadCsv, MissingMarkerInNumericColumnBecomesNaN)
{
    const Frame f = fstest::parse(wage_csv(), wage_schema());
    EXPECT_TRUE(std::isnan(f.column("age").values[3]));
}

TEST(Schema, ValidationRejectsBrokenSchemas)
{
    Schema two_targets = target_only_schema();
    two_targets.columns.push_back({"y2", ColumnKind::target, {}, {}, {}});
    EXPECT_THROW(two_targets.validate(), ConfigError);

    Schema no_target;
    no_target.columns = {{"x", ColumnKind::numeric, {}, {}, {}}};
    EXPECT_THROW(no_target.validate(), ConfigError);

    Schema one_sided = target_only_schema();
    one_sided.columns.push_back({"g", ColumnKind::categorical_binary, {{"a", 0}, {"b", 0}}, {}, {}});
    EXPECT_THROW(one_sided.validate(), ConfigError);

    Schema bad_code = target_only_schema();
    bad_code.columns.push_back({"g", ColumnKind::categorical_binary, {{"a", 0}, {"b", 2}}, {}, {}});
    EXPECT_THROW(bad_code.validate(), ConfigError);

    Schema with_default = target_only_schema();
    with_default.columns.push_back({"g", ColumnKind::categorical_binary, {{"a", 0}}, 1, {}});
    EXPECT_NO_THROW(with_default.validate());
}

TEST(Schema, JsonRoundTrip)
{
    Schema s = wage_schema();
    s.columns[2].encoding_default = 1;
    s.headerless_ok = true;
    const Schema back = schema_from_json(nlohmann::json::parse(schema_to_json(s).dump()));
    ASSERT_EQ(back.columns.size(), s.columns.size());
    for (std::size_t i = 0; i < s.columns.size(); ++i) {
        EXPECT_EQ(back.columns[i].name, s.columns[i].name);
        EXPECT_EQ(back.columns[i].kind, s.columns[i].kind);
        EXPECT_EQ(back.columns[i].encoding, s.columns[i].encoding);
        EXPECT_EQ(back.columns[i].encoding_default, s.columns[i].encoding_default);
        EXPECT_EQ(back.columns[i].missing_markers, s.columns[i].missing_markers);
    }
    EXPECT_EQ(back.leakage_drops, s.leakage_drops);
    EXPECT_TRUE(back.headerless_ok);
}

TEST(Schema, ShippedCensusSchema)
{
    const Schema s = load_schema(fstest::data_dir() / "census_kdd.schema.json");
    EXPECT_EQ(s.columns.size(), 42u);
    EXPECT_EQ(s.target().name, "wage per hour");
    const std::set<std::string> leakage(s.leakage_drops.begin(), s.leakage_drops.end());
    const std::set<std::string> expected{"major industry code",   "reason for unemployment",
                                         "full or part time employment stat", "capital gains",
                                         "capital losses",        "dividends from stocks",
                                         "tax filer stat"};
    EXPECT_EQ(leakage, expected);
    const auto* sex = s.find("sex");
    ASSERT_NE(sex, nullptr);
    EXPECT_EQ(sex->encode("Male"), 0);
    EXPECT_EQ(sex->encode("Female"), 1);
}

TEST(Preprocess, NotInUniverseRowIsDropped)
{
    const Frame raw = fstest::parse(wage_csv(), wage_schema());
    const Frame out = preprocess(raw, wage_schema());
    for (double age : out.column("age").values) {
        EXPECT_NE(age, 52.0);
    }
}

TEST(Preprocess, MaleIsZeroFemaleIsOne)
{
    Schema s = wage_schema();
    // Row 2 holds a missing-value marker, which only the full pipeline drops.
    const Frame raw = fstest::parse(wage_csv(), s).take(std::vector<std::size_t>{0, 1, 3, 4, 5});
    const Frame encoded = encode_categoricals(raw, s);
    const auto& labels = raw.column("sex").labels;
    const auto& codes = encoded.column("sex").values;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_EQ(codes[i], labels[i] == "Male" ? 0.0 : 1.0);
    }
    EXPECT_EQ(encoded.group_labels.at("sex"), (std::vector<std::uint8_t>{0, 1, 0, 0, 1}));
}

TEST(Preprocess, PipelineOrderAndCounters)
{
    const Schema s = wage_schema();
    const Frame raw = fstest::parse(wage_csv(), s);
    const auto r = preprocess_with_summary(raw, s);
    EXPECT_EQ(r.summary.rows_in, 6u);
    EXPECT_EQ(r.summary.dropped_missing, 2u);
    EXPECT_EQ(r.summary.dropped_nonpositive_target, 2u);
    // p99 of {800, 950} is 948.5, so 950 goes.
    EXPECT_EQ(r.summary.dropped_outliers, 1u);
    EXPECT_EQ(r.summary.rows_out, 1u);
    EXPECT_EQ(r.summary.rows_in - r.summary.rows_out,
              r.summary.dropped_missing + r.summary.dropped_nonpositive_target + r.summary.dropped_outliers);
    EXPECT_EQ(r.frame.find("capital gains"), nullptr);
    EXPECT_EQ(r.frame.target, (std::vector<double>{800}));
    EXPECT_TRUE(r.frame.preprocessed);
}

TEST(Preprocess, InputIsUnchanged)
{
    const Schema s = wage_schema();
    const Frame raw = fstest::parse(wage_csv(), s);
    const Frame copy = fstest::parse(wage_csv(), s);
    (void)preprocess(raw, s);
    ASSERT_EQ(raw.columns.size(), copy.columns.size());
    EXPECT_EQ(raw.column("sex").labels, copy.column("sex").labels);
    EXPECT_EQ(raw.target, copy.target);
}

TEST(Preprocess, NinetyNinthPercentileTrim)
{
    Frame f;
    f.target_name = "wage";
    f.columns.push_back({"x", ColumnKind::numeric, {}, {}});
    for (int v = 1; v <= 100; ++v) {
        f.columns[0].values.push_back(v);
        f.target.push_back(v);
    }
    // Linear interpolation at h = (n-1) q = 98.01 between order statistics 99 and 100.
    const double h = 99.0 * 0.99;
    const double lo = std::floor(h);
    const double expected = (lo + 1.0) + (h - lo) * 1.0;
    EXPECT_NEAR(expected, 99.01, 1e-12);
    EXPECT_NEAR(percentile_linear(f.target, 0.99), expected, 1e-12);

    const auto r = preprocess_with_summary(f, target_only_schema());
    EXPECT_EQ(r.summary.dropped_outliers, 1u);
    EXPECT_EQ(r.frame.n_rows(), 99u);
    EXPECT_EQ(*std::max_element(r.frame.target.begin(), r.frame.target.end()), 99.0);
}

TEST(Preprocess, PercentileEdges)
{
    EXPECT_EQ(percentile_linear({5.0}, 0.99), 5.0);
    EXPECT_EQ(percentile_linear({3.0, 1.0, 2.0}, 0.0), 1.0);
    EXPECT_EQ(percentile_linear({3.0, 1.0, 2.0}, 1.0), 3.0);
    EXPECT_THROW(percentile_linear({}, 0.5), DataError);
}

TEST(Preprocess, IsIdempotent)
{
    const Schema s = load_schema(fstest::data_dir() / "census_kdd.schema.json");
    const Frame once = preprocess(load_csv(fstest::data_dir() / "mini_census.csv", s), s);
    const Frame twice = preprocess(once, s);
    EXPECT_TRUE(once == twice);
}

TEST(Preprocess, UncoveredLabelNamesLabelAndColumn)
{
    const Schema s = wage_schema();
    std::string csv = wage_csv() + "44,Unknown,Office,0,900\n";
    try {
        preprocess(fstest::parse(csv, s), s);
        FAIL() << "expected an encoding error";
    } catch (const DataError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("'Unknown'"), std::string::npos) << msg;
        EXPECT_NE(msg.find("'sex'"), std::string::npos) << msg;
    }
}

TEST(Preprocess, EmptyResultIsAnError)
{
    const Frame f = fstest::parse("x,wage\n1,0\n2,-1\n", target_only_schema());
    EXPECT_THROW(preprocess(f, target_only_schema()), DataError);
}

TEST(Preprocess, MiniCensusInvariants)
{
    const Schema s = load_schema(fstest::data_dir() / "census_kdd.schema.json");
    const Frame raw = load_csv(fstest::data_dir() / "mini_census.csv", s);
    EXPECT_EQ(raw.n_rows(), 500u);
    const auto r = preprocess_with_summary(raw, s);
    EXPECT_LE(r.summary.rows_out, r.summary.rows_in);
    EXPECT_EQ(r.summary.rows_in - r.summary.rows_out,
              r.summary.dropped_missing + r.summary.dropped_nonpositive_target + r.summary.dropped_outliers);
    for (const auto& leak : s.leakage_drops) {
        EXPECT_EQ(r.frame.find(leak), nullptr) << leak;
    }
    for (const auto& c : r.frame.columns) {
        EXPECT_EQ(c.values.size(), r.frame.n_rows());
        if (c.kind == ColumnKind::categorical_binary) {
            for (double v : c.values) {
                EXPECT_TRUE(v == 0.0 || v == 1.0) << c.name;
            }
        }
    }
    for (double y : r.frame.target) {
        EXPECT_TRUE(y > 0.0 && std::isfinite(y));
    }
    EXPECT_NO_THROW(r.frame.check_invariants());
}

TEST(Folds, HundredIntoTen)
{
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        const FoldPlan plan = make_folds(100, 10, seed);
        std::vector<int> seen(100, 0);
        for (std::size_t f = 0; f < 10; ++f) {
            const auto test = plan.test_indices(f);
            EXPECT_EQ(test.size(), 10u);
            for (auto i : test) {
                ++seen[i];
            }
            EXPECT_EQ(plan.train_indices(f).size(), 90u);
        }
        EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
    }
}

TEST(Folds, CensusSizedSplit)
{
    const std::size_t n = 10187;
    const std::size_t k = 15;
    const std::size_t base = n / k;
    const std::size_t extra = n % k;
    ASSERT_EQ(base, 679u);
    ASSERT_EQ(extra, 2u);
    ASSERT_EQ(k * base + extra, n);
    const auto sizes = make_folds(n, k, 3).fold_sizes();
    EXPECT_EQ(std::count(sizes.begin(), sizes.end(), base + 1), static_cast<std::ptrdiff_t>(extra));
    EXPECT_EQ(std::count(sizes.begin(), sizes.end(), base), static_cast<std::ptrdiff_t>(k - extra));
    EXPECT_EQ(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}), n);
}

TEST(Folds, TooFewSamples)
{
    EXPECT_THROW(make_folds(10, 15, 0), ConfigError);
    EXPECT_THROW(make_folds(10, 1, 0), ConfigError);
    EXPECT_NO_THROW(make_folds(15, 15, 0));
}

TEST(Folds, DeterministicUnderSeed)
{
    EXPECT_EQ(make_folds(1000, 7, 42), make_folds(1000, 7, 42));
    EXPECT_NE(make_folds(1000, 7, 42), make_folds(1000, 7, 43));
}

TEST(Fetch, Sha256KnownVector)
{
    fstest::TempDir dir("sha");
    fstest::write_file(dir / "abc", "abc");
    EXPECT_EQ(sha256_file(dir / "abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Fetch, DownloadsAndVerifies)
{
    fstest::TempDir dir("fetch");
    fstest::write_file(dir / "src.csv", "x,wage\n1,2\n");
    const auto digest = sha256_file(dir / "src.csv");
    const auto url = "file://" + (dir / "src.csv").string();
    const auto dest = dir / "sub" / "dest.csv";
    EXPECT_EQ(fetch_dataset(url, digest, dest), dest);
    EXPECT_EQ(fstest::read_file(dest), "x,wage\n1,2\n");
}

TEST(Fetch, CachedFileSkipsNetwork)
{
    fstest::TempDir dir("fetch");
    fstest::write_file(dir / "dest.csv", "cached");
    const auto digest = sha256_file(dir / "dest.csv");
    // The URL is unreachable; success proves no download was attempted.
    EXPECT_EQ(fetch_dataset("file:///nonexistent/fairscope/none", digest, dir / "dest.csv"), dir / "dest.csv");
}

TEST(Fetch, DigestMismatchRemovesFile)
{
    fstest::TempDir dir("fetch");
    fstest::write_file(dir / "src.csv", "tampered");
    const auto url = "file://" + (dir / "src.csv").string();
    const std::string wrong(64, '0');
    try {
        fetch_dataset(url, wrong, dir / "dest.csv");
        FAIL() << "expected a digest mismatch";
    } catch (const DigestMismatch& e) {
        EXPECT_EQ(e.expected(), wrong);
        EXPECT_EQ(e.actual(), sha256_file(dir / "src.csv"));
    }
    EXPECT_FALSE(std::filesystem::exists(dir / "dest.csv"));
    EXPECT_FALSE(std::filesystem::exists(dir / "dest.csv.part"));
}

TEST(Fetch, UnreachableSourceIsAFetchError)
{
    fstest::TempDir dir("fetch");
    EXPECT_THROW(fetch_dataset("file:///nonexistent/fairscope/none", std::string(64, 'a'), dir / "d"), FetchError);
}
