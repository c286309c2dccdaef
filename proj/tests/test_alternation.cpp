#include <gtest/gtest.h>

#include "support.hpp"

using namespace fairscope;

namespace {

Frame small_frame()
{
    Frame f;
    f.target_name = "wage";
    f.columns.push_back({"sex", ColumnKind::categorical_binary, {0, 1, 1, 0}, {}});
    f.columns.push_back({"age", ColumnKind::numeric, {20, 30, 40, 50}, {}});
    f.target = {700, 800, 900, 1000};
    f.group_labels["sex"] = {0, 1, 1, 0};
    return f;
}

}  // namespace

TEST(Alternate, FlipsOnlyTheAttribute)
{
    const Frame f = small_frame();
    const Frame a = alternate(f, {"sex", {{0, "Male"}, {1, "Female"}}});
    EXPECT_EQ(a.column("sex").values, (std::vector<double>{1, 0, 0, 1}));
    EXPECT_EQ(a.column("age").values, f.column("age").values);
    EXPECT_EQ(a.target, f.target);
    EXPECT_EQ(a.group_labels, f.group_labels);
    EXPECT_EQ(f.column("sex").values, (std::vector<double>{0, 1, 1, 0}));
}

TEST(Alternate, IsAnInvolution)
{
    const Frame f = generate(fstest::gap_spec(100.0, 200, 4));
    const AlternationSpec spec{"gender", {{0, "a"}, {1, "b"}}};
    const Frame twice = alternate(alternate(f, spec), spec);
    EXPECT_TRUE(twice == f);
    EXPECT_EQ(twice.n_rows(), f.n_rows());
}

TEST(Alternate, Errors)
{
    const Frame f = small_frame();
    EXPECT_THROW(alternate(f, {"missing", {{0, "a"}, {1, "b"}}}), ConfigError);
    EXPECT_THROW(alternate(f, {"age", {{0, "a"}, {1, "b"}}}), ConfigError);
    Frame bad = f;
    bad.columns[0].values[2] = 2.0;
    EXPECT_THROW(alternate(bad, {"sex", {{0, "a"}, {1, "b"}}}), DataError);
    Frame raw = f;
    raw.columns[0].values.clear();
    raw.columns[0].labels = {"M", "F", "F", "M"};
    EXPECT_THROW(alternate(raw, {"sex", {{0, "a"}, {1, "b"}}}), DataError);
}

TEST(Alternate, ZeroWeightAttributeLeavesPredictionsUnchanged)
{
    const Frame f = generate(fstest::gap_spec(0.0, 300, 5));
    Model m = fit(preset("linear"), f);
    const auto names = f.feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j] == "migrant") {
            m.weights[j] = 0.0;
        }
    }
    const AlternationSpec spec{"migrant", {{0, "a"}, {1, "b"}}};
    const Eigen::VectorXd before = predict(m, f);
    const Eigen::VectorXd after = predict(m, alternate(f, spec));
    EXPECT_LT((before - after).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(ClassifyPba, ThresholdRule)
{
    EXPECT_TRUE(classify_pba(0.13582, 0.05));
    EXPECT_FALSE(classify_pba(0.00657, 0.05));
    EXPECT_FALSE(classify_pba(0.0, 0.05));
    EXPECT_FALSE(classify_pba(0.0, 1e-300));
    EXPECT_TRUE(classify_pba(0.05, 0.05));
    EXPECT_THROW(classify_pba(-1e-12, 0.05), ConfigError);
}

TEST(AlternationSpecJson, RoundTrip)
{
    const auto spec = alternation_from_json(
        nlohmann::json::parse(R"({"attribute":"sex","groups":{"0":"Male","1":"Female"}})"));
    EXPECT_EQ(spec.attribute, "sex");
    EXPECT_EQ(spec.group_name(0), "Male");
    EXPECT_EQ(spec.group_name(1), "Female");
    EXPECT_EQ(alternation_from_json(nlohmann::json::parse(to_json(spec).dump())), spec);
    EXPECT_THROW(alternation_from_json(nlohmann::json::parse(R"({"groups":{}})")), ConfigError);
}
