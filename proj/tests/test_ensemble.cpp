#include <gtest/gtest.h>

#include "support.hpp"

using namespace fairscope;

namespace {

Model constant_model(double value)
{
    Model m;
    m.kind = LearnerKind::ols;
    m.feature_names = {"x"};
    m.weights = {0.0};
    m.intercept = value;
    return m;
}

std::vector<Model> members(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
{
    std::vector<Model> out;
    for (const auto* name : {"xgb", "lgbm", "gb", "rf", "linear", "lasso"}) {
        LearnerConfig c = preset(name);
        c.n_estimators = 15;
        out.push_back(fit(c, x, y));
    }
    return out;
}

}  // namespace

TEST(Stack, TwoMembersEqualWeights)
{
    const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 1);
    const auto p = stack_predict({constant_model(10), constant_model(20)}, {1, 1}, x);
    EXPECT_DOUBLE_EQ(p[0], 15.0);
}

TEST(Stack, IdenticalMembersAreAFixedPoint)
{
    const Eigen::MatrixXd x = fstest::random_matrix(30, 3, 1);
    const Eigen::VectorXd y = x.col(0) * 2.0;
    const Model m = fit(preset("linear"), x, y);
    const auto p = stack_predict({m, m, m}, {4, 1, 2}, x);
    EXPECT_LT((p - predict(m, x)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Stack, FourToOneWeightingNormalizes)
{
    const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 1);
    std::vector<Model> ms;
    for (double v : {1.0, 2.0, 3.0, 4.0, 100.0, 200.0}) {
        ms.push_back(constant_model(v));
    }
    const std::vector<double> w{4, 4, 4, 4, 1, 1};
    const double expected = (4.0 * (1 + 2 + 3 + 4) + 100.0 + 200.0) / 18.0;
    EXPECT_NEAR(stack_predict(ms, w, x)[0], expected, 1e-12);
}

TEST(Stack, Errors)
{
    const Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 1);
    EXPECT_THROW(stack_predict({}, {}, x), ConfigError);
    EXPECT_THROW(stack_predict({constant_model(1)}, {1, 2}, x), ConfigError);
    EXPECT_THROW(stack_predict({constant_model(1)}, {0}, x), ConfigError);
    EXPECT_THROW(stack_predict({constant_model(1)}, {-1}, x), ConfigError);
}

TEST(Stack, RescalingPermutationAndBounds)
{
    const Eigen::MatrixXd x = fstest::random_matrix(80, 3, 2);
    const Eigen::VectorXd y = (x.col(0).array() * 5.0 + x.col(1).array().square()).matrix();
    const auto ms = members(x, y);
    const std::vector<double> w{4, 4, 4, 4, 1, 1};
    const Eigen::MatrixXd probe = fstest::random_matrix(40, 3, 3);
    const Eigen::VectorXd base = stack_predict(ms, w, probe);

    std::vector<double> scaled;
    for (double v : w) {
        scaled.push_back(v * 2.5);
    }
    EXPECT_LT((stack_predict(ms, scaled, probe) - base).cwiseAbs().maxCoeff(), 1e-9);

    const std::vector<std::size_t> order{5, 2, 0, 4, 1, 3};
    std::vector<Model> pm;
    std::vector<double> pw;
    for (auto i : order) {
        pm.push_back(ms[i]);
        pw.push_back(w[i]);
    }
    EXPECT_LT((stack_predict(pm, pw, probe) - base).cwiseAbs().maxCoeff(), 1e-9);

    std::vector<Eigen::VectorXd> preds;
    for (const auto& m : ms) {
        preds.push_back(predict(m, probe));
    }
    for (Eigen::Index r = 0; r < probe.rows(); ++r) {
        double lo = preds[0][r];
        double hi = preds[0][r];
        for (const auto& p : preds) {
            lo = std::min(lo, p[r]);
            hi = std::max(hi, p[r]);
        }
        EXPECT_GE(base[r], lo - 1e-9);
        EXPECT_LE(base[r], hi + 1e-9);
    }
}

TEST(Stack, JsonRoundTripAndValidation)
{
    const auto s = stack_from_json(nlohmann::json::parse(
        R"({"name":"stacked","members":["a","b"],"weights":[4,1],"attributes":["sex"]})"));
    EXPECT_EQ(s.members, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(s.weights, (std::vector<double>{4, 1}));
    EXPECT_EQ(stack_from_json(nlohmann::json::parse(to_json(s).dump())), s);
    EXPECT_THROW(stack_from_json(nlohmann::json::parse(R"({"members":["a"],"weights":[1,2]})")), ConfigError);
    EXPECT_THROW(stack_from_json(nlohmann::json::parse(R"({"members":[],"weights":[]})")), ConfigError);
}
