#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fairscope/random.hpp"

namespace fairscope {

/// Flat binary regression tree. Node 0 is the root; split_feature < 0 marks a
/// leaf. A row goes left when x[split_feature] < threshold.
struct Tree {
    std::vector<std::int32_t> split_feature;
    std::vector<double> threshold;
    std::vector<std::int32_t> left;
    std::vector<std::int32_t> right;
    std::vector<double> value;

    std::size_t n_nodes() const { return value.size(); }

    bool is_leaf(std::size_t node) const { return split_feature[node] < 0; }

    double predict(const Eigen::MatrixXd& x, Eigen::Index row) const
    {
        std::size_t node = 0;
        while (split_feature[node] >= 0) {
            node = static_cast<std::size_t>(x(row, split_feature[node]) < threshold[node] ? left[node] : right[node]);
        }
        return value[node];
    }

    std::size_t depth(std::size_t node = 0) const
    {
        if (is_leaf(node)) {
            return 0;
        }
        return 1 + std::max(depth(static_cast<std::size_t>(left[node])), depth(static_cast<std::size_t>(right[node])));
    }

    std::size_t add_leaf(double v)
    {
        split_feature.push_back(-1);
        threshold.push_back(0.0);
        left.push_back(-1);
        right.push_back(-1);
        value.push_back(v);
        return value.size() - 1;
    }

    bool operator==(const Tree&) const = default;
};

/// Row indices of each feature column sorted by value (ties by row index).
/// Computed once per fit and shared by every tree of an ensemble.
class PresortedColumns {
public:
    explicit PresortedColumns(const Eigen::MatrixXd& x)
        : n_rows_(static_cast<std::size_t>(x.rows())), order_(static_cast<std::size_t>(x.cols()))
    {
        for (Eigen::Index f = 0; f < x.cols(); ++f) {
            auto& ord = order_[static_cast<std::size_t>(f)];
            ord.resize(n_rows_);
            std::iota(ord.begin(), ord.end(), std::uint32_t{0});
            const double* col = x.col(f).data();
            std::stable_sort(ord.begin(), ord.end(), [col](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
        }
    }

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_features() const { return order_.size(); }
    const std::vector<std::uint32_t>& order(std::size_t feature) const { return order_[feature]; }

private:
    std::size_t n_rows_;
    std::vector<std::vector<std::uint32_t>> order_;
};

struct TreeParams {
    std::uint32_t max_depth = 6;
    /// Minimum total row weight in each child of a split.
    double min_child_weight = 1.0;
    double lambda_l2 = 0.0;
    double alpha = 0.0;
    /// Multiplies every leaf value (the boosting learning rate).
    double leaf_scale = 1.0;
    /// Fraction of candidate features drawn at each node; 1 disables it.
    double node_colsample = 1.0;
};

namespace tree_detail {

inline double soft_threshold(double s, double alpha)
{
    if (s > alpha) return s - alpha;
    if (s < -alpha) return s + alpha;
    return 0.0;
}

/// Greedy depth-first CART on weighted squared loss. With lambda = alpha = 0
/// the split score is plain variance reduction and leaves hold weighted means.
class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const PresortedColumns& sorted, std::span<const double> y,
                std::span<const double> weight, std::span<const std::size_t> features, const TreeParams& params,
                Rng* rng)
        : x_(x), y_(y), weight_(weight), features_(features.begin(), features.end()), params_(params), rng_(rng)
    {
        const auto m = sorted.n_features();
        order_.resize(m);
        for (std::size_t f = 0; f < m; ++f) {
            auto& ord = order_[f];
            ord.reserve(sorted.n_rows());
            for (auto r : sorted.order(f)) {
                if (weight_[r] > 0.0) {
                    ord.push_back(r);
                }
            }
        }
        go_left_.assign(sorted.n_rows(), 0);
        scratch_.resize(order_.empty() ? 0 : order_[0].size());
    }

    Tree build()
    {
        Tree tree;
        const std::size_t n_active = order_.empty() ? 0 : order_[0].size();
        if (order_.empty()) {
            // No features: a single leaf over whatever rows are weighted.
            double s = 0.0;
            double w = 0.0;
            for (std::size_t r = 0; r < y_.size(); ++r) {
                s += weight_[r] * y_[r];
                w += weight_[r];
            }
            tree.add_leaf(leaf_value(s, w));
            return tree;
        }
        grow(tree, 0, n_active, 0);
        return tree;
    }

private:
    struct Split {
        bool found = false;
        std::size_t feature = 0;
        double threshold = 0.0;
        double gain = 0.0;
    };

    double score(double s, double w) const
    {
        const double t = soft_threshold(s, params_.alpha);
        const double denom = w + params_.lambda_l2;
        return denom > 0.0 ? t * t / denom : 0.0;
    }

    double leaf_value(double s, double w) const
    {
        const double denom = w + params_.lambda_l2;
        return denom > 0.0 ? params_.leaf_scale * soft_threshold(s, params_.alpha) / denom : 0.0;
    }

    std::vector<std::size_t> node_features()
    {
        if (params_.node_colsample >= 1.0 || rng_ == nullptr || features_.size() <= 1) {
            return features_;
        }
        const auto want = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(params_.node_colsample * static_cast<double>(features_.size()))));
        auto picked = sample_without_replacement(features_.size(), want, *rng_);
        std::sort(picked.begin(), picked.end());
        std::vector<std::size_t> out;
        out.reserve(picked.size());
        for (auto p : picked) {
            out.push_back(features_[p]);
        }
        return out;
    }

    Split best_split(std::size_t begin, std::size_t end, double s_total, double w_total, double sq_total)
    {
        Split best;
        const double parent = score(s_total, w_total);
        // Gains below this are rounding noise (e.g. a constant target).
        const double min_gain = 1e-10 * std::max(sq_total, 1e-300);
        for (auto f : node_features()) {
            const auto& ord = order_[f];
            const double* col = x_.col(static_cast<Eigen::Index>(f)).data();
            double s_left = 0.0;
            double w_left = 0.0;
            for (std::size_t i = begin; i + 1 < end; ++i) {
                const auto r = ord[i];
                s_left += weight_[r] * y_[r];
                w_left += weight_[r];
                const double here = col[r];
                const double next = col[ord[i + 1]];
                if (!(next > here)) {
                    continue;
                }
                const double w_right = w_total - w_left;
                if (w_left < params_.min_child_weight || w_right < params_.min_child_weight || w_right <= 0.0) {
                    continue;
                }
                const double gain = score(s_left, w_left) + score(s_total - s_left, w_right) - parent;
                if (gain > min_gain && (!best.found || gain > best.gain)) {
                    double thr = here + (next - here) / 2.0;
                    if (!(thr > here)) {
                        thr = next;
                    }
                    best = Split{true, f, thr, gain};
                }
            }
        }
        return best;
    }

    std::size_t grow(Tree& tree, std::size_t begin, std::size_t end, std::uint32_t depth)
    {
        double s = 0.0;
        double w = 0.0;
        double sq = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto r = order_[0][i];
            s += weight_[r] * y_[r];
            w += weight_[r];
            sq += weight_[r] * y_[r] * y_[r];
        }
        const std::size_t node = tree.add_leaf(leaf_value(s, w));
        if (depth >= params_.max_depth || end - begin < 2) {
            return node;
        }
        const Split split = best_split(begin, end, s, w, sq);
        if (!split.found) {
            return node;
        }
        const double* col = x_.col(static_cast<Eigen::Index>(split.feature)).data();
        std::size_t n_left = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const auto r = order_[0][i];
            go_left_[r] = col[r] < split.threshold ? 1 : 0;
            n_left += go_left_[r];
        }
        for (auto& ord : order_) {
            std::size_t l = begin;
            std::size_t k = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const auto r = ord[i];
                if (go_left_[r]) {
                    ord[l++] = r;
                } else {
                    scratch_[k++] = r;
                }
            }
            std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(k), ord.begin() + static_cast<std::ptrdiff_t>(l));
        }
        tree.split_feature[node] = static_cast<std::int32_t>(split.feature);
        tree.threshold[node] = split.threshold;
        const auto l = grow(tree, begin, begin + n_left, depth + 1);
        const auto r = grow(tree, begin + n_left, end, depth + 1);
        tree.left[node] = static_cast<std::int32_t>(l);
        tree.right[node] = static_cast<std::int32_t>(r);
        return node;
    }

    const Eigen::MatrixXd& x_;
    std::span<const double> y_;
    std::span<const double> weight_;
    std::vector<std::size_t> features_;
    TreeParams params_;
    Rng* rng_;
    std::vector<std::vector<std::uint32_t>> order_;
    std::vector<std::uint8_t> go_left_;
    std::vector<std::uint32_t> scratch_;
};

}  // namespace tree_detail

/// Fits one tree on rows with positive `weight`; only `features` are
/// considered for splits. `rng` is needed only when node_colsample < 1.
inline Tree build_tree(const Eigen::MatrixXd& x, const PresortedColumns& sorted, std::span<const double> y,
                       std::span<const double> weight, std::span<const std::size_t> features,
                       const TreeParams& params, Rng* rng = nullptr)
{
    return tree_detail::TreeBuilder(x, sorted, y, weight, features, params, rng).build();
}

}  // namespace fairscope
