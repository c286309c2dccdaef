#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "fairscope/error.hpp"
#include "fairscope/random.hpp"

namespace fairscope {

/// k-fold assignment: every sample belongs to exactly one test fold.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;

    std::size_t n_samples() const { return assignment.size(); }

    std::vector<std::size_t> test_indices(std::size_t fold) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] == fold) {
                out.push_back(i);
            }
        }
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t fold) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (assignment[i] != fold) {
                out.push_back(i);
            }
        }
        return out;
    }

    std::vector<std::size_t> fold_sizes() const
    {
        std::vector<std::size_t> sizes(k, 0);
        for (auto f : assignment) {
            ++sizes[f];
        }
        return sizes;
    }

    bool operator==(const FoldPlan&) const = default;
};

/// Seeded shuffle, then a contiguous split into k folds whose sizes differ
/// by at most one (the first n % k folds get the extra sample).
inline FoldPlan make_folds(std::size_t n_samples, std::size_t k, std::uint64_t seed)
{
    if (k < 2) {
        throw ConfigError("fold count must be at least 2, got " + std::to_string(k));
    }
    if (n_samples < k) {
        throw ConfigError("cannot split " + std::to_string(n_samples) + " samples into " + std::to_string(k)
                          + " folds");
    }
    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(std::span<std::size_t>(order), rng);

    FoldPlan plan;
    plan.k = k;
    plan.assignment.assign(n_samples, 0);
    const std::size_t base = n_samples / k;
    const std::size_t extra = n_samples % k;
    std::size_t pos = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        for (std::size_t i = 0; i < size; ++i) {
            plan.assignment[order[pos++]] = f;
        }
    }
    return plan;
}

}  // namespace fairscope
