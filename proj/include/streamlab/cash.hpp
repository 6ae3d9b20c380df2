#pragma once

#include "streamlab/learner.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace streamlab {

/// One algorithm with a finite grid per hyperparameter, in declaration order.
struct SpaceEntry {
    std::string algorithm;
    std::vector<std::pair<std::string, std::vector<std::string>>> grid;
};

using ConfigSpace = std::vector<SpaceEntry>;

struct Configuration {
    std::string algorithm;
    Params params;

    /// "algorithm" or "algorithm{k=v;k=v}".
    std::string label() const;
    bool operator==(const Configuration&) const = default;
};

/// Cartesian product per entry, entries concatenated in order; the last
/// parameter of an entry varies fastest.
std::vector<Configuration> grid_expand(const ConfigSpace& space);

/// Default space: the batch algorithms plus naive Bayes, 2 to 4 values per knob.
ConfigSpace default_config_space();

/// Contiguous fold i covers [floor(i*n/k), floor((i+1)*n/k)).
std::vector<std::pair<std::size_t, std::size_t>> fold_bounds(std::size_t n, std::size_t k);

struct CashOptions {
    std::size_t folds = 5;
    /// Maximum number of configurations evaluated.
    std::optional<std::size_t> budget;
    /// Shuffle the buffer (seeded) before cutting folds.
    bool shuffle = false;
    std::uint64_t seed = 0;
    /// Passes for incremental algorithms.
    std::size_t epochs = 1;
    std::size_t workers = 1;
};

struct LeaderboardEntry {
    Configuration config;
    double loss = 0.0;
    std::vector<double> fold_losses;
};

struct CashResult {
    Configuration best;
    double best_loss = 0.0;
    std::vector<LeaderboardEntry> leaderboard;
    bool truncated = false;
    LearnerPtr model;
};

/// Seed used for every learner built for `config` during a search.
std::uint64_t cash_learner_seed(std::uint64_t seed, const Configuration& config);

/// 1 - accuracy of `config` trained on train and scored on valid.
double holdout_loss(const Configuration& config, std::span<const Instance> train, std::span<const Instance> valid,
                    const FeatureSchema& schema, std::uint64_t seed, std::size_t epochs = 1);

/// Grid search with k-fold cross-validated 0-1 loss. Ties go to the earliest
/// configuration; the winner is retrained on the full buffer and frozen.
CashResult cash_search(std::span<const Instance> buffer, const FeatureSchema& schema, const ConfigSpace& space,
                       const CashOptions& options = {});

/// JSON array of {config, algorithm, params, loss, fold_losses}.
std::string leaderboard_json(const CashResult& result);

}  // namespace streamlab
