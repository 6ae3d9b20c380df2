#include "streamlab/cash.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace streamlab {

std::string Configuration::label() const {
    const std::string p = params.to_string();
    return p.empty() ? algorithm : algorithm + "{" + p + "}";
}

std::vector<Configuration> grid_expand(const ConfigSpace& space) {
    if (space.empty())
        throw StreamError(ErrorKind::config, "configuration space is empty");
    std::vector<Configuration> out;
    for (const auto& entry : space) {
        learner_info(entry.algorithm);
        for (const auto& [name, values] : entry.grid)
            if (values.empty())
                throw StreamError(ErrorKind::config,
                                  "grid for " + entry.algorithm + "." + name + " has no values");
        std::size_t total = 1;
        for (const auto& g : entry.grid)
            total *= g.second.size();
        for (std::size_t idx = 0; idx < total; ++idx) {
            Configuration c{entry.algorithm, {}};
            std::size_t rest = idx;
            for (std::size_t i = entry.grid.size(); i-- > 0;) {
                const auto& values = entry.grid[i].second;
                c.params.set(entry.grid[i].first, values[rest % values.size()]);
                rest /= values.size();
            }
            out.push_back(std::move(c));
        }
    }
    return out;
}

ConfigSpace default_config_space() {
    return {
        {"cart_batch", {{"max_depth", {"5", "10", "20"}}, {"min_samples_leaf", {"1", "5"}}}},
        {"random_forest_batch", {{"trees", {"10", "30"}}, {"max_depth", {"10", "20"}}}},
        {"knn_batch", {{"k", {"1", "5", "15"}}}},
        {"linear_svm_batch", {{"learning_rate", {"0.01", "0.1"}}, {"l2", {"0.0001", "0.001"}}}},
        {"naive_bayes", {}},
    };
}

std::vector<std::pair<std::size_t, std::size_t>> fold_bounds(std::size_t n, std::size_t k) {
    if (k < 2 || n < k)
        throw StreamError(ErrorKind::invalid_argument, "need k >= 2 folds and at least k samples");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < k; ++i)
        out.emplace_back(i * n / k, (i + 1) * n / k);
    return out;
}

std::uint64_t cash_learner_seed(std::uint64_t seed, const Configuration& config) {
    return derive_seed(derive_seed(seed, "cash"), config.label());
}

double holdout_loss(const Configuration& config, std::span<const Instance> train, std::span<const Instance> valid,
                    const FeatureSchema& schema, std::uint64_t seed, std::size_t epochs) {
    LearnerPtr model = train_batch(make_learner(config.algorithm, config.params, schema, seed), train, epochs);
    // misses / n rather than 1 - hits / n: exact for the count ratio
    std::size_t misses = 0;
    for (const auto& inst : valid)
        misses += model->predict(inst.x) != *inst.y ? 1 : 0;
    return static_cast<double>(misses) / static_cast<double>(valid.size());
}

CashResult cash_search(std::span<const Instance> buffer, const FeatureSchema& schema, const ConfigSpace& space,
                       const CashOptions& options) {
    if (options.folds < 2)
        throw StreamError(ErrorKind::invalid_argument, "cash search needs at least 2 folds");
    if (buffer.size() < 10 * options.folds)
        throw StreamError(ErrorKind::invalid_argument,
                          "cash search needs at least 10 samples per fold, got " + std::to_string(buffer.size()));
    const std::vector<Configuration> grid = grid_expand(space);
    for (const auto& c : grid)
        make_learner(c.algorithm, c.params, schema, 0);

    std::vector<Instance> data(buffer.begin(), buffer.end());
    if (options.shuffle) {
        std::mt19937_64 rng(derive_seed(options.seed, "folds"));
        std::shuffle(data.begin(), data.end(), rng);
    }
    const auto bounds = fold_bounds(data.size(), options.folds);

    std::size_t evaluations = grid.size();
    CashResult result;
    if (options.budget && *options.budget < grid.size()) {
        if (*options.budget == 0)
            throw StreamError(ErrorKind::budget_exhausted, "budget allows no evaluation");
        evaluations = *options.budget;
        result.truncated = true;
    }

    std::vector<LeaderboardEntry> board(evaluations);
    auto evaluate = [&](std::size_t ci) {
        const Configuration& config = grid[ci];
        const std::uint64_t seed = cash_learner_seed(options.seed, config);
        LeaderboardEntry entry{config, 0.0, {}};
        for (const auto& [lo, hi] : bounds) {
            std::vector<Instance> train;
            train.reserve(data.size() - (hi - lo));
            train.insert(train.end(), data.begin(), data.begin() + static_cast<std::ptrdiff_t>(lo));
            train.insert(train.end(), data.begin() + static_cast<std::ptrdiff_t>(hi), data.end());
            const std::span<const Instance> valid(data.data() + lo, hi - lo);
            entry.fold_losses.push_back(holdout_loss(config, train, valid, schema, seed, options.epochs));
        }
        entry.loss = std::accumulate(entry.fold_losses.begin(), entry.fold_losses.end(), 0.0) /
                     static_cast<double>(entry.fold_losses.size());
        board[ci] = std::move(entry);
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, evaluations));
    if (workers == 1) {
        for (std::size_t ci = 0; ci < evaluations; ++ci)
            evaluate(ci);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t ci = next++; ci < evaluations; ci = next++) {
                    try {
                        evaluate(ci);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool)
            t.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < board.size(); ++i)
        if (board[i].loss < board[best].loss)
            best = i;
    result.best = board[best].config;
    result.best_loss = board[best].loss;
    result.leaderboard = std::move(board);
    result.model = train_batch(make_learner(result.best.algorithm, result.best.params, schema,
                                            cash_learner_seed(options.seed, result.best)),
                               data, options.epochs);
    return result;
}

std::string leaderboard_json(const CashResult& result) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& e : result.leaderboard) {
        nlohmann::ordered_json row;
        row["config"] = e.config.label();
        row["algorithm"] = e.config.algorithm;
        row["params"] = e.config.params.values();
        row["loss"] = e.loss;
        row["fold_losses"] = e.fold_losses;
        out.push_back(std::move(row));
    }
    return out.dump(2);
}

}  // namespace streamlab
