#pragma once

#include "streamlab/learner.hpp"
#include "streamlab/learners.hpp"

#include <memory>
#include <span>
#include <vector>

namespace streamlab {

enum class MetaCategory { general, statistical, info_theory };

struct MetaFeatureVector {
    Eigen::VectorXd values;
    std::vector<MetaCategory> categories;
};

/// Fixed measure list, in output order.
const std::vector<std::string>& meta_feature_names();
inline constexpr std::size_t kMetaFeatureCount = 19;

struct MetaWindow {
    std::vector<Instance> samples;
    std::vector<std::uint64_t> per_learner_hits;
};

/// Characterizes a window of labeled samples. Degenerate measures (no
/// numeric features, zero variance, zero mutual information) are imputed as 0.
MetaFeatureVector extract_meta_features(std::span<const Instance> window, const FeatureSchema& schema);
MetaFeatureVector extract_meta_features(const MetaWindow& window, const FeatureSchema& schema);

/// Shannon entropy in bits of the empirical distribution of `codes`.
double empirical_entropy(std::span<const int> codes);
/// I(a; b) in bits on the empirical joint distribution.
double empirical_mutual_information(std::span<const int> a, std::span<const int> b);

/// Argmax of hits. Ties keep `active` when it is among the tied, else the lowest index.
int window_best_learner(std::span<const std::uint64_t> hits, int active = -1);

/// Fading-factor online performance estimate per member: w <- a*w + (1-a)*correct,
/// starting from uniform weights 1/n.
class PerformanceWeights {
public:
    PerformanceWeights(std::size_t members, double alpha);
    void update(std::span<const bool> correct);
    const Eigen::VectorXd& weights() const { return weights_; }

private:
    double alpha_;
    Eigen::VectorXd weights_;
};

/// history[j] holds member j's correctness bits in time order.
Eigen::VectorXd performance_weights(const std::vector<std::vector<bool>>& history, double alpha);

/// Chooses the member for the next window from the completed window's meta-features.
class WindowSelector {
public:
    virtual ~WindowSelector() = default;
    /// Learns that `best` won the window characterized by `features`.
    virtual void observe(const Eigen::VectorXd& features, int best) = 0;
    /// Member to activate for the window following `window_index` (0-based).
    virtual int choose(const Eigen::VectorXd& features, std::size_t window_index) = 0;
};

/// Incremental one-vs-rest log-loss linear model over standardized meta-features.
class LinearSelector final : public WindowSelector {
public:
    LinearSelector(std::size_t members, std::size_t feature_count = kMetaFeatureCount, double learning_rate = 0.05);
    void observe(const Eigen::VectorXd& features, int best) override;
    int choose(const Eigen::VectorXd& features, std::size_t window_index) override;

private:
    std::unique_ptr<LinearClassifier> model_;
};

enum class MetaMode { meta, last_best, weighted_vote };

std::string_view to_string(MetaMode mode);
MetaMode parse_meta_mode(std::string_view text);

struct MetaParams {
    MetaMode mode = MetaMode::meta;
    std::size_t window = 300;
    /// Fading factor for weighted_vote.
    double alpha = 0.99;
};

struct WindowRecord {
    std::vector<std::uint64_t> hits;
    int best = 0;
    int active_during = 0;
    int chosen_next = 0;
};

/// Heterogeneous roster with one answering member. Every member is scored
/// and then trained on every sample; switches happen only at window ends.
class MetaEnsemble final : public Learner {
public:
    MetaEnsemble(FeatureSchema schema, std::vector<LearnerPtr> roster, MetaParams params,
                 std::unique_ptr<WindowSelector> selector = nullptr);

    std::string name() const override;
    /// Empty for a single-member roster, where no selection takes place.
    std::optional<int> active_member() const override;

    int active_index() const { return active_; }
    std::size_t size() const { return roster_.size(); }
    const Learner& member(std::size_t i) const { return *roster_[i]; }
    const std::vector<WindowRecord>& windows() const { return history_; }
    const Eigen::VectorXd& weights() const { return weights_.weights(); }

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    void close_window();

    std::vector<LearnerPtr> roster_;
    MetaParams params_;
    std::unique_ptr<WindowSelector> selector_;
    PerformanceWeights weights_;
    int active_ = 0;
    std::vector<Instance> window_;
    std::vector<std::uint64_t> hits_;
    std::vector<WindowRecord> history_;
};

}  // namespace streamlab
