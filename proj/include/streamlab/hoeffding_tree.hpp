#pragma once

#include "streamlab/drift.hpp"
#include "streamlab/learner.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace streamlab {

/// Weighted Welford estimator of a normal density.
struct GaussianEstimator {
    double weight = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void add(double x, double w = 1.0);
    double variance() const;
    double log_pdf(double x) const;
    /// Estimated weight of observations <= x.
    double weight_at_or_below(double x) const;
};

/// Class-conditional sufficient statistics for one feature.
struct AttributeObserver {
    FeatureKind kind = FeatureKind::numeric;
    std::vector<GaussianEstimator> per_class;   // numeric
    Eigen::MatrixXd counts;                     // categorical: arity x classes
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();

    void observe(double value, int label, double w);
    double log_likelihood(double value, int label) const;
};

/// Per-leaf statistics: class counts plus one observer per feature. Also the
/// whole model state of the naive Bayes learner.
class ClassStatistics {
public:
    ClassStatistics() = default;
    explicit ClassStatistics(const FeatureSchema& schema);

    void observe(const Eigen::VectorXd& x, int label, double w = 1.0);

    const Eigen::VectorXd& class_counts() const { return class_counts_; }
    double total() const { return class_counts_.sum(); }
    const AttributeObserver& attribute(std::size_t i) const { return attributes_[i]; }
    std::size_t num_attributes() const { return attributes_.size(); }

    int majority_class() const;
    /// Log prior plus naive-Bayes log likelihood per class; -inf for unseen classes.
    Eigen::VectorXd naive_bayes_scores(const Eigen::VectorXd& x) const;
    int naive_bayes_class(const Eigen::VectorXd& x) const;

private:
    Eigen::VectorXd class_counts_;
    std::vector<AttributeObserver> attributes_;
};

double entropy_bits(const Eigen::VectorXd& counts);

/// Information gain of splitting `parent` into the given per-branch class distributions.
double information_gain(const Eigen::VectorXd& parent, const std::vector<Eigen::VectorXd>& branches);

struct SplitTest {
    int feature = -1;
    bool categorical = false;
    double threshold = 0.0;  // numeric: x <= threshold goes to branch 0
    int branches = 0;

    int branch_of(const Eigen::VectorXd& x) const;
};

struct SplitCandidate {
    SplitTest test;
    double merit = 0.0;
    std::vector<Eigen::VectorXd> distributions;
};

struct SplitDecision {
    bool should_split = false;
    std::optional<SplitCandidate> best;
    double best_merit = 0.0;
    double second_merit = 0.0;
    double epsilon = 0.0;
};

struct SplitCriteria {
    double delta = 1e-7;
    double tau = 0.05;
    int numeric_bins = 10;
};

/// Best split per feature, ordered by merit descending then feature index.
std::vector<SplitCandidate> split_candidates(const ClassStatistics& stats, const FeatureSchema& schema,
                                             int numeric_bins);

/// Splits iff G(best) - G(second) > eps or eps < tau, where eps is the
/// Hoeffding bound with R = log2(C) over the leaf's observed weight.
SplitDecision ht_attempt_split(const ClassStatistics& stats, const FeatureSchema& schema,
                               const SplitCriteria& criteria);

/// Feeds one node-level correctness bit to its ADWIN (as an error bit) and
/// reports drift only when the windowed error rose.
PredictorStatus hat_monitor(Adwin& detector, bool correct);

enum class LeafPrediction { majority, naive_bayes, adaptive };

struct HoeffdingTreeParams {
    int grace_period = 200;
    SplitCriteria criteria;
    LeafPrediction leaf_prediction = LeafPrediction::adaptive;
    /// Alternate-vs-original comparison starts once both error windows exceed this.
    std::uint64_t swap_min_width = 300;
    double swap_delta = 0.05;
};

/// Hoeffding tree; with `adaptive` set it is the Hoeffding adaptive tree,
/// which keeps one ADWIN per node and grows alternate subtrees on drift.
class HoeffdingTree final : public Learner {
public:
    HoeffdingTree(FeatureSchema schema, HoeffdingTreeParams params = {}, bool adaptive = false);
    ~HoeffdingTree() override;

    std::string name() const override { return adaptive_ ? "hoeffding_adaptive_tree" : "hoeffding_tree"; }

    std::size_t node_count() const;
    std::size_t leaf_count() const;
    std::size_t alternate_count() const;
    std::size_t depth() const;
    std::uint64_t alternates_created() const { return alternates_created_; }
    std::uint64_t subtrees_replaced() const { return subtrees_replaced_; }

    /// Class counts at the root while it is still a leaf.
    Eigen::VectorXd root_class_counts() const;

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    struct Node;

    void learn_leaf(Node& leaf, const Instance& inst);
    void learn_adaptive(std::unique_ptr<Node>& slot, const Instance& inst);
    const Node& sort_to_leaf(const Node& node, const Eigen::VectorXd& x) const;
    int predict_from(const Node& node, const Eigen::VectorXd& x) const;
    int leaf_predict(const Node& leaf, const Eigen::VectorXd& x) const;
    std::unique_ptr<Node> make_leaf(std::optional<int> inherited) const;

    HoeffdingTreeParams params_;
    bool adaptive_;
    std::unique_ptr<Node> root_;
    std::uint64_t alternates_created_ = 0;
    std::uint64_t subtrees_replaced_ = 0;
};

}  // namespace streamlab
