#pragma once

#include "streamlab/drift.hpp"
#include "streamlab/hoeffding_tree.hpp"
#include "streamlab/learner.hpp"

#include <deque>
#include <random>

namespace streamlab {

class MajorityClass final : public Learner {
public:
    explicit MajorityClass(FeatureSchema schema);
    std::string name() const override { return "majority_class"; }
    const Eigen::VectorXd& counts() const { return counts_; }

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    Eigen::VectorXd counts_;
};

/// Gaussian likelihoods for numerics, Laplace-smoothed counts for categoricals.
class NaiveBayes final : public Learner {
public:
    explicit NaiveBayes(FeatureSchema schema);
    std::string name() const override { return "naive_bayes"; }
    const ClassStatistics& statistics() const { return stats_; }

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    ClassStatistics stats_;
};

/// Mixed distance: squared z-scored difference on numerics, 0/1 mismatch on categoricals.
double mixed_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const FeatureSchema& schema,
                      const Eigen::VectorXd& numeric_scale);

/// Majority among the k nearest stored samples; ties go to the lowest class.
int knn_vote(std::span<const std::pair<double, int>> neighbours, std::size_t k, std::size_t num_classes);

/// k-NN over a sliding window of the most recent samples. Numerics are
/// z-scored with running statistics over everything seen.
class KnnWindow final : public Learner {
public:
    KnnWindow(FeatureSchema schema, std::size_t window = 1000, std::size_t k = 5);
    std::string name() const override { return "knn_window"; }
    std::size_t stored() const { return window_.size(); }
    const std::deque<Instance>& window() const { return window_; }

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    std::size_t capacity_;
    std::size_t k_;
    std::deque<Instance> window_;
    RunningScaler scaler_;
};

/// Frozen k-NN over a training buffer.
class KnnBatch final : public Learner {
public:
    KnnBatch(FeatureSchema schema, std::size_t k = 5);
    std::string name() const override { return "knn_batch"; }
    bool is_batch() const override { return true; }

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd& x) const override;
    void fit_batch(std::span<const Instance> buffer, std::size_t epochs) override;

private:
    std::size_t k_;
    std::vector<Instance> stored_;
    Eigen::VectorXd scale_;
};

enum class LinearLoss { hinge, log, perceptron };

LinearLoss parse_linear_loss(const std::string& name);

struct LinearParams {
    LinearLoss loss = LinearLoss::hinge;
    double learning_rate = 0.01;
    double l2 = 0.0;
    bool standardize = true;
};

/// One-vs-rest linear model over the one-hot expansion. Binary problems use a
/// single weight row (class 1 iff margin > 0).
class LinearClassifier : public Learner {
public:
    LinearClassifier(FeatureSchema schema, LinearParams params = {});
    std::string name() const override;

    const Eigen::MatrixXd& weights() const { return weights_; }
    const Eigen::VectorXd& bias() const { return bias_; }
    void set_weights(Eigen::MatrixXd weights, Eigen::VectorXd bias);

    Eigen::VectorXd margins(const Eigen::VectorXd& x) const;

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

    Eigen::VectorXd encode(const Eigen::VectorXd& x) const;
    void sgd_step(const Eigen::VectorXd& z, int y);

    LinearParams params_;
    Eigen::MatrixXd weights_;
    Eigen::VectorXd bias_;
    RunningScaler scaler_;
    std::vector<Eigen::Index> numeric_columns_;
    bool scaler_frozen_ = false;
};

/// Hinge-loss linear SVM trained by shuffled SGD passes over a buffer, then
/// frozen. Runs max(passes, epochs) passes.
class LinearSvmBatch final : public LinearClassifier {
public:
    LinearSvmBatch(FeatureSchema schema, LinearParams params, std::uint64_t seed, std::size_t passes = 10);
    std::string name() const override { return "linear_svm_batch"; }
    bool is_batch() const override { return true; }

protected:
    void fit_batch(std::span<const Instance> buffer, std::size_t epochs) override;

private:
    std::mt19937_64 rng_;
    std::size_t passes_;
};

struct CartParams {
    int max_depth = 20;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    /// Features examined per split; 0 means all.
    int max_features = 0;
};

/// Gini-impurity binary decision tree; categorical indices split ordinally.
class CartTree final : public Learner {
public:
    CartTree(FeatureSchema schema, CartParams params, std::uint64_t seed);
    std::string name() const override { return "cart_batch"; }
    bool is_batch() const override { return true; }

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t depth() const;

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd& x) const override;
    void fit_batch(std::span<const Instance> buffer, std::size_t epochs) override;

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
        int depth = 0;
    };

    int build(std::span<const Instance> data, std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
              int depth);

    CartParams params_;
    std::mt19937_64 rng_;
    std::vector<Node> nodes_;
};

double gini_impurity(const Eigen::VectorXd& counts);

struct ForestParams {
    int trees = 10;
    bool bootstrap = true;
    /// Features examined per split; 0 means floor(sqrt(d)).
    int max_features = 0;
    int max_depth = 20;
};

class RandomForest final : public Learner {
public:
    RandomForest(FeatureSchema schema, ForestParams params, std::uint64_t seed);
    ~RandomForest() override;
    std::string name() const override { return "random_forest_batch"; }
    bool is_batch() const override { return true; }

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd& x) const override;
    void fit_batch(std::span<const Instance> buffer, std::size_t epochs) override;

private:
    ForestParams params_;
    std::uint64_t seed_;
    std::vector<std::unique_ptr<CartTree>> trees_;
};

struct BaggingParams {
    std::size_t members = 10;
    double lambda = 1.0;
    /// Per-member ADWIN on correctness; on drift the worst member is reset.
    bool adwin = false;
    double delta = 0.002;
};

/// Online bagging: each member trains on each instance k ~ Poisson(lambda) times.
class OnlineBagging final : public Learner {
public:
    OnlineBagging(FeatureSchema schema, LearnerFactory member_factory, BaggingParams params, std::uint64_t seed,
                  std::string name = "oza_bagging");
    std::string name() const override { return name_; }

    std::size_t size() const { return members_.size(); }
    const Learner& member(std::size_t i) const { return *members_[i]; }
    std::uint64_t resets() const { return resets_; }

protected:
    void learn_one(const Instance& inst) override;
    int predict_trained(const Eigen::VectorXd& x) const override;

private:
    LearnerFactory factory_;
    BaggingParams params_;
    std::mt19937_64 rng_;
    std::string name_;
    std::vector<LearnerPtr> members_;
    std::vector<Adwin> detectors_;
    std::uint64_t resets_ = 0;
};

}  // namespace streamlab
