#include "streamlab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace streamlab {

// Majority class

MajorityClass::MajorityClass(FeatureSchema schema)
    : Learner(std::move(schema)), counts_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_classes()))) {}

void MajorityClass::learn_one(const Instance& inst) { counts_[*inst.y] += 1.0; }

int MajorityClass::predict_trained(const Eigen::VectorXd&) const { return argmax_lowest(counts_); }

// Naive Bayes

NaiveBayes::NaiveBayes(FeatureSchema schema) : Learner(std::move(schema)), stats_(schema_) {}

void NaiveBayes::learn_one(const Instance& inst) { stats_.observe(inst.x, *inst.y); }

int NaiveBayes::predict_trained(const Eigen::VectorXd& x) const { return stats_.naive_bayes_class(x); }

// k-NN

double mixed_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const FeatureSchema& schema,
                      const Eigen::VectorXd& numeric_scale) {
    double d = 0.0;
    for (std::size_t i = 0; i < schema.dimension(); ++i) {
        const auto j = static_cast<Eigen::Index>(i);
        if (schema.feature(i).categorical()) {
            d += a[j] == b[j] ? 0.0 : 1.0;
        } else {
            const double z = (a[j] - b[j]) / numeric_scale[j];
            d += z * z;
        }
    }
    return d;
}

int knn_vote(std::span<const std::pair<double, int>> neighbours, std::size_t k, std::size_t num_classes) {
    if (neighbours.empty())
        throw StreamError(ErrorKind::untrained_learner, "knn vote without stored samples");
    std::vector<std::pair<double, int>> sorted(neighbours.begin(), neighbours.end());
    const std::size_t take = std::min(k, sorted.size());
    std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(take), sorted.end());
    Eigen::VectorXd votes = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_classes));
    for (std::size_t i = 0; i < take; ++i)
        votes[sorted[i].second] += 1.0;
    return argmax_lowest(votes);
}

KnnWindow::KnnWindow(FeatureSchema schema, std::size_t window, std::size_t k)
    : Learner(std::move(schema)), capacity_(window), k_(k),
      scaler_(static_cast<Eigen::Index>(schema_.dimension())) {
    if (window < 1 || k < 1)
        throw StreamError(ErrorKind::invalid_argument, "knn window and k must be >= 1");
}

void KnnWindow::learn_one(const Instance& inst) {
    scaler_.observe(inst.x);
    window_.push_back(inst);
    if (window_.size() > capacity_)
        window_.pop_front();
}

int KnnWindow::predict_trained(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd scale = scaler_.stddev();
    std::vector<std::pair<double, int>> neighbours;
    neighbours.reserve(window_.size());
    for (const auto& s : window_)
        neighbours.emplace_back(mixed_distance(x, s.x, schema_, scale), *s.y);
    return knn_vote(neighbours, k_, num_classes());
}

KnnBatch::KnnBatch(FeatureSchema schema, std::size_t k) : Learner(std::move(schema)), k_(k) {
    if (k < 1)
        throw StreamError(ErrorKind::invalid_argument, "knn k must be >= 1");
}

void KnnBatch::fit_batch(std::span<const Instance> buffer, std::size_t) {
    RunningScaler scaler(static_cast<Eigen::Index>(schema_.dimension()));
    for (const auto& inst : buffer)
        scaler.observe(inst.x);
    scale_ = scaler.stddev();
    stored_.assign(buffer.begin(), buffer.end());
}

int KnnBatch::predict_trained(const Eigen::VectorXd& x) const {
    std::vector<std::pair<double, int>> neighbours;
    neighbours.reserve(stored_.size());
    for (const auto& s : stored_)
        neighbours.emplace_back(mixed_distance(x, s.x, schema_, scale_), *s.y);
    return knn_vote(neighbours, k_, num_classes());
}

// Linear models

LinearLoss parse_linear_loss(const std::string& name) {
    if (name == "hinge") return LinearLoss::hinge;
    if (name == "log") return LinearLoss::log;
    if (name == "perceptron") return LinearLoss::perceptron;
    throw StreamError(ErrorKind::config, "unknown linear loss '" + name + "'");
}

LinearClassifier::LinearClassifier(FeatureSchema schema, LinearParams params)
    : Learner(std::move(schema)), params_(params) {
    if (!(params_.learning_rate > 0.0))
        throw StreamError(ErrorKind::invalid_argument, "learning rate must be positive");
    const auto width = static_cast<Eigen::Index>(schema_.one_hot_width());
    const Eigen::Index models = num_classes() == 2 ? 1 : static_cast<Eigen::Index>(num_classes());
    weights_ = Eigen::MatrixXd::Zero(models, width);
    bias_ = Eigen::VectorXd::Zero(models);
    Eigen::Index col = 0;
    for (const auto& f : schema_.features()) {
        if (f.categorical()) {
            col += static_cast<Eigen::Index>(f.arity());
        } else {
            numeric_columns_.push_back(col++);
        }
    }
    scaler_ = RunningScaler(static_cast<Eigen::Index>(numeric_columns_.size()));
}

std::string LinearClassifier::name() const {
    return params_.loss == LinearLoss::perceptron ? "perceptron" : "linear_sgd";
}

void LinearClassifier::set_weights(Eigen::MatrixXd weights, Eigen::VectorXd bias) {
    if (weights.rows() != weights_.rows() || weights.cols() != weights_.cols() || bias.size() != bias_.size())
        throw StreamError(ErrorKind::dimension_mismatch, "linear weights have the wrong shape");
    weights_ = std::move(weights);
    bias_ = std::move(bias);
}

Eigen::VectorXd LinearClassifier::encode(const Eigen::VectorXd& x) const {
    Eigen::VectorXd z = one_hot(x, schema_);
    if (params_.standardize && !numeric_columns_.empty()) {
        const Eigen::VectorXd numeric = z(numeric_columns_);
        z(numeric_columns_) = scaler_.transform(numeric);
    }
    return z;
}

Eigen::VectorXd LinearClassifier::margins(const Eigen::VectorXd& x) const { return weights_ * encode(x) + bias_; }

void LinearClassifier::sgd_step(const Eigen::VectorXd& z, int y) {
    const double lr = params_.learning_rate;
    const bool binary = weights_.rows() == 1;
    for (Eigen::Index m = 0; m < weights_.rows(); ++m) {
        const double target = (binary ? y == 1 : y == m) ? 1.0 : -1.0;
        if (params_.l2 > 0.0)
            weights_.row(m) *= 1.0 - lr * params_.l2;
        const double margin = weights_.row(m).dot(z) + bias_[m];
        double step = 0.0;
        switch (params_.loss) {
        case LinearLoss::hinge:
            step = target * margin < 1.0 ? target : 0.0;
            break;
        case LinearLoss::perceptron:
            step = target * margin <= 0.0 ? target : 0.0;
            break;
        case LinearLoss::log:
            step = (target > 0.0 ? 1.0 : 0.0) - 1.0 / (1.0 + std::exp(-margin));
            break;
        }
        if (step != 0.0) {
            weights_.row(m) += lr * step * z.transpose();
            bias_[m] += lr * step;
        }
    }
}

void LinearClassifier::learn_one(const Instance& inst) {
    if (params_.standardize && !scaler_frozen_ && !numeric_columns_.empty()) {
        const Eigen::VectorXd z = one_hot(inst.x, schema_);
        scaler_.observe(z(numeric_columns_));
    }
    sgd_step(encode(inst.x), *inst.y);
}

int LinearClassifier::predict_trained(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd m = margins(x);
    if (m.size() == 1)
        return m[0] > 0.0 ? 1 : 0;
    return argmax_lowest(m);
}

LinearSvmBatch::LinearSvmBatch(FeatureSchema schema, LinearParams params, std::uint64_t seed, std::size_t passes)
    : LinearClassifier(std::move(schema), [&] {
          params.loss = LinearLoss::hinge;
          return params;
      }()),
      rng_(seed), passes_(passes) {}

void LinearSvmBatch::fit_batch(std::span<const Instance> buffer, std::size_t epochs) {
    if (params_.standardize && !numeric_columns_.empty())
        for (const auto& inst : buffer)
            scaler_.observe(one_hot(inst.x, schema_)(numeric_columns_));
    scaler_frozen_ = true;
    std::vector<Eigen::VectorXd> encoded;
    encoded.reserve(buffer.size());
    for (const auto& inst : buffer)
        encoded.push_back(encode(inst.x));
    std::vector<std::size_t> order(buffer.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t e = 0; e < std::max(epochs, passes_); ++e) {
        std::shuffle(order.begin(), order.end(), rng_);
        for (auto i : order)
            sgd_step(encoded[i], *buffer[i].y);
    }
}

// CART

double gini_impurity(const Eigen::VectorXd& counts) {
    const double n = counts.sum();
    if (n <= 0.0)
        return 0.0;
    return 1.0 - (counts / n).squaredNorm();
}

CartTree::CartTree(FeatureSchema schema, CartParams params, std::uint64_t seed)
    : Learner(std::move(schema)), params_(params), rng_(seed) {
    if (params_.max_depth < 0 || params_.min_samples_leaf < 1 || params_.min_samples_split < 2)
        throw StreamError(ErrorKind::invalid_argument, "invalid cart size limits");
}

void CartTree::fit_batch(std::span<const Instance> buffer, std::size_t) {
    nodes_.clear();
    std::vector<std::size_t> idx(buffer.size());
    std::iota(idx.begin(), idx.end(), 0);
    build(buffer, idx, 0, idx.size(), 0);
}

int CartTree::build(std::span<const Instance> data, std::vector<std::size_t>& idx, std::size_t begin,
                    std::size_t end, int depth) {
    const auto classes = static_cast<Eigen::Index>(num_classes());
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(classes);
    for (std::size_t i = begin; i < end; ++i)
        counts[*data[idx[i]].y] += 1.0;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{-1, 0.0, -1, -1, argmax_lowest(counts), depth});

    const auto n = static_cast<double>(end - begin);
    if (depth >= params_.max_depth || end - begin < static_cast<std::size_t>(params_.min_samples_split) ||
        counts.maxCoeff() == n)
        return id;

    std::vector<int> features(schema_.dimension());
    std::iota(features.begin(), features.end(), 0);
    if (params_.max_features > 0 && static_cast<std::size_t>(params_.max_features) < features.size()) {
        std::shuffle(features.begin(), features.end(), rng_);
        features.resize(static_cast<std::size_t>(params_.max_features));
        std::sort(features.begin(), features.end());
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_impurity = std::numeric_limits<double>::infinity();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    std::vector<std::pair<double, int>> column(end - begin);
    for (int f : features) {
        for (std::size_t i = begin; i < end; ++i)
            column[i - begin] = {data[idx[i]].x[f], *data[idx[i]].y};
        std::sort(column.begin(), column.end());
        Eigen::VectorXd left = Eigen::VectorXd::Zero(classes);
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            left[column[i].second] += 1.0;
            const std::size_t n_left = i + 1;
            if (column[i].first == column[i + 1].first || n_left < min_leaf || column.size() - n_left < min_leaf)
                continue;
            const Eigen::VectorXd right = counts - left;
            const double impurity =
                (static_cast<double>(n_left) * gini_impurity(left) +
                 static_cast<double>(column.size() - n_left) * gini_impurity(right)) / n;
            if (impurity < best_impurity) {
                best_impurity = impurity;
                best_feature = f;
                best_threshold = 0.5 * (column[i].first + column[i + 1].first);
            }
        }
    }
    if (best_feature < 0)
        return id;

    auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                     idx.begin() + static_cast<std::ptrdiff_t>(end),
                                     [&](std::size_t i) { return data[i].x[best_feature] <= best_threshold; });
    const auto split = static_cast<std::size_t>(mid - idx.begin());
    const int left_id = build(data, idx, begin, split, depth + 1);
    const int right_id = build(data, idx, split, end, depth + 1);
    nodes_[static_cast<std::size_t>(id)].feature = best_feature;
    nodes_[static_cast<std::size_t>(id)].threshold = best_threshold;
    nodes_[static_cast<std::size_t>(id)].left = left_id;
    nodes_[static_cast<std::size_t>(id)].right = right_id;
    return id;
}

int CartTree::predict_trained(const Eigen::VectorXd& x) const {
    std::size_t cur = 0;
    while (nodes_[cur].feature >= 0)
        cur = static_cast<std::size_t>(x[nodes_[cur].feature] <= nodes_[cur].threshold ? nodes_[cur].left
                                                                                       : nodes_[cur].right);
    return nodes_[cur].label;
}

std::size_t CartTree::depth() const {
    int d = 0;
    for (const auto& n : nodes_)
        d = std::max(d, n.depth);
    return static_cast<std::size_t>(d);
}

// Random forest

RandomForest::RandomForest(FeatureSchema schema, ForestParams params, std::uint64_t seed)
    : Learner(std::move(schema)), params_(params), seed_(seed) {
    if (params_.trees < 1)
        throw StreamError(ErrorKind::invalid_argument, "random forest needs at least one tree");
}

RandomForest::~RandomForest() = default;

void RandomForest::fit_batch(std::span<const Instance> buffer, std::size_t) {
    trees_.clear();
    const int d = static_cast<int>(schema_.dimension());
    const int max_features =
        params_.max_features > 0 ? params_.max_features
                                 : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(d)))));
    for (int t = 0; t < params_.trees; ++t) {
        const std::string tag = "tree" + std::to_string(t);
        CartParams cp;
        cp.max_depth = params_.max_depth;
        cp.max_features = max_features;
        auto tree = std::make_unique<CartTree>(schema_, cp, derive_seed(seed_, tag));
        if (params_.bootstrap) {
            std::mt19937_64 rng(derive_seed(seed_, "bootstrap" + std::to_string(t)));
            std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
            std::vector<Instance> sample;
            sample.reserve(buffer.size());
            for (std::size_t i = 0; i < buffer.size(); ++i)
                sample.push_back(buffer[pick(rng)]);
            tree->fit(sample);
        } else {
            tree->fit(buffer);
        }
        trees_.push_back(std::move(tree));
    }
}

int RandomForest::predict_trained(const Eigen::VectorXd& x) const {
    std::vector<std::pair<int, double>> votes;
    votes.reserve(trees_.size());
    for (const auto& t : trees_)
        votes.emplace_back(t->predict(x), 1.0);
    return ensemble_vote(votes);
}

// Online bagging

OnlineBagging::OnlineBagging(FeatureSchema schema, LearnerFactory member_factory, BaggingParams params,
                             std::uint64_t seed, std::string name)
    : Learner(std::move(schema)), factory_(std::move(member_factory)), params_(params), rng_(seed),
      name_(std::move(name)) {
    if (params_.members < 1)
        throw StreamError(ErrorKind::empty_ensemble, "online bagging needs at least one member");
    for (std::size_t i = 0; i < params_.members; ++i) {
        members_.push_back(factory_());
        if (params_.adwin)
            detectors_.emplace_back(AdwinParams{params_.delta, 5});
    }
}

void OnlineBagging::learn_one(const Instance& inst) {
    bool change = false;
    if (params_.adwin) {
        for (std::size_t i = 0; i < members_.size(); ++i) {
            const bool correct = members_[i]->trained() && members_[i]->predict(inst.x) == *inst.y;
            if (detectors_[i].observe_outcome(correct) == PredictorStatus::drift)
                change = true;
        }
    }
    for (auto& m : members_) {
        const int k = oza_poisson_weight(params_.lambda, rng_);
        for (int r = 0; r < k; ++r)
            m->partial_fit(inst);
    }
    if (change) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < detectors_.size(); ++i)
            if (detectors_[i].mean() < detectors_[worst].mean())
                worst = i;
        members_[worst] = factory_();
        detectors_[worst].reset();
        ++resets_;
        signal(name_, PredictorStatus::drift);
    }
}

int OnlineBagging::predict_trained(const Eigen::VectorXd& x) const {
    std::vector<std::pair<int, double>> votes;
    for (const auto& m : members_)
        if (m->trained())
            votes.emplace_back(m->predict(x), 1.0);
    if (votes.empty())
        return default_class().value_or(0);
    return ensemble_vote(votes);
}

}  // namespace streamlab
