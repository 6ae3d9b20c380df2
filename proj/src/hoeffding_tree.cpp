#include "streamlab/hoeffding_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace streamlab {

namespace {

constexpr double kVarianceFloor = 1e-9;
// A split must route at least this share of the leaf's weight to two branches.
constexpr double kMinBranchFraction = 0.01;

bool enough_branches(const std::vector<Eigen::VectorXd>& branches, double total) {
    int heavy = 0;
    for (const auto& b : branches)
        if (b.sum() > kMinBranchFraction * total)
            ++heavy;
    return heavy >= 2;
}

}  // namespace

// Gaussian estimator

void GaussianEstimator::add(double x, double w) {
    if (w <= 0.0)
        return;
    weight += w;
    const double delta = x - mean;
    mean += delta * w / weight;
    m2 += w * delta * (x - mean);
    min = std::min(min, x);
    max = std::max(max, x);
}

double GaussianEstimator::variance() const { return weight > 1.0 ? m2 / (weight - 1.0) : 0.0; }

double GaussianEstimator::log_pdf(double x) const {
    const double var = std::max(variance(), kVarianceFloor);
    const double d = x - mean;
    return -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
}

double GaussianEstimator::weight_at_or_below(double x) const {
    if (weight <= 0.0 || x < min)
        return 0.0;
    if (x >= max)
        return weight;
    const double sd = std::sqrt(variance());
    if (sd <= 0.0)
        return x >= mean ? weight : 0.0;
    return weight * 0.5 * std::erfc(-(x - mean) / (sd * std::numbers::sqrt2));
}

// Attribute observers

void AttributeObserver::observe(double value, int label, double w) {
    if (kind == FeatureKind::numeric) {
        per_class[static_cast<std::size_t>(label)].add(value, w);
        min = std::min(min, value);
        max = std::max(max, value);
    } else {
        counts(static_cast<Eigen::Index>(value), label) += w;
    }
}

double AttributeObserver::log_likelihood(double value, int label) const {
    if (kind == FeatureKind::numeric) {
        const auto& g = per_class[static_cast<std::size_t>(label)];
        return g.weight > 0.0 ? g.log_pdf(value) : 0.0;
    }
    const double n = counts.col(label).sum();
    const double k = counts(static_cast<Eigen::Index>(value), label);
    return std::log((k + 1.0) / (n + static_cast<double>(counts.rows())));
}

ClassStatistics::ClassStatistics(const FeatureSchema& schema)
    : class_counts_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(schema.num_classes()))) {
    for (const auto& f : schema.features()) {
        AttributeObserver obs;
        obs.kind = f.kind;
        if (f.categorical())
            obs.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(f.arity()),
                                               static_cast<Eigen::Index>(schema.num_classes()));
        else
            obs.per_class.resize(schema.num_classes());
        attributes_.push_back(std::move(obs));
    }
}

void ClassStatistics::observe(const Eigen::VectorXd& x, int label, double w) {
    class_counts_[label] += w;
    for (std::size_t i = 0; i < attributes_.size(); ++i)
        attributes_[i].observe(x[static_cast<Eigen::Index>(i)], label, w);
}

int ClassStatistics::majority_class() const { return argmax_lowest(class_counts_); }

Eigen::VectorXd ClassStatistics::naive_bayes_scores(const Eigen::VectorXd& x) const {
    const double total = class_counts_.sum();
    Eigen::VectorXd scores(class_counts_.size());
    for (Eigen::Index c = 0; c < class_counts_.size(); ++c) {
        if (class_counts_[c] <= 0.0) {
            scores[c] = -std::numeric_limits<double>::infinity();
            continue;
        }
        double s = std::log(class_counts_[c] / total);
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            s += attributes_[i].log_likelihood(x[static_cast<Eigen::Index>(i)], static_cast<int>(c));
        scores[c] = s;
    }
    return scores;
}

int ClassStatistics::naive_bayes_class(const Eigen::VectorXd& x) const {
    return argmax_lowest(naive_bayes_scores(x));
}

// Split evaluation

double entropy_bits(const Eigen::VectorXd& counts) {
    const double total = counts.sum();
    if (total <= 0.0)
        return 0.0;
    double h = 0.0;
    for (Eigen::Index i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0.0) {
            const double p = counts[i] / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

double information_gain(const Eigen::VectorXd& parent, const std::vector<Eigen::VectorXd>& branches) {
    const double total = parent.sum();
    if (total <= 0.0)
        return 0.0;
    double after = 0.0;
    for (const auto& b : branches)
        after += b.sum() / total * entropy_bits(b);
    return entropy_bits(parent) - after;
}

int SplitTest::branch_of(const Eigen::VectorXd& x) const {
    const double v = x[feature];
    if (categorical)
        return static_cast<int>(v);
    return v <= threshold ? 0 : 1;
}

std::vector<SplitCandidate> split_candidates(const ClassStatistics& stats, const FeatureSchema& schema,
                                             int numeric_bins) {
    std::vector<SplitCandidate> out;
    const Eigen::VectorXd& parent = stats.class_counts();
    const double total = parent.sum();
    const auto classes = parent.size();
    for (std::size_t i = 0; i < stats.num_attributes(); ++i) {
        const auto& obs = stats.attribute(i);
        const int feature = static_cast<int>(i);
        if (obs.kind == FeatureKind::categorical) {
            std::vector<Eigen::VectorXd> branches;
            for (Eigen::Index v = 0; v < obs.counts.rows(); ++v)
                branches.push_back(obs.counts.row(v).transpose());
            if (!enough_branches(branches, total))
                continue;
            SplitCandidate c;
            c.test = SplitTest{feature, true, 0.0, static_cast<int>(schema.feature(i).arity())};
            c.merit = information_gain(parent, branches);
            c.distributions = std::move(branches);
            out.push_back(std::move(c));
            continue;
        }
        if (!(obs.min < obs.max))
            continue;
        std::optional<SplitCandidate> best;
        for (int k = 1; k <= numeric_bins; ++k) {
            const double t = obs.min + (obs.max - obs.min) * k / (numeric_bins + 1);
            Eigen::VectorXd left(classes), right(classes);
            for (Eigen::Index c = 0; c < classes; ++c) {
                const auto& g = obs.per_class[static_cast<std::size_t>(c)];
                left[c] = g.weight_at_or_below(t);
                right[c] = g.weight - left[c];
            }
            std::vector<Eigen::VectorXd> branches{left, right};
            if (!enough_branches(branches, total))
                continue;
            const double merit = information_gain(parent, branches);
            if (!best || merit > best->merit) {
                SplitCandidate c;
                c.test = SplitTest{feature, false, t, 2};
                c.merit = merit;
                c.distributions = std::move(branches);
                best = std::move(c);
            }
        }
        if (best)
            out.push_back(std::move(*best));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SplitCandidate& a, const SplitCandidate& b) { return a.merit > b.merit; });
    return out;
}

SplitDecision ht_attempt_split(const ClassStatistics& stats, const FeatureSchema& schema,
                               const SplitCriteria& criteria) {
    SplitDecision d;
    const double n = stats.total();
    if (n < 1.0)
        return d;
    auto candidates = split_candidates(stats, schema, criteria.numeric_bins);
    if (candidates.empty())
        return d;
    d.best_merit = candidates[0].merit;
    d.second_merit = candidates.size() > 1 ? candidates[1].merit : 0.0;
    const double range = std::log2(std::max<double>(2.0, static_cast<double>(schema.num_classes())));
    d.epsilon = hoeffding_bound(range, criteria.delta, n);
    d.should_split = d.best_merit > 0.0 &&
                     (d.best_merit - d.second_merit > d.epsilon || d.epsilon < criteria.tau);
    d.best = std::move(candidates[0]);
    return d;
}

PredictorStatus hat_monitor(Adwin& detector, bool correct) {
    const double before = detector.mean();
    const auto status = detector.update(correct ? 0.0 : 1.0);
    if (status == PredictorStatus::drift && detector.mean() <= before)
        return PredictorStatus::stable;
    return status;
}

// Tree

struct HoeffdingTree::Node {
    std::optional<SplitTest> test;
    std::vector<std::unique_ptr<Node>> children;
    ClassStatistics stats;
    double weight_at_last_check = 0.0;
    double majority_correct = 0.0;
    double bayes_correct = 0.0;
    std::optional<int> inherited;
    std::unique_ptr<Adwin> error;
    std::unique_ptr<Node> alternate;

    bool is_leaf() const { return !test; }
};

HoeffdingTree::HoeffdingTree(FeatureSchema schema, HoeffdingTreeParams params, bool adaptive)
    : Learner(std::move(schema)), params_(params), adaptive_(adaptive) {
    if (params_.grace_period < 1)
        throw StreamError(ErrorKind::invalid_argument, "grace period must be >= 1");
    if (!(params_.criteria.delta > 0.0 && params_.criteria.delta < 1.0))
        throw StreamError(ErrorKind::invalid_argument, "split confidence must lie in (0,1)");
    root_ = make_leaf(std::nullopt);
}

HoeffdingTree::~HoeffdingTree() = default;

std::unique_ptr<HoeffdingTree::Node> HoeffdingTree::make_leaf(std::optional<int> inherited) const {
    auto node = std::make_unique<Node>();
    node->stats = ClassStatistics(schema_);
    node->inherited = inherited;
    if (adaptive_)
        node->error = std::make_unique<Adwin>();
    return node;
}

int HoeffdingTree::leaf_predict(const Node& leaf, const Eigen::VectorXd& x) const {
    if (leaf.stats.total() <= 0.0)
        return leaf.inherited.value_or(0);
    switch (params_.leaf_prediction) {
    case LeafPrediction::majority: return leaf.stats.majority_class();
    case LeafPrediction::naive_bayes: return leaf.stats.naive_bayes_class(x);
    case LeafPrediction::adaptive:
        return leaf.bayes_correct > leaf.majority_correct ? leaf.stats.naive_bayes_class(x)
                                                          : leaf.stats.majority_class();
    }
    return leaf.stats.majority_class();
}

const HoeffdingTree::Node& HoeffdingTree::sort_to_leaf(const Node& node, const Eigen::VectorXd& x) const {
    const Node* cur = &node;
    while (!cur->is_leaf())
        cur = cur->children[static_cast<std::size_t>(cur->test->branch_of(x))].get();
    return *cur;
}

int HoeffdingTree::predict_from(const Node& node, const Eigen::VectorXd& x) const {
    return leaf_predict(sort_to_leaf(node, x), x);
}

int HoeffdingTree::predict_trained(const Eigen::VectorXd& x) const { return predict_from(*root_, x); }

void HoeffdingTree::learn_leaf(Node& leaf, const Instance& inst) {
    const int y = *inst.y;
    if (params_.leaf_prediction == LeafPrediction::adaptive && leaf.stats.total() > 0.0) {
        if (leaf.stats.majority_class() == y)
            leaf.majority_correct += 1.0;
        if (leaf.stats.naive_bayes_class(inst.x) == y)
            leaf.bayes_correct += 1.0;
    }
    leaf.stats.observe(inst.x, y);
    const double total = leaf.stats.total();
    if (total - leaf.weight_at_last_check < params_.grace_period)
        return;
    leaf.weight_at_last_check = total;
    auto decision = ht_attempt_split(leaf.stats, schema_, params_.criteria);
    if (!decision.should_split)
        return;

    const auto& best = *decision.best;
    const int fallback = leaf.stats.majority_class();
    leaf.test = best.test;
    for (const auto& dist : best.distributions)
        leaf.children.push_back(make_leaf(dist.sum() > 0.0 ? argmax_lowest(dist) : fallback));
    leaf.stats = ClassStatistics();
    leaf.majority_correct = leaf.bayes_correct = 0.0;
    if (adaptive_)
        leaf.error = std::make_unique<Adwin>();
}

void HoeffdingTree::learn_adaptive(std::unique_ptr<Node>& slot, const Instance& inst) {
    Node& node = *slot;
    const bool correct = predict_from(node, inst.x) == *inst.y;
    if (node.is_leaf()) {
        hat_monitor(*node.error, correct);
        learn_leaf(node, inst);
        return;
    }

    if (hat_monitor(*node.error, correct) == PredictorStatus::drift) {
        if (!node.alternate) {
            node.alternate = make_leaf(std::nullopt);
            ++alternates_created_;
            signal("hat", PredictorStatus::drift);
        }
    } else if (node.alternate && node.alternate->error->width() > params_.swap_min_width &&
               node.error->width() > params_.swap_min_width) {
        const double old_error = node.error->mean();
        const double alt_error = node.alternate->error->mean();
        const double inv_n = 1.0 / static_cast<double>(node.alternate->error->width()) +
                             1.0 / static_cast<double>(node.error->width());
        const double bound =
            std::sqrt(2.0 * old_error * (1.0 - old_error) * std::log(2.0 / params_.swap_delta) * inv_n);
        if (bound < old_error - alt_error) {
            std::unique_ptr<Node> replacement = std::move(node.alternate);
            slot = std::move(replacement);
            ++subtrees_replaced_;
            learn_adaptive(slot, inst);
            return;
        }
        if (bound < alt_error - old_error)
            node.alternate.reset();
    }

    if (node.alternate)
        learn_adaptive(node.alternate, inst);
    learn_adaptive(node.children[static_cast<std::size_t>(node.test->branch_of(inst.x))], inst);
}

void HoeffdingTree::learn_one(const Instance& inst) {
    if (adaptive_) {
        learn_adaptive(root_, inst);
        return;
    }
    Node* cur = root_.get();
    while (!cur->is_leaf())
        cur = cur->children[static_cast<std::size_t>(cur->test->branch_of(inst.x))].get();
    learn_leaf(*cur, inst);
}

namespace {

template <typename NodeT, typename Fn>
void visit(const NodeT& node, bool with_alternates, Fn&& fn, std::size_t depth = 0) {
    fn(node, depth);
    for (const auto& c : node.children)
        visit(*c, with_alternates, fn, depth + 1);
    if (with_alternates && node.alternate)
        visit(*node.alternate, with_alternates, fn, depth);
}

}  // namespace

std::size_t HoeffdingTree::node_count() const {
    std::size_t n = 0;
    visit(*root_, false, [&](const Node&, std::size_t) { ++n; });
    return n;
}

std::size_t HoeffdingTree::leaf_count() const {
    std::size_t n = 0;
    visit(*root_, false, [&](const Node& node, std::size_t) { n += node.is_leaf() ? 1 : 0; });
    return n;
}

std::size_t HoeffdingTree::alternate_count() const {
    std::size_t n = 0;
    visit(*root_, true, [&](const Node& node, std::size_t) { n += node.alternate ? 1 : 0; });
    return n;
}

std::size_t HoeffdingTree::depth() const {
    std::size_t d = 0;
    visit(*root_, false, [&](const Node&, std::size_t depth) { d = std::max(d, depth); });
    return d;
}

Eigen::VectorXd HoeffdingTree::root_class_counts() const { return root_->stats.class_counts(); }

}  // namespace streamlab
