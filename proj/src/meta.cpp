#include "streamlab/meta.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace streamlab {

const std::vector<std::string>& meta_feature_names() {
    static const std::vector<std::string> names = {
        "n_classes",      "n_features",     "frac_categorical", "majority_share", "class_entropy_norm",
        "mean_of_mean",   "sd_of_mean",     "mean_of_sd",       "sd_of_sd",       "mean_of_skewness",
        "sd_of_skewness", "mean_of_kurtosis", "sd_of_kurtosis", "mean_abs_cor",   "sd_abs_cor",
        "class_entropy",  "mean_attr_entropy", "mean_mutual_info", "noise_signal_ratio",
    };
    return names;
}

namespace {

// Population mean and standard deviation of a list.
std::pair<double, double> mean_sd(const std::vector<double>& v) {
    if (v.empty())
        return {0.0, 0.0};
    double m = 0.0;
    for (double x : v)
        m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v)
        s += (x - m) * (x - m);
    return {m, std::sqrt(s / static_cast<double>(v.size()))};
}

std::vector<int> discretize(const std::vector<double>& column, int bins) {
    const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
    std::vector<int> codes(column.size(), 0);
    const double range = *hi - *lo;
    if (!(range > 0.0))
        return codes;
    for (std::size_t i = 0; i < column.size(); ++i)
        codes[i] = std::min(bins - 1, static_cast<int>(std::floor((column[i] - *lo) / range * bins)));
    return codes;
}

}  // namespace

double empirical_entropy(std::span<const int> codes) {
    if (codes.empty())
        return 0.0;
    std::map<int, double> counts;
    for (int c : codes)
        counts[c] += 1.0;
    const auto n = static_cast<double>(codes.size());
    double h = 0.0;
    for (const auto& [c, k] : counts)
        h -= k / n * std::log2(k / n);
    return h;
}

double empirical_mutual_information(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size())
        throw StreamError(ErrorKind::dimension_mismatch, "mutual information needs paired samples");
    if (a.empty())
        return 0.0;
    std::map<std::pair<int, int>, double> joint;
    for (std::size_t i = 0; i < a.size(); ++i)
        joint[{a[i], b[i]}] += 1.0;
    const auto n = static_cast<double>(a.size());
    double h_ab = 0.0;
    for (const auto& [k, c] : joint)
        h_ab -= c / n * std::log2(c / n);
    return std::max(0.0, empirical_entropy(a) + empirical_entropy(b) - h_ab);
}

MetaFeatureVector extract_meta_features(std::span<const Instance> window, const FeatureSchema& schema) {
    if (window.empty())
        throw StreamError(ErrorKind::empty_stream, "meta-features need a nonempty window");
    const std::size_t n = window.size();
    const std::size_t d = schema.dimension();
    const std::size_t classes = schema.num_classes();

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!window[i].y)
            throw StreamError(ErrorKind::unlabeled_instance, "meta-features need labeled samples");
        labels[i] = *window[i].y;
    }
    std::vector<double> class_counts(classes, 0.0);
    for (int y : labels)
        class_counts[static_cast<std::size_t>(y)] += 1.0;
    const double majority = *std::max_element(class_counts.begin(), class_counts.end()) / static_cast<double>(n);
    const double class_entropy = empirical_entropy(labels);

    MetaFeatureVector out;
    out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kMetaFeatureCount));
    auto& v = out.values;
    v[0] = static_cast<double>(classes);
    v[1] = static_cast<double>(d);
    v[2] = d == 0 ? 0.0 : static_cast<double>(schema.num_categorical()) / static_cast<double>(d);
    v[3] = majority;
    v[4] = classes > 1 ? class_entropy / std::log2(static_cast<double>(classes)) : 0.0;

    std::vector<std::vector<double>> numeric;
    std::vector<double> means, sds, skews, kurts;
    std::vector<double> attr_entropy, mutual_info;
    for (std::size_t f = 0; f < d; ++f) {
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i)
            column[i] = window[i].x[static_cast<Eigen::Index>(f)];
        std::vector<int> codes;
        if (schema.feature(f).categorical()) {
            codes.reserve(n);
            for (double x : column)
                codes.push_back(static_cast<int>(x));
        } else {
            codes = discretize(column, 10);
            const auto [m, sd] = mean_sd(column);
            double m3 = 0.0, m4 = 0.0;
            for (double x : column) {
                const double z = x - m;
                m3 += z * z * z;
                m4 += z * z * z * z;
            }
            m3 /= static_cast<double>(n);
            m4 /= static_cast<double>(n);
            means.push_back(m);
            sds.push_back(sd);
            const bool flat = !(sd > 1e-12);
            skews.push_back(flat ? 0.0 : m3 / std::pow(sd, 3));
            kurts.push_back(flat ? 0.0 : m4 / std::pow(sd, 4) - 3.0);
            numeric.push_back(std::move(column));
        }
        attr_entropy.push_back(empirical_entropy(codes));
        mutual_info.push_back(empirical_mutual_information(codes, labels));
    }

    std::tie(v[5], v[6]) = mean_sd(means);
    std::tie(v[7], v[8]) = mean_sd(sds);
    std::tie(v[9], v[10]) = mean_sd(skews);
    std::tie(v[11], v[12]) = mean_sd(kurts);

    std::vector<double> correlations;
    for (std::size_t a = 0; a < numeric.size(); ++a) {
        for (std::size_t b = a + 1; b < numeric.size(); ++b) {
            if (!(sds[a] > 1e-12) || !(sds[b] > 1e-12)) {
                correlations.push_back(0.0);
                continue;
            }
            double cov = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                cov += (numeric[a][i] - means[a]) * (numeric[b][i] - means[b]);
            cov /= static_cast<double>(n);
            correlations.push_back(std::min(1.0, std::abs(cov / (sds[a] * sds[b]))));
        }
    }
    std::tie(v[13], v[14]) = mean_sd(correlations);

    v[15] = class_entropy;
    v[16] = mean_sd(attr_entropy).first;
    v[17] = mean_sd(mutual_info).first;
    v[18] = v[17] > 1e-12 ? (v[16] - v[17]) / v[17] : 0.0;

    out.categories.assign(5, MetaCategory::general);
    out.categories.resize(15, MetaCategory::statistical);
    out.categories.resize(kMetaFeatureCount, MetaCategory::info_theory);
    return out;
}

MetaFeatureVector extract_meta_features(const MetaWindow& window, const FeatureSchema& schema) {
    return extract_meta_features(std::span<const Instance>(window.samples), schema);
}

int window_best_learner(std::span<const std::uint64_t> hits, int active) {
    if (hits.empty())
        throw StreamError(ErrorKind::empty_ensemble, "window_best_learner over an empty roster");
    const std::uint64_t top = *std::max_element(hits.begin(), hits.end());
    if (active >= 0 && static_cast<std::size_t>(active) < hits.size() && hits[static_cast<std::size_t>(active)] == top)
        return active;
    return static_cast<int>(std::find(hits.begin(), hits.end(), top) - hits.begin());
}

PerformanceWeights::PerformanceWeights(std::size_t members, double alpha) : alpha_(alpha) {
    if (members == 0)
        throw StreamError(ErrorKind::empty_ensemble, "performance weights need at least one member");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw StreamError(ErrorKind::invalid_argument, "fading factor must lie in (0,1)");
    weights_ = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(members), 1.0 / static_cast<double>(members));
}

void PerformanceWeights::update(std::span<const bool> correct) {
    if (correct.size() != static_cast<std::size_t>(weights_.size()))
        throw StreamError(ErrorKind::dimension_mismatch, "one correctness bit per member expected");
    for (Eigen::Index j = 0; j < weights_.size(); ++j)
        weights_[j] = alpha_ * weights_[j] + (1.0 - alpha_) * (correct[static_cast<std::size_t>(j)] ? 1.0 : 0.0);
}

Eigen::VectorXd performance_weights(const std::vector<std::vector<bool>>& history, double alpha) {
    PerformanceWeights w(history.size(), alpha);
    const std::size_t steps = history.front().size();
    for (const auto& h : history)
        if (h.size() != steps)
            throw StreamError(ErrorKind::dimension_mismatch, "members have histories of different length");
    std::unique_ptr<bool[]> bits(new bool[history.size()]);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t j = 0; j < history.size(); ++j)
            bits[j] = history[j][t];
        w.update(std::span<const bool>(bits.get(), history.size()));
    }
    return w.weights();
}

// Selector

LinearSelector::LinearSelector(std::size_t members, std::size_t feature_count, double learning_rate) {
    if (members == 0)
        throw StreamError(ErrorKind::empty_ensemble, "selector needs at least one member");
    std::vector<FeatureSpec> features;
    for (std::size_t i = 0; i < feature_count; ++i)
        features.push_back(FeatureSpec::numeric("m" + std::to_string(i)));
    std::vector<std::string> classes;
    for (std::size_t i = 0; i < members; ++i)
        classes.push_back(std::to_string(i));
    LinearParams lp;
    lp.loss = LinearLoss::log;
    lp.learning_rate = learning_rate;
    lp.standardize = true;
    model_ = std::make_unique<LinearClassifier>(FeatureSchema(features, "member", classes), lp);
    model_->set_default_class(0);
}

void LinearSelector::observe(const Eigen::VectorXd& features, int best) {
    model_->partial_fit(Instance{features, best, 0});
}

int LinearSelector::choose(const Eigen::VectorXd& features, std::size_t) {
    if (model_->num_classes() == 1)
        return 0;
    return model_->predict(features);
}

// Ensemble

std::string_view to_string(MetaMode mode) {
    switch (mode) {
    case MetaMode::meta: return "meta";
    case MetaMode::last_best: return "last_best";
    case MetaMode::weighted_vote: return "weighted_vote";
    }
    return "meta";
}

MetaMode parse_meta_mode(std::string_view text) {
    if (text == "meta") return MetaMode::meta;
    if (text == "last_best") return MetaMode::last_best;
    if (text == "weighted_vote") return MetaMode::weighted_vote;
    throw StreamError(ErrorKind::config, "unknown meta mode '" + std::string(text) + "'");
}

MetaEnsemble::MetaEnsemble(FeatureSchema schema, std::vector<LearnerPtr> roster, MetaParams params,
                           std::unique_ptr<WindowSelector> selector)
    : Learner(std::move(schema)), roster_(std::move(roster)), params_(params), selector_(std::move(selector)),
      weights_(std::max<std::size_t>(roster_.size(), 1), params.alpha) {
    if (roster_.empty())
        throw StreamError(ErrorKind::empty_ensemble, "meta ensemble needs at least one base learner");
    if (params_.window < 1)
        throw StreamError(ErrorKind::invalid_argument, "meta window must be >= 1");
    for (const auto& m : roster_) {
        if (m->is_batch() || m->frozen())
            throw StreamError(ErrorKind::frozen_learner, "meta roster members must be adaptive");
        if (!(m->schema() == schema_))
            throw StreamError(ErrorKind::dimension_mismatch, "meta roster member has a different schema");
    }
    if (params_.mode == MetaMode::meta && !selector_)
        selector_ = std::make_unique<LinearSelector>(roster_.size());
    hits_.assign(roster_.size(), 0);
    window_.reserve(params_.window);
}

std::string MetaEnsemble::name() const {
    switch (params_.mode) {
    case MetaMode::meta: return "meta_classifier";
    case MetaMode::last_best: return "last_best_classifier";
    case MetaMode::weighted_vote: return "weighted_vote_classifier";
    }
    return "meta_classifier";
}

std::optional<int> MetaEnsemble::active_member() const {
    if (roster_.size() == 1 || params_.mode == MetaMode::weighted_vote)
        return std::nullopt;
    return active_;
}

namespace {

int member_predict(const Learner& m, const Eigen::VectorXd& x) {
    if (!m.trained() && !m.default_class())
        return 0;
    return m.predict(x);
}

}  // namespace

void MetaEnsemble::learn_one(const Instance& inst) {
    std::unique_ptr<bool[]> correct(new bool[roster_.size()]);
    for (std::size_t j = 0; j < roster_.size(); ++j) {
        correct[j] = member_predict(*roster_[j], inst.x) == *inst.y;
        hits_[j] += correct[j] ? 1 : 0;
    }
    weights_.update(std::span<const bool>(correct.get(), roster_.size()));
    for (auto& m : roster_) {
        m->partial_fit(inst);
        for (auto& s : m->take_signals())
            signal(std::move(s.source), s.status);
    }
    window_.push_back(inst);
    if (window_.size() == params_.window)
        close_window();
}

void MetaEnsemble::close_window() {
    WindowRecord rec;
    rec.hits = hits_;
    rec.active_during = active_;
    rec.best = window_best_learner(hits_, active_);
    int next = active_;
    if (params_.mode == MetaMode::meta) {
        const Eigen::VectorXd f = extract_meta_features(window_, schema_).values;
        selector_->observe(f, rec.best);
        next = selector_->choose(f, history_.size());
        if (next < 0 || static_cast<std::size_t>(next) >= roster_.size())
            throw StreamError(ErrorKind::index_out_of_range, "selector chose a member outside the roster");
    } else if (params_.mode == MetaMode::last_best) {
        next = rec.best;
    }
    rec.chosen_next = next;
    active_ = next;
    history_.push_back(std::move(rec));
    window_.clear();
    std::fill(hits_.begin(), hits_.end(), 0);
}

int MetaEnsemble::predict_trained(const Eigen::VectorXd& x) const {
    if (params_.mode == MetaMode::weighted_vote) {
        std::vector<std::pair<int, double>> votes;
        votes.reserve(roster_.size());
        for (std::size_t j = 0; j < roster_.size(); ++j)
            votes.emplace_back(member_predict(*roster_[j], x), weights_.weights()[static_cast<Eigen::Index>(j)]);
        return ensemble_vote(votes);
    }
    return member_predict(*roster_[static_cast<std::size_t>(active_)], x);
}

}  // namespace streamlab
