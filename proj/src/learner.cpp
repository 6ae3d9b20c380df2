#include "streamlab/learner.hpp"

#include <charconv>
#include <cmath>

namespace streamlab {

std::string Params::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Params::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    try {
        std::size_t used = 0;
        const double v = std::stod(it->second, &used);
        if (used == it->second.size())
            return v;
    } catch (const std::exception&) {
    }
    throw StreamError(ErrorKind::config, "parameter '" + key + "' is not a number: '" + it->second + "'");
}

long Params::get_int(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    long v = 0;
    const auto& s = it->second;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw StreamError(ErrorKind::config, "parameter '" + key + "' is not an integer: '" + s + "'");
    return v;
}

bool Params::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end())
        return fallback;
    if (it->second == "true" || it->second == "1")
        return true;
    if (it->second == "false" || it->second == "0")
        return false;
    throw StreamError(ErrorKind::config, "parameter '" + key + "' is not a boolean: '" + it->second + "'");
}

std::string Params::to_string() const {
    std::string out;
    for (const auto& [k, v] : values_) {
        if (!out.empty())
            out += ';';
        out += k + "=" + v;
    }
    return out;
}

Learner::Learner(FeatureSchema schema) : schema_(std::move(schema)) {}

void Learner::partial_fit(const Instance& inst) {
    if (frozen_ || is_batch())
        throw StreamError(ErrorKind::frozen_learner, name() + " does not accept incremental updates");
    if (!inst.y)
        throw StreamError(ErrorKind::unlabeled_instance,
                          "partial_fit on unlabeled instance " + std::to_string(inst.seq));
    learn_one(inst);
    ++seen_;
}

int Learner::predict(const Eigen::VectorXd& x) const {
    if (!trained()) {
        if (default_class_)
            return *default_class_;
        throw StreamError(ErrorKind::untrained_learner, name() + " has not seen any training sample");
    }
    return predict_trained(x);
}

void Learner::fit(std::span<const Instance> buffer, std::size_t epochs) {
    if (!is_batch())
        throw StreamError(ErrorKind::invalid_argument, name() + " is not a batch learner");
    if (frozen_)
        throw StreamError(ErrorKind::frozen_learner, name() + " is already trained and frozen");
    if (buffer.empty())
        throw StreamError(ErrorKind::empty_stream, "batch training needs a nonempty buffer");
    for (const auto& inst : buffer)
        if (!inst.y)
            throw StreamError(ErrorKind::unlabeled_instance,
                              "batch buffer holds unlabeled instance " + std::to_string(inst.seq));
    fit_batch(buffer, epochs);
    seen_ = buffer.size();
    frozen_ = true;
}

void Learner::fit_batch(std::span<const Instance>, std::size_t) {
    throw StreamError(ErrorKind::invalid_argument, name() + " does not implement batch training");
}

double hoeffding_bound(double range, double delta, double n) {
    if (!(n >= 1.0) || !(range > 0.0))
        throw StreamError(ErrorKind::invalid_argument, "hoeffding bound needs n >= 1 and R > 0");
    if (!(delta > 0.0 && delta <= 1.0))
        throw StreamError(ErrorKind::invalid_argument, "hoeffding bound needs delta in (0,1]");
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

int oza_poisson_weight(double lambda, std::mt19937_64& rng) {
    if (!(lambda > 0.0))
        throw StreamError(ErrorKind::invalid_argument, "poisson lambda must be positive");
    return std::poisson_distribution<int>(lambda)(rng);
}

int ensemble_vote(std::span<const std::pair<int, double>> preds) {
    if (preds.empty())
        throw StreamError(ErrorKind::empty_ensemble, "vote over an empty ensemble");
    std::map<int, double> totals;
    for (const auto& [cls, w] : preds) {
        if (w < 0.0)
            throw StreamError(ErrorKind::invalid_argument, "vote weights must be nonnegative");
        totals[cls] += w;
    }
    int best = totals.begin()->first;
    double best_w = totals.begin()->second;
    for (const auto& [cls, w] : totals) {
        if (w > best_w) {
            best = cls;
            best_w = w;
        }
    }
    return best;
}

int argmax_lowest(const Eigen::VectorXd& scores) {
    int best = 0;
    for (Eigen::Index i = 1; i < scores.size(); ++i)
        if (scores[i] > scores[best])
            best = static_cast<int>(i);
    return best;
}

LearnerPtr train_batch(LearnerPtr learner, std::span<const Instance> buffer, std::size_t epochs) {
    if (buffer.empty())
        throw StreamError(ErrorKind::empty_stream, "train_batch needs a nonempty buffer");
    if (learner->is_batch()) {
        learner->fit(buffer, epochs);
    } else {
        for (std::size_t e = 0; e < std::max<std::size_t>(epochs, 1); ++e)
            for (const auto& inst : buffer)
                learner->partial_fit(inst);
        learner->freeze();
    }
    return learner;
}

RunningScaler::RunningScaler(Eigen::Index width)
    : mean_(Eigen::VectorXd::Zero(width)), m2_(Eigen::VectorXd::Zero(width)) {}

void RunningScaler::observe(const Eigen::VectorXd& v) {
    n_ += 1.0;
    const Eigen::VectorXd delta = v - mean_;
    mean_ += delta / n_;
    m2_ += delta.cwiseProduct(v - mean_);
}

Eigen::VectorXd RunningScaler::stddev() const {
    if (n_ < 2.0)
        return Eigen::VectorXd::Ones(mean_.size());
    Eigen::VectorXd sd = (m2_ / n_).cwiseSqrt();
    for (Eigen::Index i = 0; i < sd.size(); ++i)
        if (!(sd[i] > 1e-12))
            sd[i] = 1.0;
    return sd;
}

Eigen::VectorXd RunningScaler::transform(const Eigen::VectorXd& v) const {
    return (v - mean_).cwiseQuotient(stddev());
}

}  // namespace streamlab
