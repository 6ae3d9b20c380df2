#pragma once

#include "streamlab/core.hpp"

#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace streamlab {

/// String-valued hyperparameter map with typed accessors.
class Params {
public:
    Params() = default;
    Params(std::initializer_list<std::pair<const std::string, std::string>> init) : values_(init) {}
    explicit Params(std::map<std::string, std::string> values) : values_(std::move(values)) {}

    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool has(const std::string& key) const { return values_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    const std::map<std::string, std::string>& values() const { return values_; }

    /// "k1=v1;k2=v2" in key order; empty string for no parameters.
    std::string to_string() const;

    bool operator==(const Params&) const = default;

private:
    std::map<std::string, std::string> values_;
};

/// Detector signal raised inside a learner (HAT node, ensemble member).
struct LearnerSignal {
    std::string source;
    PredictorStatus status = PredictorStatus::stable;
};

/// Incremental classifier contract. Batch algorithms implement `fit` and are
/// frozen afterwards; adaptive algorithms implement `learn_one`.
class Learner {
public:
    explicit Learner(FeatureSchema schema);
    virtual ~Learner() = default;

    Learner(const Learner&) = delete;
    Learner& operator=(const Learner&) = delete;

    /// Trains on one labeled instance. Throws frozen_learner for frozen or
    /// batch learners and unlabeled_instance for missing labels.
    void partial_fit(const Instance& inst);

    /// Never mutates state. Falls back to the default class before any training.
    int predict(const Eigen::VectorXd& x) const;

    /// Batch training on a buffer; only batch algorithms support this.
    void fit(std::span<const Instance> buffer, std::size_t epochs = 1);

    virtual bool is_batch() const { return false; }
    virtual std::string name() const = 0;

    bool frozen() const { return frozen_; }
    void freeze() { frozen_ = true; }
    bool trained() const { return seen_ > 0; }
    std::uint64_t samples_seen() const { return seen_; }

    void set_default_class(std::optional<int> c) { default_class_ = c; }
    std::optional<int> default_class() const { return default_class_; }

    const FeatureSchema& schema() const { return schema_; }
    std::size_t num_classes() const { return schema_.num_classes(); }

    /// Index of the member currently answering predictions, for selector ensembles.
    virtual std::optional<int> active_member() const { return std::nullopt; }

    /// Drains detector signals raised since the last call.
    std::vector<LearnerSignal> take_signals() { return std::exchange(signals_, {}); }

protected:
    virtual void learn_one(const Instance& inst) = 0;
    virtual int predict_trained(const Eigen::VectorXd& x) const = 0;
    virtual void fit_batch(std::span<const Instance> buffer, std::size_t epochs);

    void signal(std::string source, PredictorStatus status) { signals_.push_back({std::move(source), status}); }

    FeatureSchema schema_;

private:
    std::uint64_t seen_ = 0;
    bool frozen_ = false;
    std::optional<int> default_class_;
    std::vector<LearnerSignal> signals_;
};

using LearnerPtr = std::unique_ptr<Learner>;
using LearnerFactory = std::function<LearnerPtr()>;

/// Confidence radius sqrt(R^2 ln(1/delta) / 2n).
double hoeffding_bound(double range, double delta, double n);

/// Poisson(lambda) replication count for online bagging.
int oza_poisson_weight(double lambda, std::mt19937_64& rng);

/// Argmax of summed weights per class; ties go to the lowest class index.
int ensemble_vote(std::span<const std::pair<int, double>> preds);

/// Index of the largest entry, lowest index on ties.
int argmax_lowest(const Eigen::VectorXd& scores);

/// Batch learners are fit on the buffer; adaptive ones are fed `epochs`
/// passes of partial_fit. The result is frozen.
LearnerPtr train_batch(LearnerPtr learner, std::span<const Instance> buffer, std::size_t epochs = 1);

/// Welford running mean and variance per column.
class RunningScaler {
public:
    RunningScaler() = default;
    explicit RunningScaler(Eigen::Index width);

    void observe(const Eigen::VectorXd& v);
    /// (v - mean) / std, with std taken as 1 where variance is zero.
    Eigen::VectorXd transform(const Eigen::VectorXd& v) const;

    double count() const { return n_; }
    const Eigen::VectorXd& mean() const { return mean_; }
    Eigen::VectorXd stddev() const;

private:
    double n_ = 0.0;
    Eigen::VectorXd mean_;
    Eigen::VectorXd m2_;
};

// Registry

enum class LearnerKind { adaptive, batch };

struct ParamInfo {
    std::string name;
    std::string default_value;
    std::string description;
};

struct LearnerInfo {
    std::string name;
    LearnerKind kind = LearnerKind::adaptive;
    std::string description;
    std::vector<ParamInfo> params;
};

const std::vector<LearnerInfo>& learner_registry();
const LearnerInfo& learner_info(const std::string& algorithm);

/// Builds a learner by algorithm name. Unknown algorithms or parameter names
/// raise config errors. `default_class` (default 0) is the pre-training answer.
LearnerPtr make_learner(const std::string& algorithm, const Params& params, const FeatureSchema& schema,
                        std::uint64_t seed);

}  // namespace streamlab
