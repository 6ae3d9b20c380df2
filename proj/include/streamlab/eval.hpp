#pragma once

#include "streamlab/drift.hpp"
#include "streamlab/learner.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>

namespace streamlab {

/// Something noteworthy raised during a run: a detector status ("drift",
/// "warning"), an active-member switch (detail = new index) or an incomplete
/// holdout cycle.
struct TraceEvent {
    std::uint64_t seq = 0;
    std::string source;
    std::string detail;

    bool operator==(const TraceEvent&) const = default;
};

struct TraceRecord {
    std::uint64_t seq = 0;
    double cum_accuracy = 0.0;
    double window_accuracy = 0.0;
    double kappa = 0.0;
    std::vector<TraceEvent> drift_events;
    std::optional<int> active_learner;

    bool operator==(const TraceRecord&) const = default;
};

struct MetricTrace {
    std::vector<TraceRecord> records;
    /// Run descriptor: dataset, learner, seed, protocol.
    std::map<std::string, std::string> meta;

    bool operator==(const MetricTrace&) const = default;
    /// Number of events whose detail is "drift".
    std::size_t drift_count() const;
};

/// Called once per scored sample with the instance and the prediction.
using ScoreHook = std::function<void(const Instance&, int)>;

struct EvalOptions {
    std::size_t report_every = 100;
    /// Scored samples behind window_accuracy.
    std::size_t window = 200;
    std::optional<std::size_t> max_samples;
    /// Prequential only: samples trained on before scoring starts.
    std::size_t pretrain = 0;
    /// Optional detector fed with each scored sample's correctness.
    std::optional<DetectorKind> monitor;
    ScoreHook on_score;
};

/// Cumulative confusion matrix plus a sliding window of hits.
class Scoreboard {
public:
    Scoreboard(std::size_t num_classes, std::size_t window);

    void score(int y_true, int y_pred);
    double cum_accuracy() const;
    double window_accuracy() const;
    double kappa() const { return cohen_kappa(matrix_); }
    const ConfusionMatrix& matrix() const { return matrix_; }
    std::uint64_t scored() const { return static_cast<std::uint64_t>(matrix_.total()); }

    /// Drops the window only; cumulative counts are kept.
    void reset_window();

private:
    ConfusionMatrix matrix_;
    std::size_t window_;
    std::deque<bool> recent_;
    std::size_t recent_hits_ = 0;
};

/// Interleaved test-then-train: predict, score, then partial_fit each sample.
MetricTrace run_prequential(StreamSource& src, Learner& learner, const EvalOptions& options = {});

/// Cycles of (period - holdout_size) training samples followed by holdout_size
/// scored samples that are never trained on. One record per cycle; its
/// window_accuracy is the cycle's holdout accuracy.
MetricTrace run_holdout(StreamSource& src, Learner& learner, std::size_t holdout_size, std::size_t period,
                        const EvalOptions& options = {});

/// Predict and score only. The learner must be frozen.
MetricTrace evaluate_pretrained(StreamSource& src, const Learner& learner, const EvalOptions& options = {});

}  // namespace streamlab
