#include "streamlab/eval.hpp"

namespace streamlab {

std::size_t MetricTrace::drift_count() const {
    std::size_t n = 0;
    for (const auto& r : records)
        for (const auto& e : r.drift_events)
            n += e.detail == "drift" ? 1 : 0;
    return n;
}

Scoreboard::Scoreboard(std::size_t num_classes, std::size_t window) : matrix_(num_classes), window_(window) {
    if (window < 1)
        throw StreamError(ErrorKind::invalid_argument, "accuracy window must be >= 1");
}

void Scoreboard::score(int y_true, int y_pred) {
    matrix_.update(y_true, y_pred);
    const bool hit = y_true == y_pred;
    recent_.push_back(hit);
    recent_hits_ += hit ? 1 : 0;
    if (recent_.size() > window_) {
        recent_hits_ -= recent_.front() ? 1 : 0;
        recent_.pop_front();
    }
}

double Scoreboard::cum_accuracy() const { return accuracy(matrix_); }

double Scoreboard::window_accuracy() const {
    if (recent_.empty())
        throw StreamError(ErrorKind::empty_matrix, "window accuracy over zero samples");
    return static_cast<double>(recent_hits_) / static_cast<double>(recent_.size());
}

void Scoreboard::reset_window() {
    recent_.clear();
    recent_hits_ = 0;
}

namespace {

// Shared bookkeeping: scoring, pending events and record emission.
class Recorder {
public:
    Recorder(const Learner& learner, const EvalOptions& options, std::size_t window)
        : board_(learner.num_classes(), window), last_active_(learner.active_member()) {
        if (options.report_every < 1)
            throw StreamError(ErrorKind::invalid_argument, "report_every must be >= 1");
        if (options.monitor)
            monitor_ = make_detector(*options.monitor);
        hook_ = options.on_score;
    }

    void score(const Instance& inst, int pred) {
        board_.score(*inst.y, pred);
        if (hook_)
            hook_(inst, pred);
        if (monitor_) {
            const PredictorStatus s = monitor_->observe_outcome(pred == *inst.y);
            if (s != PredictorStatus::stable)
                pending_.push_back({inst.seq, std::string(to_string(monitor_->kind())), std::string(to_string(s))});
        }
    }

    void collect(Learner& learner, std::uint64_t seq) {
        for (const auto& s : learner.take_signals())
            pending_.push_back({seq, s.source, std::string(to_string(s.status))});
        const auto active = learner.active_member();
        if (active && active != last_active_)
            pending_.push_back({seq, "switch", std::to_string(*active)});
        last_active_ = active;
    }

    void emit(std::uint64_t seq, std::optional<int> active) {
        TraceRecord r;
        r.seq = seq;
        r.cum_accuracy = board_.cum_accuracy();
        r.window_accuracy = board_.window_accuracy();
        r.kappa = board_.kappa();
        r.drift_events = std::move(pending_);
        r.active_learner = active;
        pending_.clear();
        trace_.records.push_back(std::move(r));
        emitted_seq_ = seq;
    }

    void add_event(TraceEvent e) { pending_.push_back(std::move(e)); }

    Scoreboard& board() { return board_; }
    bool emitted_at(std::uint64_t seq) const { return emitted_seq_ && *emitted_seq_ == seq; }
    MetricTrace take() { return std::move(trace_); }

private:
    Scoreboard board_;
    std::unique_ptr<DriftDetector> monitor_;
    ScoreHook hook_;
    std::vector<TraceEvent> pending_;
    std::optional<int> last_active_;
    std::optional<std::uint64_t> emitted_seq_;
    MetricTrace trace_;
};

Instance next_labeled(std::optional<Instance> inst) {
    if (!inst->y)
        throw StreamError(ErrorKind::unlabeled_instance, "evaluation met unlabeled instance " + std::to_string(inst->seq));
    return std::move(*inst);
}

}  // namespace

MetricTrace run_prequential(StreamSource& src, Learner& learner, const EvalOptions& options) {
    Recorder rec(learner, options, options.window);
    std::size_t pretrained = 0;
    std::uint64_t last_seq = 0;
    while (!options.max_samples || rec.board().scored() < *options.max_samples) {
        auto next = src.next();
        if (!next)
            break;
        const Instance inst = next_labeled(std::move(next));
        if (pretrained < options.pretrain) {
            learner.partial_fit(inst);
            learner.take_signals();
            ++pretrained;
            continue;
        }
        const int pred = learner.predict(inst.x);
        rec.score(inst, pred);
        learner.partial_fit(inst);
        rec.collect(learner, inst.seq);
        last_seq = inst.seq;
        if (rec.board().scored() % options.report_every == 0)
            rec.emit(inst.seq, learner.active_member());
    }
    if (rec.board().scored() == 0)
        throw StreamError(ErrorKind::empty_stream, "prequential run scored no samples");
    if (!rec.emitted_at(last_seq))
        rec.emit(last_seq, learner.active_member());
    return rec.take();
}

MetricTrace run_holdout(StreamSource& src, Learner& learner, std::size_t holdout_size, std::size_t period,
                        const EvalOptions& options) {
    if (holdout_size < 1 || period <= holdout_size)
        throw StreamError(ErrorKind::invalid_argument, "holdout needs 1 <= holdout_size < period");
    Recorder rec(learner, options, holdout_size);
    const std::size_t train_len = period - holdout_size;
    std::size_t consumed = 0;
    std::size_t cycles = 0;
    std::size_t scored_in_cycle = 0;
    std::uint64_t last_scored = 0;
    while (!options.max_samples || consumed < *options.max_samples) {
        auto next = src.next();
        if (!next)
            break;
        const Instance inst = next_labeled(std::move(next));
        const std::size_t pos = consumed % period;
        ++consumed;
        if (pos == 0)
            rec.board().reset_window();
        if (pos < train_len) {
            learner.partial_fit(inst);
            rec.collect(learner, inst.seq);
        } else {
            rec.score(inst, learner.predict(inst.x));
            ++scored_in_cycle;
            last_scored = inst.seq;
        }
        if (pos == period - 1) {
            rec.emit(inst.seq, learner.active_member());
            ++cycles;
            scored_in_cycle = 0;
        }
    }
    if (cycles == 0)
        throw StreamError(ErrorKind::empty_stream, "stream is shorter than one holdout cycle");
    if (scored_in_cycle > 0) {
        rec.add_event({last_scored, "holdout", "incomplete"});
        rec.emit(last_scored, learner.active_member());
    }
    return rec.take();
}

MetricTrace evaluate_pretrained(StreamSource& src, const Learner& learner, const EvalOptions& options) {
    if (!learner.frozen())
        throw StreamError(ErrorKind::not_frozen, learner.name() + " must be trained and frozen before scoring");
    Recorder rec(learner, options, options.window);
    std::uint64_t last_seq = 0;
    while (!options.max_samples || rec.board().scored() < *options.max_samples) {
        auto next = src.next();
        if (!next)
            break;
        const Instance inst = next_labeled(std::move(next));
        rec.score(inst, learner.predict(inst.x));
        last_seq = inst.seq;
        if (rec.board().scored() % options.report_every == 0)
            rec.emit(inst.seq, learner.active_member());
    }
    if (rec.board().scored() == 0)
        throw StreamError(ErrorKind::empty_stream, "nothing left to score");
    if (!rec.emitted_at(last_seq))
        rec.emit(last_seq, learner.active_member());
    return rec.take();
}

}  // namespace streamlab
