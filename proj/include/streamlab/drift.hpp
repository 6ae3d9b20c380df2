#pragma once

#include "streamlab/core.hpp"

#include <cstdint>
#include <deque>
#include <limits>
#include <memory>
#include <string>
#include <string_view>

namespace streamlab {

enum class DetectorKind { page_hinkley, ddm, eddm, adwin };

std::string_view to_string(DetectorKind kind);
DetectorKind parse_detector_kind(std::string_view name);

/// Common update -> status contract. `update` takes the raw monitored value:
/// the error indicator for Page-Hinkley/DDM/EDDM, the correctness bit for ADWIN.
class DriftDetector {
public:
    virtual ~DriftDetector() = default;

    virtual PredictorStatus update(double x) = 0;
    virtual void reset() = 0;
    virtual DetectorKind kind() const = 0;
    virtual std::unique_ptr<DriftDetector> clone() const = 0;

    std::uint64_t observed() const { return n_; }

    /// Feeds one prediction outcome using each detector's input convention.
    PredictorStatus observe_outcome(bool correct);

protected:
    std::uint64_t n_ = 0;
};

struct PageHinkleyParams {
    double delta = 0.005;
    double lambda = 50.0;
    std::uint64_t min_instances = 30;
};

/// Detects an increase in the mean of the monitored value.
class PageHinkley final : public DriftDetector {
public:
    explicit PageHinkley(PageHinkleyParams params = {});

    PredictorStatus update(double x) override;
    void reset() override;
    DetectorKind kind() const override { return DetectorKind::page_hinkley; }
    std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<PageHinkley>(*this); }

    double mean() const { return mean_; }
    double cumulative() const { return cumulative_; }
    double minimum() const { return minimum_; }

private:
    PageHinkleyParams params_;
    double mean_ = 0.0;
    double cumulative_ = 0.0;
    double minimum_ = 0.0;
};

struct DdmParams {
    std::uint64_t min_instances = 30;
    double warning_level = 2.0;
    double drift_level = 3.0;
};

class Ddm final : public DriftDetector {
public:
    explicit Ddm(DdmParams params = {});

    PredictorStatus update(double error) override;
    void reset() override;
    DetectorKind kind() const override { return DetectorKind::ddm; }
    std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Ddm>(*this); }

    /// Threshold rule on the current p+s against the tracked minimum.
    static PredictorStatus classify(double p_plus_s, double p_min, double s_min,
                                    const DdmParams& params = {});

    double error_rate() const { return p_; }
    double p_min() const { return p_min_; }
    double s_min() const { return s_min_; }

private:
    DdmParams params_;
    double p_ = 0.0;
    double p_min_ = std::numeric_limits<double>::infinity();
    double s_min_ = std::numeric_limits<double>::infinity();
};

struct EddmParams {
    double alpha = 0.95;
    double beta = 0.90;
    std::uint64_t min_errors = 30;
};

/// Tracks the distance between consecutive errors.
class Eddm final : public DriftDetector {
public:
    explicit Eddm(EddmParams params = {});

    PredictorStatus update(double error) override;
    void reset() override;
    DetectorKind kind() const override { return DetectorKind::eddm; }
    std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Eddm>(*this); }

    static PredictorStatus classify(double ratio, const EddmParams& params = {});

    double mean_distance() const { return mean_; }
    std::uint64_t errors() const { return errors_; }

private:
    EddmParams params_;
    std::uint64_t errors_ = 0;
    std::uint64_t last_error_at_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double max_m2s_ = 0.0;
};

struct AdwinParams {
    double delta = 0.002;
    int max_buckets = 5;
};

/// Cut threshold for sub-windows of sizes n0 and n1 inside a window of n samples.
double adwin_cut_threshold(double n0, double n1, double n, double delta);

/// Adaptive window over an exponential bucket histogram. Split points are
/// checked at every bucket boundary after each insert.
class Adwin final : public DriftDetector {
public:
    explicit Adwin(AdwinParams params = {});

    PredictorStatus update(double x) override;
    void reset() override;
    DetectorKind kind() const override { return DetectorKind::adwin; }
    std::unique_ptr<DriftDetector> clone() const override { return std::make_unique<Adwin>(*this); }

    std::uint64_t width() const { return width_; }
    double total() const { return total_; }
    double mean() const { return width_ == 0 ? 0.0 : total_ / static_cast<double>(width_); }
    double variance() const { return width_ == 0 ? 0.0 : variance_ / static_cast<double>(width_); }
    std::size_t bucket_count() const;

private:
    struct Bucket {
        double total = 0.0;
        double variance = 0.0;
    };
    // levels_[i] holds buckets of 2^i samples, newest at the front.
    std::deque<std::deque<Bucket>> levels_;

    void insert(double x);
    void compress();
    bool cut_once();
    void drop_oldest();

    AdwinParams params_;
    std::uint64_t width_ = 0;
    double total_ = 0.0;
    double variance_ = 0.0;
};

std::unique_ptr<DriftDetector> make_detector(DetectorKind kind);

}  // namespace streamlab
