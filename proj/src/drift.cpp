#include "streamlab/drift.hpp"

#include <algorithm>
#include <cmath>

namespace streamlab {

std::string_view to_string(DetectorKind kind) {
    switch (kind) {
    case DetectorKind::page_hinkley: return "page_hinkley";
    case DetectorKind::ddm: return "ddm";
    case DetectorKind::eddm: return "eddm";
    case DetectorKind::adwin: return "adwin";
    }
    return "adwin";
}

DetectorKind parse_detector_kind(std::string_view name) {
    if (name == "page_hinkley") return DetectorKind::page_hinkley;
    if (name == "ddm") return DetectorKind::ddm;
    if (name == "eddm") return DetectorKind::eddm;
    if (name == "adwin") return DetectorKind::adwin;
    throw StreamError(ErrorKind::config, "unknown drift detector '" + std::string(name) + "'");
}

PredictorStatus DriftDetector::observe_outcome(bool correct) {
    if (kind() == DetectorKind::adwin)
        return update(correct ? 1.0 : 0.0);
    return update(correct ? 0.0 : 1.0);
}

// Page-Hinkley

PageHinkley::PageHinkley(PageHinkleyParams params) : params_(params) { reset(); }

void PageHinkley::reset() {
    n_ = 0;
    mean_ = 0.0;
    cumulative_ = 0.0;
    minimum_ = std::numeric_limits<double>::infinity();
}

PredictorStatus PageHinkley::update(double x) {
    ++n_;
    mean_ += (x - mean_) / static_cast<double>(n_);
    cumulative_ += x - mean_ - params_.delta;
    minimum_ = std::min(minimum_, cumulative_);
    if (n_ < params_.min_instances)
        return PredictorStatus::stable;
    if (cumulative_ - minimum_ > params_.lambda) {
        reset();
        return PredictorStatus::drift;
    }
    return PredictorStatus::stable;
}

// DDM

Ddm::Ddm(DdmParams params) : params_(params) { reset(); }

void Ddm::reset() {
    n_ = 0;
    p_ = 0.0;
    p_min_ = std::numeric_limits<double>::infinity();
    s_min_ = std::numeric_limits<double>::infinity();
}

PredictorStatus Ddm::classify(double p_plus_s, double p_min, double s_min, const DdmParams& params) {
    if (p_plus_s > p_min + params.drift_level * s_min)
        return PredictorStatus::drift;
    if (p_plus_s > p_min + params.warning_level * s_min)
        return PredictorStatus::warning;
    return PredictorStatus::stable;
}

PredictorStatus Ddm::update(double error) {
    ++n_;
    const double n = static_cast<double>(n_);
    p_ += (error - p_) / n;
    const double s = std::sqrt(p_ * (1.0 - p_) / n);
    if (n_ < params_.min_instances)
        return PredictorStatus::stable;
    if (p_ + s <= p_min_ + s_min_) {
        p_min_ = p_;
        s_min_ = s;
    }
    const auto status = classify(p_ + s, p_min_, s_min_, params_);
    if (status == PredictorStatus::drift)
        reset();
    return status;
}

// EDDM

Eddm::Eddm(EddmParams params) : params_(params) { reset(); }

void Eddm::reset() {
    n_ = 0;
    errors_ = 0;
    last_error_at_ = 0;
    mean_ = 0.0;
    m2_ = 0.0;
    max_m2s_ = 0.0;
}

PredictorStatus Eddm::classify(double ratio, const EddmParams& params) {
    if (ratio < params.beta)
        return PredictorStatus::drift;
    if (ratio < params.alpha)
        return PredictorStatus::warning;
    return PredictorStatus::stable;
}

PredictorStatus Eddm::update(double error) {
    ++n_;
    if (error < 0.5)
        return PredictorStatus::stable;
    ++errors_;
    const double distance = static_cast<double>(n_ - last_error_at_);
    last_error_at_ = n_;
    const double delta = distance - mean_;
    mean_ += delta / static_cast<double>(errors_);
    m2_ += delta * (distance - mean_);
    const double m2s = mean_ + 2.0 * std::sqrt(m2_ / static_cast<double>(errors_));
    if (errors_ < params_.min_errors || m2s > max_m2s_) {
        max_m2s_ = std::max(max_m2s_, m2s);
        return PredictorStatus::stable;
    }
    const auto status = classify(m2s / max_m2s_, params_);
    if (status == PredictorStatus::drift)
        reset();
    return status;
}

// ADWIN

double adwin_cut_threshold(double n0, double n1, double n, double delta) {
    const double m = 1.0 / (1.0 / n0 + 1.0 / n1);
    const double delta_prime = delta / n;
    return std::sqrt(1.0 / (2.0 * m) * std::log(4.0 / delta_prime));
}

Adwin::Adwin(AdwinParams params) : params_(params) {
    if (!(params_.delta > 0.0 && params_.delta < 1.0))
        throw StreamError(ErrorKind::invalid_argument, "adwin delta must lie in (0,1)");
    if (params_.max_buckets < 2)
        throw StreamError(ErrorKind::invalid_argument, "adwin needs at least 2 buckets per level");
}

void Adwin::reset() {
    n_ = 0;
    levels_.clear();
    width_ = 0;
    total_ = 0.0;
    variance_ = 0.0;
}

std::size_t Adwin::bucket_count() const {
    std::size_t n = 0;
    for (const auto& level : levels_)
        n += level.size();
    return n;
}

void Adwin::insert(double x) {
    if (levels_.empty())
        levels_.emplace_back();
    levels_.front().push_front(Bucket{x, 0.0});
    if (width_ > 0) {
        const double w = static_cast<double>(width_);
        const double diff = x - total_ / w;
        variance_ += w * diff * diff / (w + 1.0);
    }
    ++width_;
    total_ += x;
}

void Adwin::compress() {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i].size() <= static_cast<std::size_t>(params_.max_buckets))
            break;
        if (i + 1 == levels_.size())
            levels_.emplace_back();
        const Bucket older = levels_[i].back();
        levels_[i].pop_back();
        const Bucket newer = levels_[i].back();
        levels_[i].pop_back();
        const double size = std::ldexp(1.0, static_cast<int>(i));
        const double mu_diff = older.total / size - newer.total / size;
        Bucket merged{older.total + newer.total,
                      older.variance + newer.variance + size * size / (2.0 * size) * mu_diff * mu_diff};
        levels_[i + 1].push_front(merged);
    }
}

void Adwin::drop_oldest() {
    while (!levels_.empty() && levels_.back().empty())
        levels_.pop_back();
    if (levels_.empty())
        return;
    const std::size_t level = levels_.size() - 1;
    const Bucket b = levels_.back().back();
    levels_.back().pop_back();
    const double size = std::ldexp(1.0, static_cast<int>(level));
    const double rest = static_cast<double>(width_) - size;
    width_ -= static_cast<std::uint64_t>(size);
    total_ -= b.total;
    if (rest > 0.0) {
        const double mu_diff = b.total / size - total_ / rest;
        variance_ -= b.variance + size * rest / (size + rest) * mu_diff * mu_diff;
        variance_ = std::max(variance_, 0.0);
    } else {
        variance_ = 0.0;
    }
    while (!levels_.empty() && levels_.back().empty())
        levels_.pop_back();
}

bool Adwin::cut_once() {
    const double n = static_cast<double>(width_);
    double n0 = 0.0;
    double total0 = 0.0;
    // Walk from the oldest bucket; W0 is everything up to the boundary.
    for (std::size_t level = levels_.size(); level-- > 0;) {
        const double size = std::ldexp(1.0, static_cast<int>(level));
        const auto& buckets = levels_[level];
        for (auto it = buckets.rbegin(); it != buckets.rend(); ++it) {
            n0 += size;
            total0 += it->total;
            const double n1 = n - n0;
            if (n1 <= 0.0)
                return false;
            const double mu0 = total0 / n0;
            const double mu1 = (total_ - total0) / n1;
            if (std::abs(mu0 - mu1) >= adwin_cut_threshold(n0, n1, n, params_.delta))
                return true;
        }
    }
    return false;
}

PredictorStatus Adwin::update(double x) {
    if (!(x >= 0.0 && x <= 1.0))
        throw StreamError(ErrorKind::invalid_argument, "adwin input must lie in [0,1]");
    ++n_;
    insert(x);
    compress();
    bool cut = false;
    while (width_ > 1 && cut_once()) {
        drop_oldest();
        cut = true;
    }
    return cut ? PredictorStatus::drift : PredictorStatus::stable;
}

std::unique_ptr<DriftDetector> make_detector(DetectorKind kind) {
    switch (kind) {
    case DetectorKind::page_hinkley: return std::make_unique<PageHinkley>();
    case DetectorKind::ddm: return std::make_unique<Ddm>();
    case DetectorKind::eddm: return std::make_unique<Eddm>();
    case DetectorKind::adwin: return std::make_unique<Adwin>();
    }
    return std::make_unique<Adwin>();
}

}  // namespace streamlab
