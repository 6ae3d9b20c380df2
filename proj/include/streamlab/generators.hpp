#pragma once

#include "streamlab/core.hpp"

#include <array>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace streamlab {

enum class GeneratorFamily { agrawal, stagger, sea, led, hyperplane, rbf };

std::string_view to_string(GeneratorFamily family);
GeneratorFamily parse_generator_family(std::string_view name);

/// Base for seeded synthetic generators. Copying a generator forks a
/// reproducible sub-stream.
class Generator : public StreamSource {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    std::optional<Instance> next() final;
    const FeatureSchema& schema() const final { return schema_; }

    virtual std::unique_ptr<Generator> clone() const = 0;

protected:
    virtual Instance draw() = 0;

    std::mt19937_64 rng_;
    FeatureSchema schema_;

private:
    std::uint64_t seq_ = 0;
};

// Agrawal

struct AgrawalRecord {
    double salary = 0, commission = 0, age = 0;
    int elevel = 0, car = 1, zipcode = 0;
    double hvalue = 0, hyears = 0, loan = 0;
};

/// Loan-approval label functions 0..9; returns 0 for group A, 1 otherwise.
int agrawal_label(int function, const AgrawalRecord& r);

/// Feature order: salary, commission, age, elevel, car, zipcode, hvalue, hyears, loan.
class AgrawalGenerator final : public Generator {
public:
    AgrawalGenerator(int function, std::uint64_t seed);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<AgrawalGenerator>(*this); }

    static AgrawalRecord decode(const Eigen::VectorXd& x);
    static FeatureSchema make_schema();

protected:
    Instance draw() override;

private:
    int function_;
};

// STAGGER

int stagger_label(int concept_id, int size, int color, int shape);

/// size {small, medium, large}, color {red, green, blue}, shape {circle, square, triangle}.
class StaggerGenerator final : public Generator {
public:
    StaggerGenerator(int concept_id, std::uint64_t seed);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<StaggerGenerator>(*this); }
    static FeatureSchema make_schema();

protected:
    Instance draw() override;

private:
    int concept_;
};

// SEA

inline constexpr std::array<double, 4> kSeaThresholds{8.0, 9.0, 7.0, 9.5};

int sea_label(int concept_id, double x1, double x2);

class SeaGenerator final : public Generator {
public:
    SeaGenerator(int concept_id, std::uint64_t seed, double noise = 0.0);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<SeaGenerator>(*this); }
    static FeatureSchema make_schema();

protected:
    Instance draw() override;

private:
    int concept_;
    double noise_;
};

// LED

/// Seven-segment encoding, segment order top, top-left, top-right, middle,
/// bottom-left, bottom-right, bottom.
inline constexpr std::array<std::array<int, 7>, 10> kLedSegments{{
    {1, 1, 1, 0, 1, 1, 1},
    {0, 0, 1, 0, 0, 1, 0},
    {1, 0, 1, 1, 1, 0, 1},
    {1, 0, 1, 1, 0, 1, 1},
    {0, 1, 1, 1, 0, 1, 0},
    {1, 1, 0, 1, 0, 1, 1},
    {1, 1, 0, 1, 1, 1, 1},
    {1, 0, 1, 0, 0, 1, 0},
    {1, 1, 1, 1, 1, 1, 1},
    {1, 1, 1, 1, 0, 1, 1},
}};

inline constexpr int kLedRelevant = 7;
inline constexpr int kLedIrrelevant = 17;

/// 7 noisy segment bits followed by 17 uniform irrelevant bits; label is the digit.
class LedGenerator final : public Generator {
public:
    LedGenerator(std::uint64_t seed, double noise = 0.10);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<LedGenerator>(*this); }
    static FeatureSchema make_schema();

protected:
    Instance draw() override;

private:
    double noise_;
};

// Hyperplane

struct HyperplaneParams {
    int dimension = 10;
    int drifting_weights = 2;
    double magnitude = 0.001;
    double reversal_probability = 0.1;
    double noise = 0.0;
};

/// 1 iff w.x >= sum(w)/2.
int hyperplane_label(const Eigen::VectorXd& weights, const Eigen::VectorXd& x);

class HyperplaneGenerator final : public Generator {
public:
    HyperplaneGenerator(std::uint64_t seed, HyperplaneParams params = {});
    HyperplaneGenerator(Eigen::VectorXd weights, std::uint64_t seed, HyperplaneParams params);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<HyperplaneGenerator>(*this); }
    static FeatureSchema make_schema(int dimension);

    /// Weights that will label the next emitted instance.
    const Eigen::VectorXd& weights() const { return weights_; }

protected:
    Instance draw() override;

private:
    void init();

    HyperplaneParams params_;
    Eigen::VectorXd weights_;
    Eigen::VectorXd directions_;
};

// Random RBF

struct RbfCentroid {
    Eigen::VectorXd center;
    int label = 0;
    double stddev = 0.0;
    double weight = 1.0;
    Eigen::VectorXd direction;
};

struct RbfParams {
    int dimension = 10;
    int num_classes = 2;
    int num_centroids = 50;
    double speed = 0.0001;
};

class RbfGenerator final : public Generator {
public:
    RbfGenerator(std::uint64_t seed, RbfParams params = {});
    RbfGenerator(std::vector<RbfCentroid> centroids, std::uint64_t seed, RbfParams params);
    std::unique_ptr<Generator> clone() const override { return std::make_unique<RbfGenerator>(*this); }
    static FeatureSchema make_schema(int dimension, int num_classes);

    const std::vector<RbfCentroid>& centroids() const { return centroids_; }

protected:
    Instance draw() override;

private:
    void init();
    void move_centroids();

    RbfParams params_;
    std::vector<RbfCentroid> centroids_;
    std::discrete_distribution<std::size_t> pick_;
};

/// Probability of drawing from the post-drift concept_id at sample t.
double drift_mixing_probability(double t, double position, double width);

/// Switches from `base` to `post` around `position` with a sigmoid of slope 4/width.
class ConceptDriftStream final : public StreamSource {
public:
    ConceptDriftStream(std::unique_ptr<StreamSource> base, std::unique_ptr<StreamSource> post,
                       double position, double width, std::uint64_t seed);

    std::optional<Instance> next() override;
    const FeatureSchema& schema() const override { return base_->schema(); }

    bool last_from_post() const { return last_from_post_; }

private:
    std::unique_ptr<StreamSource> base_;
    std::unique_ptr<StreamSource> post_;
    double position_;
    double width_;
    std::mt19937_64 rng_;
    std::uint64_t t_ = 0;
    bool last_from_post_ = false;
};

/// Declarative description of a (possibly drifting) generated stream.
struct GeneratorSpec {
    GeneratorFamily family = GeneratorFamily::sea;
    /// One concept_id per segment; drifts happen at the positions between them.
    std::vector<int> concepts{0};
    std::vector<double> drift_positions;
    double drift_width = 1.0;
    std::uint64_t seed = 1;
    std::map<std::string, double> params;
};

std::unique_ptr<Generator> make_generator(GeneratorFamily family, int concept_id, std::uint64_t seed,
                                          const std::map<std::string, double>& params = {});

std::unique_ptr<StreamSource> make_stream(const GeneratorSpec& spec);

FeatureSchema generator_schema(GeneratorFamily family, const std::map<std::string, double>& params = {});

/// Parameter names accepted by each family, with defaults.
std::map<std::string, double> generator_defaults(GeneratorFamily family);

}  // namespace streamlab
