#include "streamlab/generators.hpp"

#include <cmath>
#include <numeric>

namespace streamlab {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

bool bernoulli(std::mt19937_64& rng, double p) {
    return p > 0.0 && uniform(rng, 0.0, 1.0) < p;
}

void check_concept(int concept_id, int count, std::string_view family) {
    if (concept_id < 0 || concept_id >= count)
        throw StreamError(ErrorKind::invalid_argument,
                          std::string(family) + " concept " + std::to_string(concept_id) + " outside [0," +
                              std::to_string(count - 1) + "]");
}

void check_probability(double p, std::string_view what) {
    if (!(p >= 0.0 && p < 1.0))
        throw StreamError(ErrorKind::invalid_argument, std::string(what) + " must lie in [0,1)");
}

std::vector<std::string> prefixed(std::string_view prefix, int first, int count) {
    std::vector<std::string> out;
    for (int i = 0; i < count; ++i)
        out.push_back(std::string(prefix) + std::to_string(first + i));
    return out;
}

bool in_range(double v, double lo, double hi) { return lo <= v && v <= hi; }

}  // namespace

std::string_view to_string(GeneratorFamily family) {
    switch (family) {
    case GeneratorFamily::agrawal: return "agrawal";
    case GeneratorFamily::stagger: return "stagger";
    case GeneratorFamily::sea: return "sea";
    case GeneratorFamily::led: return "led";
    case GeneratorFamily::hyperplane: return "hyperplane";
    case GeneratorFamily::rbf: return "rbf";
    }
    return "sea";
}

GeneratorFamily parse_generator_family(std::string_view name) {
    for (auto f : {GeneratorFamily::agrawal, GeneratorFamily::stagger, GeneratorFamily::sea, GeneratorFamily::led,
                   GeneratorFamily::hyperplane, GeneratorFamily::rbf})
        if (to_string(f) == name)
            return f;
    throw StreamError(ErrorKind::config, "unknown generator family '" + std::string(name) + "'");
}

std::optional<Instance> Generator::next() {
    Instance inst = draw();
    inst.seq = seq_++;
    return inst;
}

// Agrawal

int agrawal_label(int function, const AgrawalRecord& r) {
    const double s = r.salary;
    const double age = r.age;
    const int e = r.elevel;
    switch (function) {
    case 0:
        return (age < 40 || age >= 60) ? 0 : 1;
    case 1:
        if (age < 40) return in_range(s, 50000, 100000) ? 0 : 1;
        if (age < 60) return in_range(s, 75000, 125000) ? 0 : 1;
        return in_range(s, 25000, 75000) ? 0 : 1;
    case 2:
        if (age < 40) return (e >= 0 && e <= 1) ? 0 : 1;
        if (age < 60) return (e >= 1 && e <= 3) ? 0 : 1;
        return (e >= 2 && e <= 4) ? 0 : 1;
    case 3:
        if (age < 40)
            return (e <= 1 ? in_range(s, 25000, 75000) : in_range(s, 50000, 100000)) ? 0 : 1;
        if (age < 60)
            return (e >= 1 && e <= 3 ? in_range(s, 50000, 100000) : in_range(s, 75000, 125000)) ? 0 : 1;
        return (e >= 2 ? in_range(s, 50000, 100000) : in_range(s, 25000, 75000)) ? 0 : 1;
    case 4:
        if (age < 40)
            return (in_range(s, 50000, 100000) ? in_range(r.loan, 100000, 300000)
                                               : in_range(r.loan, 200000, 400000))
                       ? 0
                       : 1;
        if (age < 60)
            return (in_range(s, 75000, 125000) ? in_range(r.loan, 200000, 400000)
                                               : in_range(r.loan, 300000, 500000))
                       ? 0
                       : 1;
        return (in_range(s, 25000, 75000) ? in_range(r.loan, 300000, 500000) : in_range(r.loan, 100000, 300000))
                   ? 0
                   : 1;
    case 5: {
        const double total = s + r.commission;
        if (age < 40) return in_range(total, 50000, 100000) ? 0 : 1;
        if (age < 60) return in_range(total, 75000, 125000) ? 0 : 1;
        return in_range(total, 25000, 75000) ? 0 : 1;
    }
    case 6: {
        const double disposable = 2.0 * (s + r.commission) / 3.0 - r.loan / 5.0 - 20000.0;
        return disposable > 0 ? 0 : 1;
    }
    case 7: {
        const double disposable = 2.0 * (s + r.commission) / 3.0 - 5000.0 * e - 20000.0;
        return disposable > 0 ? 0 : 1;
    }
    case 8: {
        const double disposable = 2.0 * (s + r.commission) / 3.0 - 5000.0 * e - r.loan / 5.0 - 10000.0;
        return disposable > 0 ? 0 : 1;
    }
    case 9: {
        const double equity = r.hyears >= 20 ? r.hvalue * (r.hyears - 20.0) / 10.0 : 0.0;
        const double disposable = 2.0 * (s + r.commission) / 3.0 - 5000.0 * e + equity / 5.0 - 10000.0;
        return disposable > 0 ? 0 : 1;
    }
    default:
        break;
    }
    throw StreamError(ErrorKind::invalid_argument, "agrawal function " + std::to_string(function) +
                                                       " outside [0,9]");
}

FeatureSchema AgrawalGenerator::make_schema() {
    return FeatureSchema(
        {FeatureSpec::numeric("salary"), FeatureSpec::numeric("commission"), FeatureSpec::numeric("age"),
         FeatureSpec::categorical_of("elevel", prefixed("level", 0, 5)),
         FeatureSpec::categorical_of("car", prefixed("car", 1, 20)),
         FeatureSpec::categorical_of("zipcode", prefixed("zip", 0, 9)), FeatureSpec::numeric("hvalue"),
         FeatureSpec::numeric("hyears"), FeatureSpec::numeric("loan")},
        "class", {"groupA", "groupB"});
}

AgrawalGenerator::AgrawalGenerator(int function, std::uint64_t seed) : Generator(seed), function_(function) {
    check_concept(function, 10, "agrawal");
    schema_ = make_schema();
}

AgrawalRecord AgrawalGenerator::decode(const Eigen::VectorXd& x) {
    AgrawalRecord r;
    r.salary = x[0];
    r.commission = x[1];
    r.age = x[2];
    r.elevel = static_cast<int>(x[3]);
    r.car = static_cast<int>(x[4]) + 1;
    r.zipcode = static_cast<int>(x[5]);
    r.hvalue = x[6];
    r.hyears = x[7];
    r.loan = x[8];
    return r;
}

Instance AgrawalGenerator::draw() {
    AgrawalRecord r;
    r.salary = uniform(rng_, 20000.0, 150000.0);
    r.commission = r.salary >= 75000.0 ? 0.0 : uniform(rng_, 10000.0, 75000.0);
    r.age = uniform_int(rng_, 20, 80);
    r.elevel = uniform_int(rng_, 0, 4);
    r.car = uniform_int(rng_, 1, 20);
    r.zipcode = uniform_int(rng_, 0, 8);
    r.hvalue = (9.0 - r.zipcode) * 100000.0 * uniform(rng_, 0.5, 1.5);
    r.hyears = uniform_int(rng_, 1, 30);
    r.loan = uniform(rng_, 0.0, 500000.0);

    Instance inst;
    inst.x.resize(9);
    inst.x << r.salary, r.commission, r.age, r.elevel, r.car - 1, r.zipcode, r.hvalue, r.hyears, r.loan;
    inst.y = agrawal_label(function_, r);
    return inst;
}

// STAGGER

int stagger_label(int concept_id, int size, int color, int shape) {
    switch (concept_id) {
    case 0: return (size == 0 && color == 0) ? 1 : 0;
    case 1: return (color == 1 || shape == 0) ? 1 : 0;
    case 2: return (size == 1 || size == 2) ? 1 : 0;
    default: break;
    }
    throw StreamError(ErrorKind::invalid_argument, "stagger concept " + std::to_string(concept_id) + " outside [0,2]");
}

FeatureSchema StaggerGenerator::make_schema() {
    return FeatureSchema({FeatureSpec::categorical_of("size", {"small", "medium", "large"}),
                          FeatureSpec::categorical_of("color", {"red", "green", "blue"}),
                          FeatureSpec::categorical_of("shape", {"circle", "square", "triangle"})},
                         "class", {"false", "true"});
}

StaggerGenerator::StaggerGenerator(int concept_id, std::uint64_t seed) : Generator(seed), concept_(concept_id) {
    check_concept(concept_id, 3, "stagger");
    schema_ = make_schema();
}

Instance StaggerGenerator::draw() {
    const int size = uniform_int(rng_, 0, 2);
    const int color = uniform_int(rng_, 0, 2);
    const int shape = uniform_int(rng_, 0, 2);
    Instance inst;
    inst.x = Eigen::Vector3d(size, color, shape);
    inst.y = stagger_label(concept_, size, color, shape);
    return inst;
}

// SEA

int sea_label(int concept_id, double x1, double x2) {
    check_concept(concept_id, 4, "sea");
    return x1 + x2 <= kSeaThresholds[static_cast<std::size_t>(concept_id)] ? 1 : 0;
}

FeatureSchema SeaGenerator::make_schema() {
    return FeatureSchema({FeatureSpec::numeric("x1"), FeatureSpec::numeric("x2"), FeatureSpec::numeric("x3")},
                         "class", {"0", "1"});
}

SeaGenerator::SeaGenerator(int concept_id, std::uint64_t seed, double noise)
    : Generator(seed), concept_(concept_id), noise_(noise) {
    check_concept(concept_id, 4, "sea");
    check_probability(noise, "sea noise");
    schema_ = make_schema();
}

Instance SeaGenerator::draw() {
    Instance inst;
    inst.x.resize(3);
    for (int i = 0; i < 3; ++i)
        inst.x[i] = uniform(rng_, 0.0, 10.0);
    int label = sea_label(concept_, inst.x[0], inst.x[1]);
    if (bernoulli(rng_, noise_))
        label = 1 - label;
    inst.y = label;
    return inst;
}

// LED

FeatureSchema LedGenerator::make_schema() {
    std::vector<FeatureSpec> features;
    for (int i = 0; i < kLedRelevant + kLedIrrelevant; ++i)
        features.push_back(FeatureSpec::numeric("att" + std::to_string(i)));
    return FeatureSchema(std::move(features), "digit", prefixed("", 0, 10));
}

LedGenerator::LedGenerator(std::uint64_t seed, double noise) : Generator(seed), noise_(noise) {
    check_probability(noise, "led noise");
    schema_ = make_schema();
}

Instance LedGenerator::draw() {
    const int digit = uniform_int(rng_, 0, 9);
    Instance inst;
    inst.x.resize(kLedRelevant + kLedIrrelevant);
    for (int i = 0; i < kLedRelevant; ++i) {
        int bit = kLedSegments[static_cast<std::size_t>(digit)][static_cast<std::size_t>(i)];
        if (bernoulli(rng_, noise_))
            bit = 1 - bit;
        inst.x[i] = bit;
    }
    for (int i = kLedRelevant; i < kLedRelevant + kLedIrrelevant; ++i)
        inst.x[i] = uniform_int(rng_, 0, 1);
    inst.y = digit;
    return inst;
}

// Hyperplane

int hyperplane_label(const Eigen::VectorXd& weights, const Eigen::VectorXd& x) {
    return weights.dot(x) >= 0.5 * weights.sum() ? 1 : 0;
}

FeatureSchema HyperplaneGenerator::make_schema(int dimension) {
    std::vector<FeatureSpec> features;
    for (int i = 0; i < dimension; ++i)
        features.push_back(FeatureSpec::numeric("x" + std::to_string(i + 1)));
    return FeatureSchema(std::move(features), "class", {"0", "1"});
}

HyperplaneGenerator::HyperplaneGenerator(std::uint64_t seed, HyperplaneParams params)
    : Generator(seed), params_(params) {
    if (params_.dimension < 1)
        throw StreamError(ErrorKind::invalid_argument, "hyperplane dimension must be >= 1");
    weights_.resize(params_.dimension);
    for (int i = 0; i < params_.dimension; ++i)
        weights_[i] = uniform(rng_, 0.0, 1.0);
    init();
}

HyperplaneGenerator::HyperplaneGenerator(Eigen::VectorXd weights, std::uint64_t seed, HyperplaneParams params)
    : Generator(seed), params_(params), weights_(std::move(weights)) {
    init();
}

void HyperplaneGenerator::init() {
    params_.dimension = static_cast<int>(weights_.size());
    if (params_.drifting_weights < 0 || params_.drifting_weights > params_.dimension)
        throw StreamError(ErrorKind::invalid_argument, "hyperplane drifting weights outside [0,d]");
    if (params_.magnitude < 0.0)
        throw StreamError(ErrorKind::invalid_argument, "hyperplane drift magnitude must be >= 0");
    check_probability(params_.reversal_probability, "hyperplane reversal probability");
    check_probability(params_.noise, "hyperplane noise");
    directions_ = Eigen::VectorXd::Zero(params_.dimension);
    directions_.head(params_.drifting_weights).setOnes();
    schema_ = make_schema(params_.dimension);
}

Instance HyperplaneGenerator::draw() {
    Instance inst;
    inst.x.resize(params_.dimension);
    for (int i = 0; i < params_.dimension; ++i)
        inst.x[i] = uniform(rng_, 0.0, 1.0);
    int label = hyperplane_label(weights_, inst.x);
    if (bernoulli(rng_, params_.noise))
        label = 1 - label;
    inst.y = label;

    if (params_.magnitude > 0.0) {
        for (int i = 0; i < params_.drifting_weights; ++i) {
            weights_[i] += directions_[i] * params_.magnitude;
            if (bernoulli(rng_, params_.reversal_probability))
                directions_[i] = -directions_[i];
        }
    }
    return inst;
}

// Random RBF

FeatureSchema RbfGenerator::make_schema(int dimension, int num_classes) {
    std::vector<FeatureSpec> features;
    for (int i = 0; i < dimension; ++i)
        features.push_back(FeatureSpec::numeric("x" + std::to_string(i + 1)));
    return FeatureSchema(std::move(features), "class", prefixed("", 0, num_classes));
}

RbfGenerator::RbfGenerator(std::uint64_t seed, RbfParams params) : Generator(seed), params_(params) {
    if (params_.num_centroids < params_.num_classes)
        throw StreamError(ErrorKind::invalid_argument, "rbf needs at least one centroid per class");
    for (int c = 0; c < params_.num_centroids; ++c) {
        RbfCentroid centroid;
        centroid.center.resize(params_.dimension);
        for (int i = 0; i < params_.dimension; ++i)
            centroid.center[i] = uniform(rng_, 0.0, 1.0);
        centroid.label = c < params_.num_classes ? c : uniform_int(rng_, 0, params_.num_classes - 1);
        centroid.stddev = uniform(rng_, 0.0, 1.0);
        centroid.weight = uniform(rng_, 0.0, 1.0);
        centroids_.push_back(std::move(centroid));
    }
    init();
}

RbfGenerator::RbfGenerator(std::vector<RbfCentroid> centroids, std::uint64_t seed, RbfParams params)
    : Generator(seed), params_(params), centroids_(std::move(centroids)) {
    init();
}

void RbfGenerator::init() {
    if (centroids_.empty())
        throw StreamError(ErrorKind::invalid_argument, "rbf needs at least one centroid");
    if (params_.speed < 0.0)
        throw StreamError(ErrorKind::invalid_argument, "rbf speed must be >= 0");
    params_.num_centroids = static_cast<int>(centroids_.size());
    params_.dimension = static_cast<int>(centroids_.front().center.size());
    std::vector<double> weights;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& c : centroids_) {
        if (c.center.size() != params_.dimension)
            throw StreamError(ErrorKind::dimension_mismatch, "rbf centroids differ in dimension");
        if (c.label < 0 || c.label >= params_.num_classes)
            throw StreamError(ErrorKind::unknown_class, "rbf centroid label outside class range");
        if (c.direction.size() != params_.dimension) {
            c.direction.resize(params_.dimension);
            for (int i = 0; i < params_.dimension; ++i)
                c.direction[i] = gauss(rng_);
            const double norm = c.direction.norm();
            if (norm > 0.0)
                c.direction /= norm;
        }
        weights.push_back(c.weight);
    }
    pick_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    schema_ = make_schema(params_.dimension, params_.num_classes);
}

void RbfGenerator::move_centroids() {
    for (auto& c : centroids_) {
        for (int i = 0; i < params_.dimension; ++i) {
            double v = c.center[i] + params_.speed * c.direction[i];
            if (v < 0.0) {
                v = -v;
                c.direction[i] = -c.direction[i];
            } else if (v > 1.0) {
                v = 2.0 - v;
                c.direction[i] = -c.direction[i];
            }
            c.center[i] = v;
        }
    }
}

Instance RbfGenerator::draw() {
    const auto& c = centroids_[pick_(rng_)];
    Instance inst;
    inst.x = c.center;
    if (c.stddev > 0.0) {
        std::normal_distribution<double> gauss(0.0, c.stddev);
        for (int i = 0; i < params_.dimension; ++i)
            inst.x[i] += gauss(rng_);
    }
    inst.y = c.label;
    if (params_.speed > 0.0)
        move_centroids();
    return inst;
}

// Drift composition

double drift_mixing_probability(double t, double position, double width) {
    if (width < 1.0)
        throw StreamError(ErrorKind::invalid_argument, "drift width must be >= 1");
    return 1.0 / (1.0 + std::exp(-4.0 * (t - position) / width));
}

ConceptDriftStream::ConceptDriftStream(std::unique_ptr<StreamSource> base, std::unique_ptr<StreamSource> post,
                                       double position, double width, std::uint64_t seed)
    : base_(std::move(base)), post_(std::move(post)), position_(position), width_(width), rng_(seed) {
    if (!base_ || !post_)
        throw StreamError(ErrorKind::invalid_argument, "drift composition needs two sources");
    if (position_ < 0.0)
        throw StreamError(ErrorKind::invalid_argument, "drift position must be >= 0");
    drift_mixing_probability(0.0, position_, width_);
    if (base_->schema().dimension() != post_->schema().dimension() ||
        base_->schema().num_classes() != post_->schema().num_classes())
        throw StreamError(ErrorKind::dimension_mismatch, "drift composition sources disagree on schema");
}

std::optional<Instance> ConceptDriftStream::next() {
    const double p = drift_mixing_probability(static_cast<double>(t_), position_, width_);
    last_from_post_ = uniform(rng_, 0.0, 1.0) < p;
    auto inst = last_from_post_ ? post_->next() : base_->next();
    if (!inst)
        throw StreamError(ErrorKind::exhausted, "drift composition source exhausted");
    inst->seq = t_++;
    return inst;
}

// Factories

std::map<std::string, double> generator_defaults(GeneratorFamily family) {
    switch (family) {
    case GeneratorFamily::agrawal: return {};
    case GeneratorFamily::stagger: return {};
    case GeneratorFamily::sea: return {{"noise", 0.0}};
    case GeneratorFamily::led: return {{"noise", 0.10}};
    case GeneratorFamily::hyperplane:
        return {{"dimension", 10}, {"drifting_weights", 2}, {"magnitude", 0.001},
                {"reversal_probability", 0.1}, {"noise", 0.0}};
    case GeneratorFamily::rbf:
        return {{"dimension", 10}, {"classes", 2}, {"centroids", 50}, {"speed", 0.0001}};
    }
    return {};
}

namespace {

std::map<std::string, double> resolve(GeneratorFamily family, const std::map<std::string, double>& params) {
    auto out = generator_defaults(family);
    for (const auto& [k, v] : params) {
        if (!out.count(k))
            throw StreamError(ErrorKind::config, "generator " + std::string(to_string(family)) +
                                                     " has no parameter '" + k + "'");
        out[k] = v;
    }
    return out;
}

}  // namespace

std::unique_ptr<Generator> make_generator(GeneratorFamily family, int concept_id, std::uint64_t seed,
                                          const std::map<std::string, double>& params) {
    const auto p = resolve(family, params);
    switch (family) {
    case GeneratorFamily::agrawal: return std::make_unique<AgrawalGenerator>(concept_id, seed);
    case GeneratorFamily::stagger: return std::make_unique<StaggerGenerator>(concept_id, seed);
    case GeneratorFamily::sea: return std::make_unique<SeaGenerator>(concept_id, seed, p.at("noise"));
    case GeneratorFamily::led:
        if (concept_id != 0)
            throw StreamError(ErrorKind::invalid_argument, "led has a single concept (0)");
        return std::make_unique<LedGenerator>(seed, p.at("noise"));
    case GeneratorFamily::hyperplane: {
        if (concept_id < 0)
            throw StreamError(ErrorKind::invalid_argument, "hyperplane concept must be >= 0");
        HyperplaneParams hp;
        hp.dimension = static_cast<int>(p.at("dimension"));
        hp.drifting_weights = static_cast<int>(p.at("drifting_weights"));
        hp.magnitude = p.at("magnitude");
        hp.reversal_probability = p.at("reversal_probability");
        hp.noise = p.at("noise");
        // A concept index selects a different random hyperplane.
        return std::make_unique<HyperplaneGenerator>(derive_seed(seed, "concept" + std::to_string(concept_id)), hp);
    }
    case GeneratorFamily::rbf: {
        if (concept_id < 0)
            throw StreamError(ErrorKind::invalid_argument, "rbf concept must be >= 0");
        RbfParams rp;
        rp.dimension = static_cast<int>(p.at("dimension"));
        rp.num_classes = static_cast<int>(p.at("classes"));
        rp.num_centroids = static_cast<int>(p.at("centroids"));
        rp.speed = p.at("speed");
        return std::make_unique<RbfGenerator>(derive_seed(seed, "concept" + std::to_string(concept_id)), rp);
    }
    }
    throw StreamError(ErrorKind::config, "unknown generator family");
}

FeatureSchema generator_schema(GeneratorFamily family, const std::map<std::string, double>& params) {
    const auto p = resolve(family, params);
    switch (family) {
    case GeneratorFamily::agrawal: return AgrawalGenerator::make_schema();
    case GeneratorFamily::stagger: return StaggerGenerator::make_schema();
    case GeneratorFamily::sea: return SeaGenerator::make_schema();
    case GeneratorFamily::led: return LedGenerator::make_schema();
    case GeneratorFamily::hyperplane: return HyperplaneGenerator::make_schema(static_cast<int>(p.at("dimension")));
    case GeneratorFamily::rbf:
        return RbfGenerator::make_schema(static_cast<int>(p.at("dimension")), static_cast<int>(p.at("classes")));
    }
    return {};
}

std::unique_ptr<StreamSource> make_stream(const GeneratorSpec& spec) {
    if (spec.concepts.empty())
        throw StreamError(ErrorKind::config, "generator spec needs at least one concept");
    if (spec.drift_positions.size() + 1 != spec.concepts.size())
        throw StreamError(ErrorKind::config, "need exactly one drift position between consecutive concepts");
    for (std::size_t i = 1; i < spec.drift_positions.size(); ++i)
        if (spec.drift_positions[i] <= spec.drift_positions[i - 1])
            throw StreamError(ErrorKind::config, "drift positions must be increasing");

    auto segment_seed = [&](std::size_t i) { return derive_seed(spec.seed, "segment" + std::to_string(i)); };
    std::unique_ptr<StreamSource> stream = make_generator(spec.family, spec.concepts[0], segment_seed(0), spec.params);
    for (std::size_t i = 1; i < spec.concepts.size(); ++i) {
        auto post = make_generator(spec.family, spec.concepts[i], segment_seed(i), spec.params);
        stream = std::make_unique<ConceptDriftStream>(std::move(stream), std::move(post),
                                                      spec.drift_positions[i - 1], spec.drift_width,
                                                      derive_seed(spec.seed, "mix" + std::to_string(i)));
    }
    return stream;
}

}  // namespace streamlab
