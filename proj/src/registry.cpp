#include "streamlab/hoeffding_tree.hpp"
#include "streamlab/learners.hpp"

#include <algorithm>

namespace streamlab {

namespace {

const std::vector<ParamInfo> kTreeParams = {
    {"grace_period", "200", "samples between split attempts at a leaf"},
    {"delta", "1e-7", "split confidence"},
    {"tau", "0.05", "tie-breaking threshold"},
    {"numeric_bins", "10", "candidate thresholds per numeric feature"},
    {"leaf_prediction", "nba", "mc, nb or nba"},
};

const std::vector<ParamInfo> kBaggingParams = {
    {"members", "10", "ensemble size"},
    {"base", "hoeffding_tree", "member algorithm; base.<name> keys configure it"},
};

std::vector<ParamInfo> concat(std::vector<ParamInfo> a, const std::vector<ParamInfo>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::vector<LearnerInfo> build_registry() {
    using K = LearnerKind;
    return {
        {"majority_class", K::adaptive, "predicts the most frequent class seen so far", {}},
        {"naive_bayes", K::adaptive, "incremental naive Bayes", {}},
        {"hoeffding_tree", K::adaptive, "Hoeffding tree (VFDT)", kTreeParams},
        {"hoeffding_adaptive_tree", K::adaptive, "Hoeffding tree with ADWIN-monitored alternate subtrees",
         kTreeParams},
        {"knn_window", K::adaptive, "k nearest neighbours over a sliding window",
         {{"window", "1000", "stored samples"}, {"k", "5", "neighbours"}}},
        {"linear_sgd", K::adaptive, "one-vs-rest linear model trained by SGD",
         {{"loss", "hinge", "hinge, log or perceptron"},
          {"learning_rate", "0.01", "SGD step size"},
          {"l2", "0", "weight decay"},
          {"standardize", "true", "z-score numeric features with running statistics"}}},
        {"perceptron", K::adaptive, "one-vs-rest perceptron",
         {{"learning_rate", "0.01", "step size"},
          {"standardize", "true", "z-score numeric features with running statistics"}}},
        {"oza_bagging", K::adaptive, "online bagging with Poisson(1) replication",
         concat({{"lambda", "1", "Poisson rate"}}, kBaggingParams)},
        {"oza_bagging_adwin", K::adaptive, "online bagging with per-member ADWIN resets",
         concat({{"lambda", "1", "Poisson rate"}, {"delta", "0.002", "ADWIN confidence"}}, kBaggingParams)},
        {"leveraging_bagging", K::adaptive, "online bagging with Poisson(6) replication and ADWIN resets",
         concat({{"lambda", "6", "Poisson rate"}, {"delta", "0.002", "ADWIN confidence"}}, kBaggingParams)},
        {"cart_batch", K::batch, "Gini decision tree",
         {{"max_depth", "20", "depth limit"},
          {"min_samples_split", "2", "smallest node that may split"},
          {"min_samples_leaf", "1", "smallest allowed child"},
          {"max_features", "0", "features tried per split, 0 for all"}}},
        {"random_forest_batch", K::batch, "bagged Gini trees with feature subsampling",
         {{"trees", "10", "number of trees"},
          {"bootstrap", "true", "resample the buffer per tree"},
          {"max_features", "0", "features tried per split, 0 for floor(sqrt(d))"},
          {"max_depth", "20", "depth limit"}}},
        {"knn_batch", K::batch, "k nearest neighbours over the training buffer", {{"k", "5", "neighbours"}}},
        {"linear_svm_batch", K::batch, "hinge-loss linear SVM trained by SGD passes",
         {{"learning_rate", "0.01", "SGD step size"},
          {"l2", "1e-4", "weight decay"},
          {"epochs", "10", "passes over the buffer"},
          {"standardize", "true", "z-score numeric features"}}},
    };
}

LeafPrediction parse_leaf_prediction(const std::string& s) {
    if (s == "mc") return LeafPrediction::majority;
    if (s == "nb") return LeafPrediction::naive_bayes;
    if (s == "nba") return LeafPrediction::adaptive;
    throw StreamError(ErrorKind::config, "unknown leaf_prediction '" + s + "'");
}

long positive(const Params& p, const std::string& key, long fallback) {
    const long v = p.get_int(key, fallback);
    if (v < 1)
        throw StreamError(ErrorKind::config, "parameter '" + key + "' must be >= 1");
    return v;
}

long non_negative(const Params& p, const std::string& key, long fallback) {
    const long v = p.get_int(key, fallback);
    if (v < 0)
        throw StreamError(ErrorKind::config, "parameter '" + key + "' must be >= 0");
    return v;
}

HoeffdingTreeParams tree_params(const Params& p) {
    HoeffdingTreeParams tp;
    tp.grace_period = static_cast<int>(positive(p, "grace_period", 200));
    tp.criteria.delta = p.get_double("delta", 1e-7);
    tp.criteria.tau = p.get_double("tau", 0.05);
    tp.criteria.numeric_bins = static_cast<int>(positive(p, "numeric_bins", 10));
    tp.leaf_prediction = parse_leaf_prediction(p.get_string("leaf_prediction", "nba"));
    if (!(tp.criteria.delta > 0.0 && tp.criteria.delta < 1.0))
        throw StreamError(ErrorKind::config, "parameter 'delta' must lie in (0,1)");
    return tp;
}

LearnerPtr build(const std::string& algorithm, const Params& p, const FeatureSchema& schema, std::uint64_t seed) {
    if (algorithm == "majority_class")
        return std::make_unique<MajorityClass>(schema);
    if (algorithm == "naive_bayes")
        return std::make_unique<NaiveBayes>(schema);
    if (algorithm == "hoeffding_tree" || algorithm == "hoeffding_adaptive_tree")
        return std::make_unique<HoeffdingTree>(schema, tree_params(p), algorithm == "hoeffding_adaptive_tree");
    if (algorithm == "knn_window")
        return std::make_unique<KnnWindow>(schema, static_cast<std::size_t>(positive(p, "window", 1000)),
                                           static_cast<std::size_t>(positive(p, "k", 5)));
    if (algorithm == "knn_batch")
        return std::make_unique<KnnBatch>(schema, static_cast<std::size_t>(positive(p, "k", 5)));
    if (algorithm == "linear_sgd" || algorithm == "perceptron" || algorithm == "linear_svm_batch") {
        LinearParams lp;
        lp.loss = algorithm == "perceptron" ? LinearLoss::perceptron
                                            : parse_linear_loss(p.get_string("loss", "hinge"));
        lp.learning_rate = p.get_double("learning_rate", 0.01);
        lp.l2 = p.get_double("l2", algorithm == "linear_svm_batch" ? 1e-4 : 0.0);
        lp.standardize = p.get_bool("standardize", true);
        if (!(lp.learning_rate > 0.0) || lp.l2 < 0.0)
            throw StreamError(ErrorKind::config, "linear model needs learning_rate > 0 and l2 >= 0");
        if (algorithm == "linear_svm_batch")
            return std::make_unique<LinearSvmBatch>(schema, lp, seed,
                                                    static_cast<std::size_t>(positive(p, "epochs", 10)));
        return std::make_unique<LinearClassifier>(schema, lp);
    }
    if (algorithm == "cart_batch") {
        CartParams cp;
        cp.max_depth = static_cast<int>(non_negative(p, "max_depth", 20));
        cp.min_samples_split = static_cast<int>(p.get_int("min_samples_split", 2));
        cp.min_samples_leaf = static_cast<int>(positive(p, "min_samples_leaf", 1));
        cp.max_features = static_cast<int>(non_negative(p, "max_features", 0));
        if (cp.min_samples_split < 2)
            throw StreamError(ErrorKind::config, "parameter 'min_samples_split' must be >= 2");
        return std::make_unique<CartTree>(schema, cp, seed);
    }
    if (algorithm == "random_forest_batch") {
        ForestParams fp;
        fp.trees = static_cast<int>(positive(p, "trees", 10));
        fp.bootstrap = p.get_bool("bootstrap", true);
        fp.max_features = static_cast<int>(non_negative(p, "max_features", 0));
        fp.max_depth = static_cast<int>(non_negative(p, "max_depth", 20));
        return std::make_unique<RandomForest>(schema, fp, seed);
    }
    if (algorithm == "oza_bagging" || algorithm == "oza_bagging_adwin" || algorithm == "leveraging_bagging") {
        BaggingParams bp;
        bp.members = static_cast<std::size_t>(positive(p, "members", 10));
        bp.lambda = p.get_double("lambda", algorithm == "leveraging_bagging" ? 6.0 : 1.0);
        bp.adwin = algorithm != "oza_bagging";
        bp.delta = p.get_double("delta", 0.002);
        if (!(bp.lambda > 0.0))
            throw StreamError(ErrorKind::config, "parameter 'lambda' must be positive");
        const std::string base = p.get_string("base", "hoeffding_tree");
        if (learner_info(base).kind == LearnerKind::batch)
            throw StreamError(ErrorKind::config, "bagging base '" + base + "' must be an adaptive learner");
        Params base_params;
        for (const auto& [k, v] : p.values())
            if (k.rfind("base.", 0) == 0)
                base_params.set(k.substr(5), v);
        auto counter = std::make_shared<std::uint64_t>(0);
        LearnerFactory factory = [base, base_params, schema, seed, counter] {
            return make_learner(base, base_params, schema,
                                derive_seed(seed, "member" + std::to_string((*counter)++)));
        };
        // Validate the member configuration up front.
        make_learner(base, base_params, schema, seed);
        return std::make_unique<OnlineBagging>(schema, std::move(factory), bp, derive_seed(seed, "poisson"),
                                               algorithm);
    }
    throw StreamError(ErrorKind::config, "unknown algorithm '" + algorithm + "'");
}

}  // namespace

const std::vector<LearnerInfo>& learner_registry() {
    static const std::vector<LearnerInfo> registry = build_registry();
    return registry;
}

const LearnerInfo& learner_info(const std::string& algorithm) {
    for (const auto& info : learner_registry())
        if (info.name == algorithm)
            return info;
    throw StreamError(ErrorKind::config, "unknown algorithm '" + algorithm + "'");
}

LearnerPtr make_learner(const std::string& algorithm, const Params& params, const FeatureSchema& schema,
                        std::uint64_t seed) {
    const LearnerInfo& info = learner_info(algorithm);
    for (const auto& [key, value] : params.values()) {
        if (key == "default_class")
            continue;
        const std::string name = key.rfind("base.", 0) == 0 ? std::string("base") : key;
        const bool known = std::any_of(info.params.begin(), info.params.end(),
                                       [&](const ParamInfo& p) { return p.name == name; });
        if (!known)
            throw StreamError(ErrorKind::config, "algorithm '" + algorithm + "' has no parameter '" + key + "'");
    }
    schema.check_well_formed();
    const long default_class = params.get_int("default_class", 0);
    if (default_class < 0 || static_cast<std::size_t>(default_class) >= schema.num_classes())
        throw StreamError(ErrorKind::config, "default_class is not a valid class index");
    LearnerPtr learner = build(algorithm, params, schema, seed);
    learner->set_default_class(static_cast<int>(default_class));
    return learner;
}

}  // namespace streamlab
