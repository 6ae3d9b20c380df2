#include "streamlab/meta.hpp"

#include <doctest.h>

#include <cmath>

using namespace streamlab;

namespace {

FeatureSchema schema_binary() {
    return FeatureSchema({FeatureSpec::categorical_of("f", {"a", "b"}), FeatureSpec::numeric("n")}, "class",
                         {"0", "1"});
}

Instance sample(double f, double n, int y) {
    Instance i;
    i.x = Eigen::Vector2d(f, n);
    i.y = y;
    return i;
}

/// Always answers the same class.
class Constant final : public Learner {
public:
    Constant(FeatureSchema s, int c) : Learner(std::move(s)), c_(c) {}
    std::string name() const override { return "constant"; }

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd&) const override { return c_; }

private:
    int c_;
};

}  // namespace

TEST_CASE("entropy and mutual information") {
    std::vector<int> zeros(10, 0);
    CHECK(empirical_entropy(zeros) == 0.0);
    std::vector<int> half{0, 1, 0, 1};
    CHECK(empirical_entropy(half) == doctest::Approx(1.0));
    std::vector<int> y{0, 1, 1, 0, 1, 1, 0, 1};
    CHECK(empirical_mutual_information(y, y) == doctest::Approx(empirical_entropy(y)));
}

TEST_CASE("meta features") {
    CHECK(meta_feature_names().size() == kMetaFeatureCount);
    CHECK(kMetaFeatureCount == 19);

    std::vector<Instance> w;
    for (int i = 0; i < 300; ++i)
        w.push_back(sample(i % 2, 0.1 * i, i % 2));
    const auto mf = extract_meta_features(w, schema_binary());
    REQUIRE(mf.values.size() == static_cast<Eigen::Index>(kMetaFeatureCount));
    CHECK(mf.categories.size() == kMetaFeatureCount);
    CHECK(mf.values.allFinite());

    const auto& names = meta_feature_names();
    auto at = [&](const std::string& n) {
        const auto it = std::find(names.begin(), names.end(), n);
        REQUIRE(it != names.end());
        return mf.values[it - names.begin()];
    };
    CHECK(at("class_entropy") == doctest::Approx(1.0));
    CHECK(at("n_classes") == 2.0);
    CHECK(at("n_features") == 2.0);
    CHECK(at("frac_categorical") == doctest::Approx(0.5));

    std::vector<Instance> single;
    for (int i = 0; i < 300; ++i)
        single.push_back(sample(i % 2, 1.0, 0));
    const auto deg = extract_meta_features(single, schema_binary());
    CHECK(deg.values.allFinite());
    CHECK(deg.values[std::find(names.begin(), names.end(), "class_entropy") - names.begin()] == 0.0);
}

TEST_CASE("class entropy is invariant under relabeling") {
    std::vector<Instance> a, b;
    for (int i = 0; i < 300; ++i) {
        const int y = (i % 3 == 0) ? 1 : 0;
        a.push_back(sample(i % 2, 0.5 * i, y));
        b.push_back(sample(i % 2, 0.5 * i, 1 - y));
    }
    const auto& names = meta_feature_names();
    const auto k = std::find(names.begin(), names.end(), "class_entropy") - names.begin();
    CHECK(extract_meta_features(a, schema_binary()).values[k] ==
          doctest::Approx(extract_meta_features(b, schema_binary()).values[k]));
}

TEST_CASE("window best learner") {
    std::vector<std::uint64_t> h{250, 280, 240, 100};
    CHECK(window_best_learner(h) == 1);
    std::vector<std::uint64_t> eq{5, 5, 5};
    CHECK(window_best_learner(eq, 2) == 2);
    CHECK(window_best_learner(eq) == 0);
    std::vector<std::uint64_t> one{3};
    CHECK(window_best_learner(one) == 0);
    std::vector<std::uint64_t> none;
    CHECK_THROWS_AS(window_best_learner(none), StreamError);
}

TEST_CASE("performance weights") {
    std::vector<std::vector<bool>> same(3, std::vector<bool>(100, true));
    const auto w = performance_weights(same, 0.9);
    CHECK(w[0] == doctest::Approx(w[1]));
    CHECK(w[1] == doctest::Approx(w[2]));

    std::vector<std::vector<bool>> ab{std::vector<bool>(10000, true), std::vector<bool>(10000, false)};
    const auto r = performance_weights(ab, 0.999);
    CHECK(r[0] / r[1] > 100);

    PerformanceWeights frozen(2, 1.0 - 1e-15);
    bool c[] = {true, false};
    frozen.update(c);
    CHECK(frozen.weights()[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(performance_weights(ab, 1.0), StreamError);
    CHECK_THROWS_AS(performance_weights(ab, 0.0), StreamError);
}

TEST_CASE("last_best switches at window ends with a one-window lag") {
    const auto schema = schema_binary();
    std::vector<LearnerPtr> roster;
    roster.push_back(std::make_unique<Constant>(schema, 0));
    roster.push_back(std::make_unique<Constant>(schema, 1));
    MetaParams p;
    p.mode = MetaMode::last_best;
    p.window = 10;
    MetaEnsemble m(schema, std::move(roster), p);
    CHECK(m.name() == "last_best_classifier");
    // windows: labels all 0, all 1, all 1, all 0
    const int labels[] = {0, 1, 1, 0};
    std::vector<int> active_during;
    for (int label : labels)
        for (int i = 0; i < 10; ++i) {
            if (i == 0)
                active_during.push_back(m.active_index());
            m.partial_fit(sample(0, 0, label));
        }
    CHECK(active_during == std::vector<int>{0, 0, 1, 1});
    CHECK(m.active_index() == 0);
    REQUIRE(m.windows().size() == 4);
    CHECK(m.windows()[1].best == 1);
}

TEST_CASE("weighted vote and single member rosters report no active member") {
    const auto schema = schema_binary();
    std::vector<LearnerPtr> one;
    one.push_back(std::make_unique<Constant>(schema, 1));
    MetaEnsemble solo(schema, std::move(one), MetaParams{});
    CHECK_FALSE(solo.active_member());

    std::vector<LearnerPtr> two;
    two.push_back(std::make_unique<Constant>(schema, 0));
    two.push_back(std::make_unique<Constant>(schema, 1));
    MetaParams p;
    p.mode = MetaMode::weighted_vote;
    p.alpha = 0.9;
    MetaEnsemble wv(schema, std::move(two), p);
    CHECK_FALSE(wv.active_member());
    for (int i = 0; i < 50; ++i)
        wv.partial_fit(sample(0, 0, 1));
    CHECK(wv.predict(Eigen::Vector2d(0, 0)) == 1);
    CHECK(wv.weights()[1] > wv.weights()[0]);
}

TEST_CASE("meta modes parse") {
    for (auto m : {MetaMode::meta, MetaMode::last_best, MetaMode::weighted_vote})
        CHECK(parse_meta_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_meta_mode("oracle"), StreamError);
}
