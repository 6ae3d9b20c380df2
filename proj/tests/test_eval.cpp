#include "streamlab/eval.hpp"
#include "streamlab/io.hpp"
#include "streamlab/learners.hpp"

#include <doctest.h>

using namespace streamlab;

namespace {

FeatureSchema schema1() { return FeatureSchema({FeatureSpec::numeric("x")}, "class", {"0", "1"}); }

std::vector<Instance> alternating(std::size_t n) {
    std::vector<Instance> v;
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.x = Eigen::VectorXd::Constant(1, double(i % 2));
        inst.y = int(i % 2);
        inst.seq = i;
        v.push_back(inst);
    }
    return v;
}

/// Predicts the label stored in x[0].
class Oracle final : public Learner {
public:
    explicit Oracle(FeatureSchema s) : Learner(std::move(s)) { set_default_class(0); }
    std::string name() const override { return "oracle"; }
    std::vector<std::uint64_t> trained;

protected:
    void learn_one(const Instance& i) override { trained.push_back(i.seq); }
    int predict_trained(const Eigen::VectorXd& x) const override { return int(x[0]); }
};

}  // namespace

TEST_CASE("prequential oracle scores 1.0 everywhere") {
    VectorSource src(schema1(), alternating(250));
    Oracle o(schema1());
    const auto t = run_prequential(src, o);
    REQUIRE(t.records.size() == 3);
    for (const auto& r : t.records)
        CHECK(r.cum_accuracy == 1.0);
    CHECK(t.records.back().seq == 249);
    CHECK(o.trained.size() == 250);
}

TEST_CASE("prequential majority on alternating labels") {
    // Sample 0: default 0 (hit). Afterwards the count leader alternates so
    // every later prediction tie-breaks or lags: hits exactly on even seq.
    VectorSource src(schema1(), alternating(1000));
    MajorityClass m(schema1());
    m.set_default_class(0);
    const auto t = run_prequential(src, m);
    CHECK(t.records.back().cum_accuracy == doctest::Approx(0.5));
}

TEST_CASE("prequential record counts") {
    VectorSource src(schema1(), alternating(1000));
    Oracle o(schema1());
    EvalOptions opt;
    opt.report_every = 10;
    opt.max_samples = 100;
    CHECK(run_prequential(src, o, opt).records.size() == 10);

    VectorSource empty(schema1(), {});
    CHECK_THROWS_AS(run_prequential(empty, o), StreamError);
}

TEST_CASE("holdout cycle arithmetic and hygiene") {
    VectorSource src(schema1(), alternating(1000));
    Oracle o(schema1());
    std::vector<std::uint64_t> scored;
    EvalOptions opt;
    opt.on_score = [&](const Instance& i, int) { scored.push_back(i.seq); };
    const auto t = run_holdout(src, o, 20, 100, opt);
    CHECK(t.records.size() == 10);
    CHECK(o.trained.size() == 800);
    CHECK(scored.size() == 200);
    for (const auto& r : t.records)
        CHECK(r.window_accuracy == 1.0);
    for (auto s : scored)
        CHECK(std::find(o.trained.begin(), o.trained.end(), s) == o.trained.end());

    VectorSource shorty(schema1(), alternating(50));
    Oracle o2(schema1());
    CHECK_THROWS_AS(run_holdout(shorty, o2, 20, 100), StreamError);
    CHECK_THROWS_AS(run_holdout(shorty, o2, 100, 100), StreamError);
}

TEST_CASE("holdout partial cycle is flagged") {
    // third cycle: 80 trained, 10 of 20 holdout samples scored
    VectorSource src(schema1(), alternating(290));
    Oracle o(schema1());
    const auto t = run_holdout(src, o, 20, 100);
    REQUIRE(t.records.size() == 3);
    REQUIRE(t.records.back().drift_events.size() == 1);
    CHECK(t.records.back().drift_events[0].detail == "incomplete");
}

TEST_CASE("evaluate_pretrained needs a frozen model") {
    VectorSource src(schema1(), alternating(300));
    Oracle o(schema1());
    CHECK_THROWS_AS(evaluate_pretrained(src, o), StreamError);
    o.partial_fit(alternating(1)[0]);
    o.trained.clear();
    o.freeze();
    const auto t = evaluate_pretrained(src, o);
    CHECK(t.records.back().cum_accuracy == 1.0);
    CHECK(o.trained.empty());
    VectorSource empty(schema1(), {});
    CHECK_THROWS_AS(evaluate_pretrained(empty, o), StreamError);
}

TEST_CASE("frozen majority decays toward the new prior") {
    MajorityClass m(schema1());
    for (int i = 0; i < 10; ++i) {
        Instance inst;
        inst.x = Eigen::VectorXd::Zero(1);
        inst.y = 0;
        m.partial_fit(inst);
    }
    m.freeze();
    // 200 samples of class 0 then 800 of class 1: expected 200/1000
    std::vector<Instance> v;
    for (int i = 0; i < 1000; ++i) {
        Instance inst;
        inst.x = Eigen::VectorXd::Zero(1);
        inst.y = i < 200 ? 0 : 1;
        inst.seq = std::uint64_t(i);
        v.push_back(inst);
    }
    VectorSource src(schema1(), v);
    const auto t = evaluate_pretrained(src, m);
    CHECK(t.records[1].cum_accuracy == doctest::Approx(1.0));
    CHECK(t.records.back().cum_accuracy == doctest::Approx(0.2));
}

TEST_CASE("full-length window reproduces cum accuracy") {
    std::vector<Instance> v = alternating(500);
    for (std::size_t i = 0; i < v.size(); i += 3)
        v[i].y = 1 - *v[i].y;
    VectorSource src(schema1(), v);
    Oracle o(schema1());
    EvalOptions opt;
    opt.window = 500;
    const auto t = run_prequential(src, o, opt);
    CHECK(t.records.back().window_accuracy == doctest::Approx(t.records.back().cum_accuracy));
}

TEST_CASE("monitor events land in the trace") {
    std::vector<Instance> v;
    for (int i = 0; i < 4000; ++i) {
        Instance inst;
        inst.x = Eigen::VectorXd::Constant(1, 0.0);
        inst.y = i < 2000 ? 0 : 1;
        inst.seq = std::uint64_t(i);
        v.push_back(inst);
    }
    VectorSource src(schema1(), v);
    Oracle o(schema1());
    EvalOptions opt;
    opt.monitor = DetectorKind::adwin;
    const auto t = run_prequential(src, o, opt);
    CHECK(t.drift_count() >= 1);
}
