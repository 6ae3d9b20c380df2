#include "streamlab/core.hpp"

#include <doctest.h>

using namespace streamlab;

namespace {

FeatureSchema three_features() {
    return FeatureSchema({FeatureSpec::numeric("a"), FeatureSpec::numeric("b"),
                          FeatureSpec::categorical_of("c", {"x", "y", "z"})},
                         "class", {"0", "1"});
}

Instance make(std::initializer_list<double> xs, std::optional<int> y) {
    Instance i;
    i.x = Eigen::VectorXd(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double v : xs)
        i.x[k++] = v;
    i.y = y;
    return i;
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const StreamError& e) {
        return e.kind();
    }
    FAIL("no StreamError thrown");
    return ErrorKind::io;
}

ConfusionMatrix hand_matrix() {
    ConfusionMatrix m(2);
    for (int i = 0; i < 40; ++i) m.update(0, 0);
    for (int i = 0; i < 10; ++i) m.update(0, 1);
    for (int i = 0; i < 5; ++i) m.update(1, 0);
    for (int i = 0; i < 45; ++i) m.update(1, 1);
    return m;
}

}  // namespace

TEST_CASE("validate_instance accepts a conforming instance unchanged") {
    const auto schema = three_features();
    const Instance inst = make({0.5, -2.0, 2.0}, 1);
    const Instance& out = validate_instance(inst, schema);
    CHECK(&out == &inst);
    CHECK(out.x == inst.x);
}

TEST_CASE("validate_instance errors") {
    const auto schema = three_features();
    CHECK(kind_of([&] { validate_instance(make({0.5, 1.0}, 0), schema); }) == ErrorKind::dimension_mismatch);
    CHECK(kind_of([&] { validate_instance(make({0.5, 1.0, 5.0}, 0), schema); }) ==
          ErrorKind::categorical_out_of_range);
    CHECK(kind_of([&] { validate_instance(make({0.5, 1.0, 1.0}, 2), schema); }) == ErrorKind::unknown_class);
}

TEST_CASE("confusion matrix counting") {
    ConfusionMatrix m(2);
    m.update(0, 0);
    CHECK(m(0, 0) == 1);
    m = confusion_update(ConfusionMatrix(2), 0, 1);
    CHECK(m(0, 1) == 1);
    CHECK(m.total() == 1);
    CHECK(hand_matrix().total() == 100);
    CHECK(kind_of([&] { m.update(2, 0); }) == ErrorKind::index_out_of_range);
}

TEST_CASE("accuracy") {
    ConfusionMatrix diag(3);
    diag.update(0, 0);
    diag.update(2, 2);
    CHECK(accuracy(diag) == 1.0);
    CHECK(accuracy(hand_matrix()) == doctest::Approx(0.85).epsilon(1e-15));
    ConfusionMatrix off(2);
    off.update(0, 1);
    off.update(1, 0);
    CHECK(accuracy(off) == 0.0);
    CHECK(kind_of([] { accuracy(ConfusionMatrix(2)); }) == ErrorKind::empty_matrix);
}

TEST_CASE("cohen kappa hand cases") {
    // p_o = 0.85, p_e = (50*45 + 50*55) / 100^2 = 0.5
    CHECK(std::abs(cohen_kappa(hand_matrix()) - 0.7) < 1e-12);

    ConfusionMatrix perfect(2);
    for (int i = 0; i < 10; ++i) {
        perfect.update(0, 0);
        perfect.update(1, 1);
    }
    CHECK(cohen_kappa(perfect) == doctest::Approx(1.0));

    ConfusionMatrix always0(2);
    for (int i = 0; i < 50; ++i) {
        always0.update(0, 0);
        always0.update(1, 0);
    }
    CHECK(std::abs(cohen_kappa(always0)) < 1e-12);

    ConfusionMatrix single(2);
    single.update(0, 0);
    CHECK(cohen_kappa(single) == 0.0);
    CHECK(kind_of([] { cohen_kappa(ConfusionMatrix(2)); }) == ErrorKind::empty_matrix);
}

TEST_CASE("one_hot expands categoricals") {
    const auto schema = three_features();
    const Eigen::VectorXd z = one_hot(make({1.5, 2.5, 1.0}, 0).x, schema);
    REQUIRE(z.size() == 5);
    CHECK(z[0] == 1.5);
    CHECK(z[1] == 2.5);
    CHECK(z[2] == 0.0);
    CHECK(z[3] == 1.0);
    CHECK(z[4] == 0.0);
}

TEST_CASE("schema well-formedness and statuses") {
    FeatureSchema dup({FeatureSpec::numeric("a"), FeatureSpec::numeric("a")}, "class", {"0", "1"});
    CHECK(kind_of([&] { dup.check_well_formed(); }) == ErrorKind::invalid_argument);
    FeatureSchema one_class({FeatureSpec::numeric("a")}, "class", {"0"});
    CHECK(kind_of([&] { one_class.check_well_formed(); }) == ErrorKind::invalid_argument);
    for (auto s : {PredictorStatus::stable, PredictorStatus::warning, PredictorStatus::drift})
        CHECK(parse_status(to_string(s)) == s);
}

TEST_CASE("derive_seed separates components and is stable") {
    CHECK(derive_seed(7, "generator") == derive_seed(7, "generator"));
    CHECK(derive_seed(7, "generator") != derive_seed(7, "learner0"));
    CHECK(derive_seed(7, "generator") != derive_seed(8, "generator"));
}
