#include "streamlab/generators.hpp"

#include <doctest.h>

#include <cmath>

using namespace streamlab;

namespace {

std::vector<Instance> take(StreamSource& src, std::size_t n) {
    std::vector<Instance> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(*src.next());
    return out;
}

bool same_sequence(const std::vector<Instance>& a, const std::vector<Instance>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].x != b[i].x || a[i].y != b[i].y || a[i].seq != b[i].seq)
            return false;
    return true;
}

}  // namespace

TEST_CASE("agrawal function 0 is the age band rule") {
    AgrawalRecord r;
    r.age = 35;
    r.salary = 30000;
    CHECK(agrawal_label(0, r) == 0);  // group A
    r.age = 45;
    CHECK(agrawal_label(0, r) == 1);
    r.age = 65;
    CHECK(agrawal_label(0, r) == 0);
    CHECK_THROWS_AS(AgrawalGenerator(10, 1), StreamError);
}

TEST_CASE("agrawal determinism and distinct functions") {
    AgrawalGenerator a(0, 42), b(0, 42), c(1, 42);
    CHECK(same_sequence(take(a, 100), take(b, 100)));
    AgrawalGenerator a2(0, 42);
    const auto la = take(a2, 1000);
    const auto lc = take(c, 1000);
    bool differ = false;
    for (std::size_t i = 0; i < la.size(); ++i)
        differ = differ || la[i].y != lc[i].y;
    CHECK(differ);
}

TEST_CASE("agrawal emitted labels follow the decoded record") {
    AgrawalGenerator g(4, 3);
    for (const auto& inst : take(g, 500)) {
        const auto r = AgrawalGenerator::decode(inst.x);
        CHECK(r.salary >= 20000);
        CHECK(r.salary <= 150000);
        CHECK(r.age >= 20);
        CHECK(r.age <= 80);
        CHECK(*inst.y == agrawal_label(4, r));
    }
}

TEST_CASE("stagger rules") {
    // size 0 small, color 0 red, shape 2 triangle
    CHECK(stagger_label(0, 0, 0, 2) == 1);
    CHECK(stagger_label(0, 2, 2, 1) == 0);
    CHECK(stagger_label(2, 1, 0, 0) == 1);
    CHECK(stagger_label(1, 0, 1, 2) == 1);
    CHECK_THROWS_AS(stagger_label(3, 0, 0, 0), StreamError);
}

TEST_CASE("sea rules and boundary") {
    CHECK(sea_label(0, 3.0, 4.0) == 1);
    CHECK(sea_label(0, 5.0, 4.0) == 0);
    CHECK(sea_label(2, 3.5, 3.5) == 1);
    CHECK(sea_label(3, 5.0, 4.5) == 1);
}

TEST_CASE("led segments") {
    for (int s : kLedSegments[8])
        CHECK(s == 1);
    int on = 0;
    for (int s : kLedSegments[1])
        on += s;
    CHECK(on == 2);

    LedGenerator g(5, 0.0);
    for (const auto& inst : take(g, 200))
        for (int i = 0; i < kLedRelevant; ++i)
            CHECK(inst.x[i] == kLedSegments[static_cast<std::size_t>(*inst.y)][static_cast<std::size_t>(i)]);
}

TEST_CASE("hyperplane rule") {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(10);
    w[0] = 1.0;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
    x[0] = 0.7;
    CHECK(hyperplane_label(w, x) == 1);
    x[0] = 0.3;
    CHECK(hyperplane_label(w, x) == 0);

    HyperplaneParams still;
    still.magnitude = 0.0;
    HyperplaneGenerator g(w, 9, still);
    for (const auto& inst : take(g, 300))
        CHECK(*inst.y == (inst.x[0] >= 0.5 ? 1 : 0));
    CHECK(g.weights() == w);
}

TEST_CASE("rbf with zero speed keeps its centroids") {
    RbfParams p;
    p.speed = 0.0;
    RbfGenerator g(11, p);
    const auto before = g.centroids();
    take(g, 10000);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(g.centroids()[i].center == before[i].center);
}

TEST_CASE("rbf degenerate spread sits on centers") {
    RbfParams p;
    p.speed = 0.0;
    p.dimension = 2;
    p.num_centroids = 2;
    RbfCentroid a{Eigen::Vector2d(0.2, 0.2), 0, 0.0, 1.0, Eigen::Vector2d(1, 0)};
    RbfCentroid b{Eigen::Vector2d(0.8, 0.8), 1, 0.0, 0.0, Eigen::Vector2d(1, 0)};
    RbfGenerator g({a, b}, 3, p);
    for (const auto& inst : take(g, 100)) {
        CHECK(inst.x == a.center);
        CHECK(*inst.y == 0);
    }
}

TEST_CASE("drift sigmoid") {
    CHECK(drift_mixing_probability(5000, 5000, 1) == doctest::Approx(0.5));
    CHECK(drift_mixing_probability(0, 5000, 1) < 1e-12);
    CHECK(drift_mixing_probability(10000, 5000, 1) > 1 - 1e-12);
    CHECK(drift_mixing_probability(100, 500, 1000) < drift_mixing_probability(101, 500, 1000));
    CHECK_THROWS_AS(drift_mixing_probability(0, 0, 0.5), StreamError);
}

TEST_CASE("abrupt drift stream switches concepts") {
    GeneratorSpec spec;
    spec.family = GeneratorFamily::stagger;
    spec.concepts = {0, 2};
    spec.drift_positions = {500};
    spec.seed = 4;
    auto s = make_stream(spec);
    for (const auto& inst : take(*s, 1000)) {
        if (inst.seq >= 490 && inst.seq <= 510)
            continue;  // sigmoid is not yet saturated right at the drift center
        const int concept_id = inst.seq < 500 ? 0 : 2;
        CHECK(*inst.y == stagger_label(concept_id, int(inst.x[0]), int(inst.x[1]), int(inst.x[2])));
    }
}

TEST_CASE("schemas match the documented families") {
    struct Row {
        GeneratorFamily f;
        std::size_t d, c;
    };
    for (auto [f, d, c] : {Row{GeneratorFamily::agrawal, 9, 2}, Row{GeneratorFamily::stagger, 3, 2},
                           Row{GeneratorFamily::sea, 3, 2}, Row{GeneratorFamily::led, 24, 10},
                           Row{GeneratorFamily::hyperplane, 10, 2}, Row{GeneratorFamily::rbf, 10, 2}}) {
        const auto schema = generator_schema(f);
        CHECK(schema.dimension() == d);
        CHECK(schema.num_classes() == c);
        auto g = make_generator(f, 0, 1);
        CHECK(g->schema() == schema);
        auto clone = g->clone();
        CHECK(same_sequence(take(*g, 50), take(*clone, 50)));
    }
    CHECK_THROWS_AS(make_generator(GeneratorFamily::sea, 0, 1, {{"bogus", 1.0}}), StreamError);
}
