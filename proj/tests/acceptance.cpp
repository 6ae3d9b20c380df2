// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero on any FAIL.

#include "streamlab/experiment.hpp"
#include "streamlab/learners.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace streamlab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

FeatureSchema numeric_schema(int d, int classes) {
    std::vector<FeatureSpec> f;
    for (int i = 0; i < d; ++i)
        f.push_back(FeatureSpec::numeric("x" + std::to_string(i)));
    std::vector<std::string> c;
    for (int i = 0; i < classes; ++i)
        c.push_back("c" + std::to_string(i));
    return FeatureSchema(f, "class", c);
}

// x[0] carries the sample's seq so learners can be scripted per sample.
std::vector<Instance> seq_stream(std::size_t n, int classes, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Instance> out;
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.x = Eigen::Vector2d(double(i), double(rng() % 1000) / 1000.0);
        inst.y = int(rng() % std::uint64_t(classes));
        inst.seq = i;
        out.push_back(inst);
    }
    return out;
}

/// Answers from a fixed pseudo-random script keyed by x[0].
class Scripted final : public Learner {
public:
    Scripted(FeatureSchema s, std::uint64_t salt) : Learner(std::move(s)), salt_(salt) { set_default_class(0); }
    std::string name() const override { return "scripted"; }

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd& x) const override { return answer(x); }

private:
    int answer(const Eigen::VectorXd& x) const {
        const auto h = derive_seed(salt_, std::to_string(static_cast<long long>(x[0])));
        return int(h % num_classes());
    }
    std::uint64_t salt_;
};

// 1. Metric oracle equivalence

struct Pairs {
    std::vector<int> truth, pred;
    std::vector<std::uint64_t> seqs;
};

double brute_accuracy(const Pairs& p, std::size_t upto) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < upto; ++i)
        hits += p.truth[i] == p.pred[i];
    return double(hits) / double(upto);
}

double brute_kappa(const Pairs& p, std::size_t upto, int classes) {
    std::vector<double> row(std::size_t(classes), 0.0), col(std::size_t(classes), 0.0);
    double agree = 0.0;
    for (std::size_t i = 0; i < upto; ++i) {
        row[std::size_t(p.truth[i])] += 1;
        col[std::size_t(p.pred[i])] += 1;
        agree += p.truth[i] == p.pred[i];
    }
    const double n = double(upto);
    double pe = 0.0;
    for (int c = 0; c < classes; ++c)
        pe += row[std::size_t(c)] * col[std::size_t(c)];
    pe /= n * n;
    const double po = agree / n;
    return pe == 1.0 ? 0.0 : (po - pe) / (1.0 - pe);
}

void check_trace_against_pairs(Verdict& v, const std::string& label, const MetricTrace& t, const Pairs& p,
                               int classes) {
    v.require(!t.records.empty(), label + " has records");
    for (const auto& r : t.records) {
        const auto it = std::find(p.seqs.begin(), p.seqs.end(), r.seq);
        if (it == p.seqs.end()) {
            v.require(false, label + " record seq is a scored sample");
            continue;
        }
        const std::size_t upto = std::size_t(it - p.seqs.begin()) + 1;
        v.require(std::abs(r.cum_accuracy - brute_accuracy(p, upto)) <= 1e-12, label + " cum_accuracy");
        v.require(std::abs(r.kappa - brute_kappa(p, upto, classes)) <= 1e-12, label + " kappa");
    }
    v.require(t.records.back().seq == p.seqs.back(), label + " final record at last scored sample");
}

Verdict criterion_metric_oracle() {
    Verdict v;
    ConfusionMatrix hand(2);
    for (int i = 0; i < 40; ++i) hand.update(0, 0);
    for (int i = 0; i < 10; ++i) hand.update(0, 1);
    for (int i = 0; i < 5; ++i) hand.update(1, 0);
    for (int i = 0; i < 45; ++i) hand.update(1, 1);
    v.require(std::abs(cohen_kappa(hand) - 0.7) <= 1e-12, "kappa hand case 0.7");
    v.require(std::abs(accuracy(hand) - 0.85) <= 1e-12, "accuracy hand case 0.85");

    std::size_t runs = 0;
    for (int classes : {2, 3, 5}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const auto schema = numeric_schema(2, classes);
            const std::size_t n = 200 + 400 * seed;  // <= 1000
            const auto data = seq_stream(n, classes, seed * 31 + std::uint64_t(classes));

            auto logged = [](Pairs& p) {
                return [&p](const Instance& i, int y) {
                    p.truth.push_back(*i.y);
                    p.pred.push_back(y);
                    p.seqs.push_back(i.seq);
                };
            };

            {
                Pairs p;
                Scripted l(schema, seed);
                VectorSource src(schema, data);
                EvalOptions o;
                o.report_every = 37;
                o.on_score = logged(p);
                const auto t = run_prequential(src, l, o);
                v.require(p.truth.size() == n, "prequential scores every sample");
                check_trace_against_pairs(v, "prequential", t, p, classes);
                ++runs;
            }
            {
                Pairs p;
                Scripted l(schema, seed + 100);
                VectorSource src(schema, data);
                EvalOptions o;
                o.on_score = logged(p);
                const auto t = run_holdout(src, l, 30, 100, o);
                check_trace_against_pairs(v, "holdout", t, p, classes);
                ++runs;
            }
            {
                Pairs p;
                Scripted l(schema, seed + 200);
                l.partial_fit(data.front());
                l.freeze();
                VectorSource src(schema, data);
                EvalOptions o;
                o.report_every = 50;
                o.on_score = logged(p);
                const auto t = evaluate_pretrained(src, l, o);
                check_trace_against_pairs(v, "pretrained", t, p, classes);
                ++runs;
            }
        }
    }
    v.detail << " runs=" << runs << " kappa_hand=" << cohen_kappa(hand);
    return v;
}

// 2. Drift detectors

Verdict criterion_detectors() {
    Verdict v;
    const int seeds = 10;

    auto step_detection = [](DriftDetector& d, std::mt19937_64& rng, double before, double after, long step,
                             long horizon) {
        std::bernoulli_distribution lo(before), hi(after);
        for (long i = 0; i < step; ++i)
            d.update(double(lo(rng)));
        for (long i = 0; i < horizon; ++i)
            if (d.update(double(hi(rng))) == PredictorStatus::drift)
                return i;
        return -1L;
    };

    int adwin_hits = 0;
    std::vector<long> adwin_delays;
    for (int s = 0; s < seeds; ++s) {
        Adwin a(AdwinParams{0.002, 5});
        std::mt19937_64 rng(derive_seed(1000 + std::uint64_t(s), "adwin-step"));
        const long delay = step_detection(a, rng, 0.2, 0.8, 2000, 300);
        adwin_delays.push_back(delay);
        adwin_hits += delay >= 0;
    }
    v.require(adwin_hits >= 9, "ADWIN detects 0.2->0.8 within 300 in >= 9/10 seeds");

    std::size_t false_alarms = 0;
    for (int s = 0; s < seeds; ++s) {
        Adwin a(AdwinParams{0.002, 5});
        std::mt19937_64 rng(derive_seed(2000 + std::uint64_t(s), "adwin-stationary"));
        std::bernoulli_distribution b(0.1);
        for (int i = 0; i < 100000; ++i)
            false_alarms += a.update(double(b(rng))) == PredictorStatus::drift;
    }
    v.require(false_alarms <= 3, "ADWIN <= 3 false alarms over 10 stationary runs");

    int ddm_hits = 0, ph_hits = 0;
    for (int s = 0; s < seeds; ++s) {
        Ddm d;
        std::mt19937_64 r1(derive_seed(3000 + std::uint64_t(s), "ddm"));
        ddm_hits += step_detection(d, r1, 0.1, 0.5, 1000, 500) >= 0;
        PageHinkley ph;
        std::mt19937_64 r2(derive_seed(4000 + std::uint64_t(s), "ph"));
        ph_hits += step_detection(ph, r2, 0.1, 0.5, 1000, 500) >= 0;
    }
    v.require(ddm_hits >= 9, "DDM detects 0.1->0.5 within 500 in >= 9/10 seeds");
    v.require(ph_hits >= 9, "Page-Hinkley detects 0.1->0.5 within 500 in >= 9/10 seeds");

    v.detail << " adwin_detected=" << adwin_hits << "/10 delays=";
    for (std::size_t i = 0; i < adwin_delays.size(); ++i)
        v.detail << (i ? "," : "") << adwin_delays[i];
    v.detail << " adwin_false_alarms=" << false_alarms << " ddm_detected=" << ddm_hits
             << "/10 ph_detected=" << ph_hits << "/10";
    return v;
}

// 3. Drift recovery ordering

Verdict criterion_recovery() {
    Verdict v;
    const std::string source =
        "seed = 7\nsource.family = stagger\nsource.concepts = 0,2\nsource.drift_positions = 10000\n"
        "source.n = 20000\nevaluator.window = 200\nevaluator.report_every = 100\n";
    const auto cart = execute_experiment(parse_config(
        "experiment = batch_pretrained\nlearner.algorithm = cart_batch\nprefix_size = 1000\n" + source));
    const auto hat = execute_experiment(
        parse_config("experiment = online\nlearner.algorithm = hoeffding_adaptive_tree\n" + source));

    const std::uint64_t drift = 10000, window = 200;
    double pre = 0, post = 0;
    std::size_t npre = 0, npost = 0;
    for (const auto& r : cart.trace.records) {
        if (r.seq < drift) {
            pre += r.window_accuracy;
            ++npre;
        } else if (r.seq >= drift + window) {
            post += r.window_accuracy;
            ++npost;
        }
    }
    pre /= double(npre);
    post /= double(npost);
    v.require(pre - post >= 0.2, "(a) frozen CART drops >= 0.2 after the switch");

    // first dip after the switch, then the first record back at >= 0.9
    std::optional<std::uint64_t> dip, regained;
    for (const auto& r : hat.trace.records) {
        if (r.seq < drift)
            continue;
        if (!dip && r.window_accuracy < 0.9)
            dip = r.seq;
        else if (dip && !regained && r.window_accuracy >= 0.9)
            regained = r.seq;
    }
    const bool recovered = !dip || (regained && *regained - drift <= 2000);
    v.require(recovered, "(b) HAT regains 0.9 within 2000 samples");

    const double cart_final = cart.trace.records.back().cum_accuracy;
    const double hat_final = hat.trace.records.back().cum_accuracy;
    v.require(hat_final > cart_final, "(c) final HAT > frozen CART");

    v.detail << " cart_pre=" << pre << " cart_post=" << post << " hat_dip_at="
             << (dip ? std::to_string(*dip) : "none") << " hat_regained_at="
             << (regained ? std::to_string(*regained) : "none") << " hat_final=" << hat_final
             << " cart_final=" << cart_final;
    return v;
}

// 4. CASH

Verdict criterion_cash() {
    Verdict v;
    auto gen = make_generator(GeneratorFamily::agrawal, 2, 99);
    std::vector<Instance> buffer;
    for (int i = 0; i < 1000; ++i)
        buffer.push_back(*gen->next());
    const FeatureSchema& schema = gen->schema();

    const ConfigSpace space{{"cart_batch", {{"max_depth", {"2", "6"}}}},
                            {"knn_batch", {{"k", {"1", "7"}}}},
                            {"naive_bayes", {}}};
    CashOptions opt;
    opt.folds = 5;
    opt.seed = 1234;
    const auto result = cash_search(buffer, schema, space, opt);
    v.require(result.leaderboard.size() == 5, "leaderboard covers all 5 configurations");
    v.require(!result.truncated, "no truncation");

    // independent k-fold: contiguous folds [i*n/k, (i+1)*n/k)
    const std::size_t n = buffer.size(), k = opt.folds;
    std::vector<double> hand;
    for (const auto& entry : result.leaderboard) {
        double sum = 0.0;
        for (std::size_t f = 0; f < k; ++f) {
            const std::size_t lo = f * n / k, hi = (f + 1) * n / k;
            std::vector<Instance> train;
            for (std::size_t i = 0; i < n; ++i)
                if (i < lo || i >= hi)
                    train.push_back(buffer[i]);
            auto model = make_learner(entry.config.algorithm, entry.config.params, schema,
                                      cash_learner_seed(opt.seed, entry.config));
            model = train_batch(std::move(model), train, 1);
            std::size_t miss = 0;
            for (std::size_t i = lo; i < hi; ++i)
                miss += model->predict(buffer[i].x) != *buffer[i].y;
            sum += double(miss) / double(hi - lo);
        }
        hand.push_back(sum / double(k));
    }
    for (std::size_t i = 0; i < hand.size() && i < result.leaderboard.size(); ++i)
        v.require(hand[i] == result.leaderboard[i].loss,
                  "leaderboard loss " + std::to_string(i) + " matches (" + std::to_string(result.leaderboard[i].loss) + ")");

    std::size_t argmin = 0;
    for (std::size_t i = 1; i < hand.size(); ++i)
        if (hand[i] < hand[argmin])
            argmin = i;
    v.require(result.best == result.leaderboard[argmin].config, "best is the leaderboard argmin");
    v.require(result.best_loss == hand[argmin], "best_loss is the minimum");
    v.require(result.model && result.model->frozen(), "winner retrained and frozen");

    v.detail << " losses=";
    for (std::size_t i = 0; i < hand.size(); ++i)
        v.detail << (i ? "," : "") << hand[i];
    v.detail << " best=" << result.best.label();
    return v;
}

// 5. Meta selection

/// Knows one concept's rule exactly.
class RuleLearner final : public Learner {
public:
    RuleLearner(FeatureSchema s, int feature) : Learner(std::move(s)), feature_(feature) { set_default_class(0); }
    std::string name() const override { return "rule" + std::to_string(feature_); }

protected:
    void learn_one(const Instance&) override {}
    int predict_trained(const Eigen::VectorXd& x) const override { return x[feature_] > 0.5 ? 1 : 0; }

private:
    int feature_;
};

/// Knows the concept schedule: picks the best member of the coming window.
class ScheduleSelector final : public WindowSelector {
public:
    void observe(const Eigen::VectorXd&, int) override {}
    int choose(const Eigen::VectorXd&, std::size_t window_index) override { return int((window_index + 1) % 2); }
};

Verdict criterion_meta() {
    Verdict v;
    const auto schema = numeric_schema(2, 2);
    const std::size_t period = 300, n = 30000;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<Instance> data;
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.x = Eigen::Vector2d(u(rng), u(rng));
        const int concept_id = int((i / period) % 2);  // concept c is rule x_c > 0.5
        inst.y = inst.x[concept_id] > 0.5 ? 1 : 0;
        inst.seq = i;
        data.push_back(inst);
    }

    auto roster = [&] {
        std::vector<LearnerPtr> r;
        r.push_back(std::make_unique<RuleLearner>(schema, 0));
        r.push_back(std::make_unique<RuleLearner>(schema, 1));
        return r;
    };

    // brute-force oracle: per-window hit counts of each member, run alone
    const std::size_t windows = n / period;
    std::vector<std::array<std::size_t, 2>> hits(windows, {0, 0});
    for (int j = 0; j < 2; ++j) {
        RuleLearner alone(schema, j);
        for (const auto& inst : data) {
            hits[inst.seq / period][std::size_t(j)] += alone.predict(inst.x) == *inst.y;
            alone.partial_fit(inst);
        }
    }
    auto oracle_best = [&](std::size_t w) { return hits[w][1] > hits[w][0] ? 1 : 0; };

    MetaParams lp;
    lp.mode = MetaMode::last_best;
    lp.window = period;
    MetaEnsemble last_best(schema, roster(), lp);
    last_best.set_default_class(0);
    MetaParams mp;
    mp.window = period;
    MetaEnsemble meta(schema, roster(), mp);
    meta.set_default_class(0);

    MetaEnsemble upper(schema, roster(), mp, std::make_unique<ScheduleSelector>());
    upper.set_default_class(0);

    EvalOptions o;
    VectorSource s1(schema, data), s2(schema, data), s3(schema, data);
    const auto tl = run_prequential(s1, last_best, o);
    const auto tm = run_prequential(s2, meta, o);
    const auto tu = run_prequential(s3, upper, o);

    // last_best's leader for window w+1 should be the oracle best of window w
    std::size_t agree = 0, judged = 0;
    const auto& rec = last_best.windows();
    for (std::size_t w = 1; w < rec.size(); ++w) {
        ++judged;
        agree += rec[w].active_during == oracle_best(w - 1);
    }
    const double share = judged ? double(agree) / double(judged) : 0.0;
    v.require(share >= 0.6, "last_best follows the window-oracle best in >= 60% of windows");

    const double acc_last = tl.records.back().cum_accuracy;
    const double acc_meta = tm.records.back().cum_accuracy;
    v.require(acc_meta >= acc_last - 0.02, "meta >= last_best - 0.02");
    const double acc_upper = tu.records.back().cum_accuracy;
    v.require(acc_upper >= acc_last, "next-window oracle selector >= last_best");

    v.detail << " windows=" << judged << " agreement=" << share << " last_best_acc=" << acc_last
             << " meta_acc=" << acc_meta
             << " oracle_selector_acc=" << acc_upper;
    return v;
}

// 6. Leakage

/// Logs every predict and fit by the seq stored in x[0].
class Probe final : public Learner {
public:
    explicit Probe(FeatureSchema s) : Learner(std::move(s)) { set_default_class(0); }
    std::string name() const override { return "probe"; }

    struct Event {
        bool fit;
        std::uint64_t seq;
    };
    mutable std::vector<Event> log;

protected:
    void learn_one(const Instance& i) override { log.push_back({true, i.seq}); }
    int predict_trained(const Eigen::VectorXd& x) const override {
        log.push_back({false, std::uint64_t(x[0])});
        return 0;
    }
};

Verdict criterion_leakage() {
    Verdict v;
    const auto schema = numeric_schema(2, 2);
    const auto data = seq_stream(3000, 2, 77);

    {
        Probe p(schema);
        std::set<std::uint64_t> scored;
        EvalOptions o;
        o.on_score = [&](const Instance& i, int) { scored.insert(i.seq); };
        VectorSource src(schema, data);
        run_holdout(src, p, 100, 500, o);
        std::set<std::uint64_t> trained;
        for (const auto& e : p.log)
            if (e.fit)
                trained.insert(e.seq);
        std::vector<std::uint64_t> both;
        std::set_intersection(scored.begin(), scored.end(), trained.begin(), trained.end(),
                              std::back_inserter(both));
        v.require(both.empty(), "holdout scored and trained sets are disjoint");
        v.require(scored.size() == 600 && trained.size() == 2400, "holdout covers 6 cycles");
        v.detail << " holdout_scored=" << scored.size() << " trained=" << trained.size()
                 << " overlap=" << both.size();
    }

    auto order_ok = [](const std::vector<Probe::Event>& log, std::size_t n) {
        // each seq is predicted before it is fit, and fit happens exactly once
        std::vector<int> state(n, 0);  // 0 unseen, 1 predicted, 2 fitted
        for (const auto& e : log) {
            auto& s = state[e.seq];
            if (e.fit) {
                if (s != 1)
                    return false;
                s = 2;
            } else if (s == 2) {
                return false;
            } else {
                s = 1;
            }
        }
        return std::all_of(state.begin(), state.end(), [](int s) { return s == 2; });
    };

    {
        Probe p(schema);
        EvalOptions o;
        // the hook fires once the sample is scored, so it counts as the test step
        o.on_score = [&](const Instance& i, int) { p.log.push_back({false, i.seq}); };
        VectorSource src(schema, data);
        run_prequential(src, p, o);
        const bool ok = order_ok(p.log, data.size());
        v.require(ok, "prequential predicts each sample before fitting it");
        v.detail << " prequential_events=" << p.log.size();
    }

    {
        // each meta member sees sample t scored before it is fit
        std::vector<LearnerPtr> roster;
        std::vector<Probe*> probes;
        for (int j = 0; j < 3; ++j) {
            auto pr = std::make_unique<Probe>(schema);
            probes.push_back(pr.get());
            roster.push_back(std::move(pr));
        }
        MetaParams mp;
        mp.mode = MetaMode::last_best;
        mp.window = 100;
        MetaEnsemble m(schema, std::move(roster), mp);
        m.set_default_class(0);
        VectorSource src(schema, data);
        run_prequential(src, m, {});
        bool ok = true;
        for (auto* pr : probes) {
            // before any training predict answers the default class without reaching the probe
            std::vector<Probe::Event> log = pr->log;
            log.insert(log.begin(), {false, 0});
            ok = ok && order_ok(log, data.size());
        }
        v.require(ok, "meta members are scored before being fit");
    }
    return v;
}

// 7. Determinism

Verdict criterion_determinism(const fs::path& scratch) {
    Verdict v;
    const std::string common = "seed = 21\nsource.family = sea\nsource.concepts = 0,2\nsource.drift_positions = 3000\n"
                               "source.n = 6000\n";
    struct Case {
        std::string name, text;
    };
    const std::vector<Case> cases{
        {"batch", "experiment = batch_pretrained\nlearner.algorithm = random_forest_batch\nprefix_size = 1000\n"},
        {"online", "experiment = online\nlearner.algorithm = leveraging_bagging\nevaluator.detector = adwin\n"},
        {"cash", "experiment = cash_pretrained\nprefix_size = 500\ncash.folds = 3\ncash.workers = 3\n"
                 "cash.algorithms = cart_batch,knn_batch\n"},
        {"meta", "experiment = meta_online\nmeta.window = 300\n"},
        {"holdout", "experiment = online\nlearner.algorithm = hoeffding_adaptive_tree\nevaluator.protocol = holdout\n"},
    };
    std::size_t identical = 0;
    for (const auto& c : cases) {
        for (const char* fmt : {"csv", "json"}) {
            std::string bytes[2];
            for (int rep = 0; rep < 2; ++rep) {
                ExperimentConfig cfg = parse_config(common + c.text, c.name);
                cfg.format = parse_trace_format(fmt);
                cfg.output_path = scratch / ("run" + std::to_string(rep)) / (c.name + "." + fmt);
                run_experiment(cfg);
                bytes[rep] = read_text(cfg.output_path);
            }
            const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
            identical += same;
            v.require(same, c.name + " " + fmt + " trace is byte-identical");
        }
    }
    v.detail << " identical=" << identical << "/" << cases.size() * 2;
    return v;
}

// 8. Generator conformance

Verdict criterion_generators() {
    Verdict v;
    struct Row {
        GeneratorFamily f;
        std::size_t d, c;
    };
    for (auto [f, d, c] : {Row{GeneratorFamily::agrawal, 9, 2}, Row{GeneratorFamily::stagger, 3, 2},
                           Row{GeneratorFamily::sea, 3, 2}, Row{GeneratorFamily::led, 24, 10},
                           Row{GeneratorFamily::hyperplane, 10, 2}, Row{GeneratorFamily::rbf, 10, 2}}) {
        auto g = make_generator(f, 0, 3);
        const auto inst = *g->next();
        const bool ok = g->schema().dimension() == d && g->schema().num_classes() == c &&
                        std::size_t(inst.x.size()) == d && *inst.y >= 0 && std::size_t(*inst.y) < c;
        v.require(ok, std::string(to_string(f)) + " schema");
    }
    const FeatureSchema agrawal = generator_schema(GeneratorFamily::agrawal);
    v.require(agrawal.num_categorical() == 3, "agrawal has 3 categorical features");

    const int n = 10000;
    std::size_t bad = 0;
    for (int concept_id = 0; concept_id < 4; ++concept_id) {
        SeaGenerator sea(concept_id, 10 + std::uint64_t(concept_id), 0.0);
        for (int i = 0; i < n; ++i) {
            const auto s = *sea.next();
            // independent rule: x1 + x2 <= theta
            const double theta[] = {8.0, 9.0, 7.0, 9.5};
            bad += *s.y != (s.x[0] + s.x[1] <= theta[concept_id] ? 1 : 0);
        }
    }
    for (int concept_id = 0; concept_id < 3; ++concept_id) {
        StaggerGenerator st(concept_id, 20 + std::uint64_t(concept_id));
        for (int i = 0; i < n; ++i) {
            const auto s = *st.next();
            const int size = int(s.x[0]), color = int(s.x[1]), shape = int(s.x[2]);
            const bool rule = concept_id == 0   ? (size == 0 && color == 0)
                              : concept_id == 1 ? (color == 1 || shape == 0)
                                                : (size == 1 || size == 2);
            bad += *s.y != int(rule);
        }
    }
    {
        HyperplaneGenerator hp(30);
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd w = hp.weights();
            const auto s = *hp.next();
            bad += *s.y != (w.dot(s.x) >= 0.5 * w.sum() ? 1 : 0);
        }
    }
    v.require(bad == 0, "SEA/STAGGER/Hyperplane labels match their rules on every sample");

    LedGenerator led(40, 0.10);
    std::size_t flips = 0, bits = 0;
    for (int i = 0; i < 100000; ++i) {
        const auto s = *led.next();
        for (int b = 0; b < kLedRelevant; ++b) {
            flips += int(s.x[b]) != kLedSegments[std::size_t(*s.y)][std::size_t(b)];
            ++bits;
        }
    }
    const double rate = double(flips) / double(bits);
    v.require(std::abs(rate - 0.10) <= 0.01, "LED flip rate within 0.01 of 0.10");
    v.detail << " rule_violations=" << bad << " led_flip_rate=" << rate;
    return v;
}

}  // namespace

int main() {
    const fs::path scratch = fs::temp_directory_path() / "streamlab_acceptance";
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"metric oracle equivalence", criterion_metric_oracle},
        {"drift detector delay and false alarms", criterion_detectors},
        {"drift recovery ordering", criterion_recovery},
        {"CASH k-fold correctness", criterion_cash},
        {"meta selection efficacy", criterion_meta},
        {"no-leakage audits", criterion_leakage},
        {"trace determinism", [&] { return criterion_determinism(scratch); }},
        {"generator conformance", criterion_generators},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail << " [exception: " << e.what() << "]";
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !v.pass;
        std::printf("%s %zu %s:%s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    v.detail.str().c_str(), secs);
        std::fflush(stdout);
    }
    fs::remove_all(scratch);
    return failures == 0 ? 0 : 1;
}
