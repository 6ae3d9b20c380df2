#include "streamlab/experiment.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

namespace streamlab {

namespace fs = std::filesystem;

std::string_view to_string(ExperimentType type) {
    switch (type) {
    case ExperimentType::batch_pretrained: return "batch_pretrained";
    case ExperimentType::online: return "online";
    case ExperimentType::cash_pretrained: return "cash_pretrained";
    case ExperimentType::meta_online: return "meta_online";
    }
    return "online";
}

ExperimentType parse_experiment_type(std::string_view text) {
    for (auto t : {ExperimentType::batch_pretrained, ExperimentType::online, ExperimentType::cash_pretrained,
                   ExperimentType::meta_online})
        if (to_string(t) == text)
            return t;
    throw StreamError(ErrorKind::config, "unknown experiment type '" + std::string(text) + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (trim(s).empty())
        return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

template <typename T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
    std::string out;
    for (const auto& i : items) {
        if (!out.empty())
            out += ',';
        out += fmt(i);
    }
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw StreamError(ErrorKind::config, key + " expects a nonnegative integer, got '" + v + "'");
    return out;
}

std::size_t to_size(const std::string& key, const std::string& v) { return static_cast<std::size_t>(to_u64(key, v)); }

double to_real(const std::string& key, const std::string& v) {
    double out = 0.0;
    if (!parse_double(v, out))
        throw StreamError(ErrorKind::config, key + " expects a number, got '" + v + "'");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw StreamError(ErrorKind::config, key + " expects true or false, got '" + v + "'");
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

struct SpaceBuilder {
    std::vector<std::string> order;
    std::map<std::string, std::vector<std::pair<std::string, std::vector<std::string>>>> grids;

    void touch(const std::string& alg) {
        if (std::find(order.begin(), order.end(), alg) == order.end())
            order.push_back(alg);
    }
};

void apply(ExperimentConfig& c, const std::string& key, const std::string& value, bool& n_set, SpaceBuilder& space) {
    if (key == "experiment") c.type = parse_experiment_type(value);
    else if (key == "seed") c.seed = to_u64(key, value);
    else if (key == "source.kind") {
        if (value != "generator" && value != "csv" && value != "topic")
            throw StreamError(ErrorKind::config, "source.kind must be generator, csv or topic");
        c.source.kind = value;
    } else if (key == "source.family") c.source.generator.family = parse_generator_family(value);
    else if (key == "source.concepts") {
        c.source.generator.concepts.clear();
        for (const auto& s : split_list(value))
            c.source.generator.concepts.push_back(static_cast<int>(to_u64(key, s)));
    } else if (key == "source.drift_positions") {
        c.source.generator.drift_positions.clear();
        for (const auto& s : split_list(value))
            c.source.generator.drift_positions.push_back(to_real(key, s));
    } else if (key == "source.drift_width") c.source.generator.drift_width = to_real(key, value);
    else if (key == "source.n") {
        c.source.n = to_size(key, value);
        n_set = true;
    } else if (starts_with(key, "source.params.")) c.source.generator.params[key.substr(14)] = to_real(key, value);
    else if (key == "source.path") c.source.path = value;
    else if (key == "source.label") c.source.label = value;
    else if (key == "learner.algorithm") c.algorithm = value;
    else if (starts_with(key, "learner.params.")) c.learner_params.set(key.substr(15), value);
    else if (key == "learner.epochs") c.epochs = to_size(key, value);
    else if (key == "meta.roster") c.roster = split_list(value);
    else if (key == "meta.mode") c.meta.mode = parse_meta_mode(value);
    else if (key == "meta.window") c.meta.window = to_size(key, value);
    else if (key == "meta.alpha") c.meta.alpha = to_real(key, value);
    else if (key == "evaluator.protocol") {
        if (value != "prequential" && value != "holdout")
            throw StreamError(ErrorKind::config, "evaluator.protocol must be prequential or holdout");
        c.protocol = value;
    } else if (key == "evaluator.report_every") c.report_every = to_size(key, value);
    else if (key == "evaluator.window") c.window = to_size(key, value);
    else if (key == "evaluator.holdout_size") c.holdout_size = to_size(key, value);
    else if (key == "evaluator.period") c.period = to_size(key, value);
    else if (key == "evaluator.detector") {
        if (value == "none")
            c.detector.reset();
        else
            c.detector = parse_detector_kind(value);
    } else if (key == "prefix_size") c.prefix_size = to_size(key, value);
    else if (key == "cash.folds") c.cash.folds = to_size(key, value);
    else if (key == "cash.budget") {
        if (value == "none")
            c.cash.budget.reset();
        else
            c.cash.budget = to_size(key, value);
    } else if (key == "cash.shuffle") c.cash.shuffle = to_bool(key, value);
    else if (key == "cash.epochs") c.cash.epochs = to_size(key, value);
    else if (key == "cash.workers") c.cash.workers = std::max<std::size_t>(1, to_size(key, value));
    else if (key == "cash.algorithms") {
        for (const auto& a : split_list(value))
            space.touch(a);
    } else if (starts_with(key, "cash.space.")) {
        const std::string rest = key.substr(11);
        const auto dot = rest.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == rest.size())
            throw StreamError(ErrorKind::config, "expected cash.space.<algorithm>.<param>");
        const std::string alg = rest.substr(0, dot);
        space.touch(alg);
        space.grids[alg].emplace_back(rest.substr(dot + 1), split_list(value));
    } else if (key == "output.path") c.output_path = value;
    else if (key == "output.format") c.format = parse_trace_format(value);
    else throw StreamError(ErrorKind::config, "unknown key '" + key + "'");
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& m) { throw StreamError(ErrorKind::config, m); };
    const bool pretrained = c.type == ExperimentType::batch_pretrained || c.type == ExperimentType::cash_pretrained;
    if (pretrained && c.prefix_size < 1)
        fail(std::string(to_string(c.type)) + " needs prefix_size >= 1");
    if (c.source.kind == "generator") {
        if (c.source.n < 1)
            fail("source.n must be >= 1");
        generator_schema(c.source.generator.family, c.source.generator.params);
        if (c.source.generator.drift_positions.size() + 1 != c.source.generator.concepts.size())
            fail("source.drift_positions needs one entry between consecutive concepts");
        if (c.source.generator.drift_width < 1.0)
            fail("source.drift_width must be >= 1");
    } else if (c.source.path.empty()) {
        fail("source.path is required for source.kind = " + c.source.kind);
    }
    if (c.report_every < 1 || c.window < 1)
        fail("evaluator.report_every and evaluator.window must be >= 1");
    if (c.protocol == "holdout") {
        if (c.type != ExperimentType::online)
            fail("holdout protocol applies to online experiments only");
        if (c.holdout_size < 1 || c.period <= c.holdout_size)
            fail("holdout needs 1 <= evaluator.holdout_size < evaluator.period");
    }
    if (c.type == ExperimentType::online || c.type == ExperimentType::batch_pretrained) {
        const auto& info = learner_info(c.algorithm);
        if (c.type == ExperimentType::online && info.kind == LearnerKind::batch)
            fail("online experiments need an adaptive learner, '" + c.algorithm + "' is batch-only");
        for (const auto& [k, v] : c.learner_params.values()) {
            const std::string name = starts_with(k, "base.") ? "base" : k;
            if (k != "default_class" && std::none_of(info.params.begin(), info.params.end(),
                                                     [&](const ParamInfo& p) { return p.name == name; }))
                fail("algorithm '" + c.algorithm + "' has no parameter '" + k + "'");
        }
    }
    if (c.type == ExperimentType::meta_online) {
        if (c.roster.empty())
            fail("meta.roster is empty");
        for (const auto& r : c.roster)
            if (learner_info(r).kind == LearnerKind::batch)
                fail("meta.roster member '" + r + "' is batch-only");
        if (c.meta.window < 1)
            fail("meta.window must be >= 1");
        if (!(c.meta.alpha > 0.0 && c.meta.alpha < 1.0))
            fail("meta.alpha must lie in (0,1)");
    }
    if (c.type == ExperimentType::cash_pretrained) {
        if (c.cash.folds < 2)
            fail("cash.folds must be >= 2");
        grid_expand(c.space.empty() ? default_config_space() : c.space);
    }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& name) {
    ExperimentConfig c;
    c.name = name;
    bool n_set = false;
    SpaceBuilder space;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw StreamError(ErrorKind::config, "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (!seen.insert(key).second)
            throw StreamError(ErrorKind::config, "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        try {
            apply(c, key, value, n_set, space);
        } catch (const StreamError& e) {
            throw StreamError(ErrorKind::config, "line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!n_set && c.source.kind != "generator")
        c.source.n = 0;
    for (const auto& alg : space.order)
        c.space.push_back({alg, space.grids[alg]});
    try {
        validate(c);
    } catch (const StreamError& e) {
        throw StreamError(ErrorKind::config, e.what());
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::string text;
    try {
        text = read_text(path);
    } catch (const StreamError& e) {
        throw StreamError(ErrorKind::config, e.what());
    }
    return parse_config(text, path.stem().string());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
    add("experiment", std::string(to_string(c.type)));
    add("seed", std::to_string(c.seed));
    add("source.kind", c.source.kind);
    if (c.source.kind == "generator") {
        const auto& g = c.source.generator;
        add("source.family", std::string(to_string(g.family)));
        add("source.concepts", join<int>(g.concepts, [](const int& v) { return std::to_string(v); }));
        add("source.drift_positions", join<double>(g.drift_positions, [](const double& v) { return format_double(v); }));
        add("source.drift_width", format_double(g.drift_width));
        for (const auto& [k, v] : g.params)
            add("source.params." + k, format_double(v));
    } else {
        add("source.path", c.source.path.string());
        if (!c.source.label.empty())
            add("source.label", c.source.label);
    }
    add("source.n", std::to_string(c.source.n));
    if (c.type == ExperimentType::online || c.type == ExperimentType::batch_pretrained) {
        add("learner.algorithm", c.algorithm);
        for (const auto& [k, v] : c.learner_params.values())
            add("learner.params." + k, v);
        add("learner.epochs", std::to_string(c.epochs));
    }
    if (c.type == ExperimentType::meta_online) {
        add("meta.roster", join<std::string>(c.roster, [](const std::string& s) { return s; }));
        add("meta.mode", std::string(to_string(c.meta.mode)));
        add("meta.window", std::to_string(c.meta.window));
        add("meta.alpha", format_double(c.meta.alpha));
    }
    add("evaluator.protocol", c.protocol);
    add("evaluator.report_every", std::to_string(c.report_every));
    add("evaluator.window", std::to_string(c.window));
    if (c.protocol == "holdout") {
        add("evaluator.holdout_size", std::to_string(c.holdout_size));
        add("evaluator.period", std::to_string(c.period));
    }
    add("evaluator.detector", c.detector ? std::string(to_string(*c.detector)) : "none");
    if (c.type == ExperimentType::batch_pretrained || c.type == ExperimentType::cash_pretrained)
        add("prefix_size", std::to_string(c.prefix_size));
    if (c.type == ExperimentType::cash_pretrained) {
        add("cash.folds", std::to_string(c.cash.folds));
        add("cash.budget", c.cash.budget ? std::to_string(*c.cash.budget) : "none");
        add("cash.shuffle", c.cash.shuffle ? "true" : "false");
        add("cash.epochs", std::to_string(c.cash.epochs));
        add("cash.workers", std::to_string(c.cash.workers));
        const ConfigSpace space = c.space.empty() ? default_config_space() : c.space;
        add("cash.algorithms", join<SpaceEntry>(space, [](const SpaceEntry& e) { return e.algorithm; }));
        for (const auto& e : space)
            for (const auto& [param, values] : e.grid)
                add("cash.space." + e.algorithm + "." + param,
                    join<std::string>(values, [](const std::string& s) { return s; }));
    }
    if (!c.output_path.empty())
        add("output.path", c.output_path.string());
    add("output.format", std::string(to_string(c.format)));
    return out;
}

std::string render_config(const ExperimentConfig& config) {
    std::string out;
    for (const auto& [k, v] : config_entries(config))
        out += k + " = " + v + "\n";
    return out;
}

namespace {

std::uint64_t learner_seed(std::uint64_t seed, std::size_t j) {
    return derive_seed(seed, "learner" + std::to_string(j));
}

// Owns whatever backs the configured source.
struct OpenSource {
    std::unique_ptr<StreamSource> base;
    std::unique_ptr<Topic> topic;
    std::jthread publisher;
    std::unique_ptr<LimitedSource> limited;
    std::string description;

    StreamSource& get() { return limited ? static_cast<StreamSource&>(*limited) : *base; }
};

std::unique_ptr<OpenSource> open_source(const ExperimentConfig& c) {
    auto s = std::make_unique<OpenSource>();
    if (c.source.kind == "generator") {
        GeneratorSpec spec = c.source.generator;
        spec.seed = derive_seed(c.seed, "generator");
        s->base = make_stream(spec);
        std::string concepts;
        for (int k : spec.concepts)
            concepts += (concepts.empty() ? "" : ">") + std::to_string(k);
        s->description = std::string(to_string(spec.family)) + "[" + concepts + "]";
    } else {
        const DatasetFile file = read_dataset(c.source.path, c.source.label);
        const FeatureSchema schema = infer_schema(file);
        s->description = c.source.path.filename().string();
        if (c.source.kind == "csv") {
            s->base = replay_csv(file, schema);
        } else {
            // Validate every row up front, then publish from a separate thread.
            std::vector<Instance> rows;
            auto replay = replay_csv(file, schema);
            while (auto inst = replay->next())
                rows.push_back(std::move(*inst));
            s->topic = std::make_unique<Topic>(s->description, schema);
            s->base = s->topic->subscribe();
            s->publisher = std::jthread([topic = s->topic.get(), rows = std::move(rows)]() mutable {
                for (auto& r : rows)
                    topic->publish(std::move(r));
                topic->close();
            });
        }
    }
    if (c.source.n > 0)
        s->limited = std::make_unique<LimitedSource>(*s->base, c.source.n);
    return s;
}

std::vector<Instance> take_prefix(StreamSource& src, std::size_t n) {
    std::vector<Instance> out;
    out.reserve(n);
    while (out.size() < n) {
        auto inst = src.next();
        if (!inst)
            throw StreamError(ErrorKind::empty_stream, "stream ended inside the " + std::to_string(n) +
                                                           "-sample training prefix");
        out.push_back(std::move(*inst));
    }
    return out;
}

}  // namespace

ExperimentResult execute_experiment(const ExperimentConfig& c) {
    auto source = open_source(c);
    StreamSource& src = source->get();
    const FeatureSchema schema = src.schema();

    EvalOptions eval;
    eval.report_every = c.report_every;
    eval.window = c.window;
    eval.monitor = c.detector;

    ExperimentResult result;
    MetricTrace& trace = result.trace;
    switch (c.type) {
    case ExperimentType::online: {
        LearnerPtr learner = make_learner(c.algorithm, c.learner_params, schema, learner_seed(c.seed, 0));
        result.learner = Configuration{c.algorithm, c.learner_params}.label();
        trace = c.protocol == "holdout" ? run_holdout(src, *learner, c.holdout_size, c.period, eval)
                                        : run_prequential(src, *learner, eval);
        break;
    }
    case ExperimentType::batch_pretrained: {
        LearnerPtr learner = make_learner(c.algorithm, c.learner_params, schema, learner_seed(c.seed, 0));
        result.learner = Configuration{c.algorithm, c.learner_params}.label();
        const auto prefix = take_prefix(src, c.prefix_size);
        learner = train_batch(std::move(learner), prefix, c.epochs);
        trace = evaluate_pretrained(src, *learner, eval);
        break;
    }
    case ExperimentType::cash_pretrained: {
        const ConfigSpace space = c.space.empty() ? default_config_space() : c.space;
        for (const auto& config : grid_expand(space))
            make_learner(config.algorithm, config.params, schema, 0);
        const auto prefix = take_prefix(src, c.prefix_size);
        CashOptions options = c.cash;
        options.seed = derive_seed(c.seed, "cash");
        CashResult cash = cash_search(prefix, schema, space, options);
        result.learner = "cash_search";
        trace = evaluate_pretrained(src, *cash.model, eval);
        trace.meta["selected"] = cash.best.label();
        result.cash = std::move(cash);
        break;
    }
    case ExperimentType::meta_online: {
        std::vector<LearnerPtr> roster;
        for (std::size_t j = 0; j < c.roster.size(); ++j)
            roster.push_back(make_learner(c.roster[j], {}, schema, learner_seed(c.seed, j)));
        MetaEnsemble ensemble(schema, std::move(roster), c.meta);
        ensemble.set_default_class(0);
        std::string members;
        for (const auto& r : c.roster)
            members += (members.empty() ? "" : ",") + r;
        result.learner = std::string(to_string(c.meta.mode)) + "[" + members + "]";
        trace = run_prequential(src, ensemble, eval);
        break;
    }
    }
    trace.meta["experiment"] = std::string(to_string(c.type));
    trace.meta["dataset"] = source->description;
    trace.meta["learner"] = result.learner;
    trace.meta["seed"] = std::to_string(c.seed);
    trace.meta["protocol"] = c.type == ExperimentType::online || c.type == ExperimentType::meta_online
                                 ? c.protocol
                                 : std::string("pretrained");
    return result;
}

fs::path summary_path_for(const fs::path& trace_path) {
    fs::path p = trace_path;
    p.replace_extension();
    return p.string() + ".summary.json";
}

RunSummary run_experiment(const ExperimentConfig& c) {
    RunSummary summary;
    summary.trace_path = c.output_path.empty() ? fs::path(c.name + "." + std::string(to_string(c.format)))
                                               : c.output_path;
    summary.summary_path = summary_path_for(summary.trace_path);
    const auto started = std::chrono::steady_clock::now();
    try {
        ExperimentResult result = execute_experiment(c);
        const MetricTrace& trace = result.trace;
        summary.wall_time_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        summary.learner = result.learner;
        summary.final_cum_accuracy = trace.records.back().cum_accuracy;
        summary.kappa = trace.records.back().kappa;
        summary.drift_count = trace.drift_count();
        summary.records = trace.records.size();
        double sum = 0.0;
        for (const auto& r : trace.records)
            sum += r.window_accuracy;
        summary.mean_window_accuracy = sum / static_cast<double>(trace.records.size());

        write_trace(trace, summary.trace_path, c.format);

        nlohmann::ordered_json j;
        j["version"] = kTraceVersion;
        j["name"] = c.name;
        j["config"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : config_entries(c))
            j["config"][k] = v;
        j["learner"] = summary.learner;
        j["dataset"] = trace.meta.at("dataset");
        j["trace"] = summary.trace_path.filename().string();
        j["final_cum_accuracy"] = summary.final_cum_accuracy;
        j["mean_window_accuracy"] = summary.mean_window_accuracy;
        j["kappa"] = summary.kappa;
        j["drift_count"] = summary.drift_count;
        j["records"] = summary.records;
        j["wall_time_seconds"] = summary.wall_time_seconds;
        if (result.cash) {
            j["cash"]["selected"] = result.cash->best.label();
            j["cash"]["best_loss"] = result.cash->best_loss;
            j["cash"]["truncated"] = result.cash->truncated;
            j["cash"]["leaderboard"] = nlohmann::ordered_json::parse(leaderboard_json(*result.cash));
        }
        write_text(summary.summary_path, j.dump(2) + "\n");
    } catch (...) {
        std::error_code ec;
        fs::remove(summary.trace_path, ec);
        fs::remove(summary.summary_path, ec);
        throw;
    }
    return summary;
}

// Summaries

namespace {

bool is_summary_file(const fs::path& p) {
    const std::string name = p.filename().string();
    return name.size() > 13 && name.compare(name.size() - 13, 13, ".summary.json") == 0;
}

std::string learner_of(const fs::path& trace_path, const MetricTrace& trace) {
    if (auto it = trace.meta.find("learner"); it != trace.meta.end())
        return it->second;
    const fs::path sibling = summary_path_for(trace_path);
    if (fs::exists(sibling)) {
        try {
            const auto j = nlohmann::json::parse(read_text(sibling));
            return j.at("learner").get<std::string>();
        } catch (const nlohmann::json::exception&) {
        }
    }
    return "unknown";
}

// Directory scans skip files that are not traces (datasets, summaries);
// a trace that declares another version is an error.
std::optional<MetricTrace> try_read_trace(const fs::path& p) {
    const std::string text = read_text(p);
    if (p.extension() == ".json") {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception&) {
            return std::nullopt;
        }
        if (!j.is_object() || !j.contains("records"))
            return std::nullopt;
        if (!j.contains("version") || j["version"] != kTraceVersion)
            throw StreamError(ErrorKind::parse, p.string() + ": incompatible trace version");
        return parse_trace(text, TraceFormat::json);
    }
    if (text.rfind("seq,cum_accuracy,", 0) != 0)
        return std::nullopt;
    return parse_trace(text, TraceFormat::csv);
}

}  // namespace

std::vector<GroupSummary> summarize_traces(const std::vector<fs::path>& inputs) {
    std::vector<std::pair<fs::path, MetricTrace>> traces;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::recursive_directory_iterator(in))
                if (e.is_regular_file() && !is_summary_file(e.path()) &&
                    (e.path().extension() == ".csv" || e.path().extension() == ".json"))
                    files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files)
                if (auto t = try_read_trace(f))
                    traces.emplace_back(f, std::move(*t));
        } else if (fs::exists(in)) {
            traces.emplace_back(in, read_trace(in));
        } else {
            throw StreamError(ErrorKind::io, "no such trace or directory: " + in.string());
        }
    }
    if (traces.empty())
        throw StreamError(ErrorKind::empty_stream, "no traces found");

    std::map<std::string, std::vector<double>> groups;
    for (const auto& [path, trace] : traces)
        groups[learner_of(path, trace)].push_back(trace.records.back().cum_accuracy);

    std::vector<GroupSummary> out;
    for (auto& [learner, values] : groups) {
        GroupSummary g;
        g.learner = learner;
        g.values = values;
        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        double sum = 0.0;
        for (double v : sorted)
            sum += v;
        g.mean = sum / static_cast<double>(sorted.size());
        const std::size_t m = sorted.size() / 2;
        g.median = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
        g.min = sorted.front();
        g.max = sorted.back();
        out.push_back(std::move(g));
    }
    return out;
}

std::string summary_csv(const std::vector<GroupSummary>& groups) {
    std::string out = "learner,traces,mean,median,min,max,values\n";
    for (const auto& g : groups) {
        std::string values;
        for (double v : g.values)
            values += (values.empty() ? "" : ";") + format_double(v);
        out += csv_field(g.learner) + "," + std::to_string(g.values.size()) + "," + format_double(g.mean) + "," +
               format_double(g.median) + "," + format_double(g.min) + "," + format_double(g.max) + "," + values +
               "\n";
    }
    return out;
}

std::string summary_table(const std::vector<GroupSummary>& groups) {
    std::size_t width = 7;
    for (const auto& g : groups)
        width = std::max(width, g.learner.size());
    auto pad = [](std::string s, std::size_t w) {
        s.resize(std::max(w, s.size()), ' ');
        return s;
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%8.4f", v);
        return std::string(buf);
    };
    std::string out = pad("learner", width) + "  traces      mean    median       min       max\n";
    for (const auto& g : groups) {
        char count[16];
        std::snprintf(count, sizeof count, "%6zu", g.values.size());
        out += pad(g.learner, width) + "  " + count + "  " + num(g.mean) + "  " + num(g.median) + "  " + num(g.min) +
               "  " + num(g.max) + "\n";
    }
    return out;
}

std::string describe_components() {
    std::string out = "algorithms:\n";
    for (const auto& info : learner_registry()) {
        out += "  " + info.name + " (" + (info.kind == LearnerKind::batch ? "batch" : "adaptive") + ") - " +
               info.description + "\n";
        for (const auto& p : info.params)
            out += "      " + p.name + " = " + p.default_value + "    " + p.description + "\n";
        out += "      default_class = 0    answer before any training\n";
    }
    out += "generators:\n";
    for (auto f : {GeneratorFamily::agrawal, GeneratorFamily::stagger, GeneratorFamily::sea, GeneratorFamily::led,
                   GeneratorFamily::hyperplane, GeneratorFamily::rbf}) {
        const FeatureSchema s = generator_schema(f);
        out += "  " + std::string(to_string(f)) + " - " + std::to_string(s.dimension()) + " features, " +
               std::to_string(s.num_classes()) + " classes\n";
        for (const auto& [k, v] : generator_defaults(f))
            out += "      " + k + " = " + format_double(v) + "\n";
    }
    out += "detectors:\n";
    out += "  page_hinkley\n      delta = 0.005\n      lambda = 50\n      min_instances = 30\n";
    out += "  ddm\n      min_instances = 30\n      warning_level = 2\n      drift_level = 3\n";
    out += "  eddm\n      alpha = 0.95\n      beta = 0.9\n      min_errors = 30\n";
    out += "  adwin\n      delta = 0.002\n      max_buckets = 5\n";
    return out;
}

}  // namespace streamlab
