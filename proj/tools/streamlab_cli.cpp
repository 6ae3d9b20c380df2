// streamlab: generate datasets, run experiments, summarize traces.

#include "streamlab/experiment.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <iostream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using namespace streamlab;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

int exit_code_for(const StreamError& e) { return e.kind() == ErrorKind::config ? kConfigError : kRuntimeError; }

template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const StreamError& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

struct RunFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    std::string format;
};

ExperimentConfig resolve(const fs::path& path, const RunFlags& flags) {
    ExperimentConfig c = load_config(path);
    if (flags.seed)
        c.seed = *flags.seed;
    if (!flags.format.empty()) {
        c.format = parse_trace_format(flags.format);
        if (!c.output_path.empty())
            c.output_path.replace_extension(flags.format);
    }
    const std::string ext = "." + std::string(to_string(c.format));
    fs::path file = c.output_path.empty() ? fs::path(c.name + ext) : c.output_path.filename();
    if (!flags.out.empty())
        c.output_path = fs::path(flags.out) / file;
    else if (c.output_path.empty())
        c.output_path = file;
    return c;
}

int run_one(const fs::path& path, const RunFlags& flags, std::mutex& io) {
    return guarded([&] {
        const ExperimentConfig c = resolve(path, flags);
        const RunSummary s = run_experiment(c);
        std::lock_guard lock(io);
        std::cout << c.name << ": " << s.learner << " cum_accuracy=" << format_double(s.final_cum_accuracy)
                  << " kappa=" << format_double(s.kappa) << " drifts=" << s.drift_count << " -> "
                  << s.trace_path.string() << "\n";
        return kOk;
    });
}

int cmd_run(const RunFlags& flags) {
    std::mutex io;
    const fs::path target(flags.config);
    if (!fs::is_directory(target))
        return run_one(target, flags, io);

    std::vector<fs::path> configs;
    for (const auto& e : fs::directory_iterator(target))
        if (e.is_regular_file() && (e.path().extension() == ".conf" || e.path().extension() == ".cfg"))
            configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());
    if (configs.empty()) {
        std::cerr << "error (config): no .conf files in " << target.string() << "\n";
        return kConfigError;
    }
    std::vector<int> codes(configs.size(), kOk);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::clamp<std::size_t>(flags.workers, 1, configs.size());
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < configs.size(); i = next++)
                codes[i] = run_one(configs[i], flags, io);
        });
    for (auto& t : pool)
        t.join();
    return *std::max_element(codes.begin(), codes.end());
}

struct GenerateFlags {
    std::string config;
    std::string family;
    std::string concepts = "0";
    std::string drift_positions;
    double drift_width = 1.0;
    std::size_t n = 20000;
    std::uint64_t seed = 1;
    std::vector<std::string> params;
    std::string out;
};

int cmd_generate(const GenerateFlags& g) {
    ExperimentConfig c;
    if (!g.config.empty()) {
        c = load_config(g.config);
        if (c.source.kind != "generator")
            throw StreamError(ErrorKind::config, "generate needs a generator source");
    } else {
        if (g.family.empty())
            throw StreamError(ErrorKind::config, "--family is required without --config");
        std::string text = "source.family = " + g.family + "\nsource.concepts = " + g.concepts +
                           "\nsource.drift_positions = " + g.drift_positions +
                           "\nsource.drift_width = " + format_double(g.drift_width) +
                           "\nsource.n = " + std::to_string(g.n) + "\nseed = " + std::to_string(g.seed) + "\n";
        for (const auto& p : g.params) {
            const auto eq = p.find('=');
            if (eq == std::string::npos)
                throw StreamError(ErrorKind::config, "--param expects name=value, got '" + p + "'");
            text += "source.params." + p.substr(0, eq) + " = " + p.substr(eq + 1) + "\n";
        }
        c = parse_config(text, "generate");
    }
    GeneratorSpec spec = c.source.generator;
    spec.seed = derive_seed(c.seed, "generator");
    auto stream = make_stream(spec);
    const std::size_t rows = write_dataset(*stream, c.source.n, g.out);
    const FeatureSchema& schema = stream->schema();
    std::cout << "wrote " << rows << " rows to " << g.out << "\n";
    for (const auto& f : schema.features()) {
        std::cout << "  " << f.name << ": ";
        if (f.categorical()) {
            std::cout << "categorical {";
            for (std::size_t i = 0; i < f.values.size(); ++i)
                std::cout << (i ? "," : "") << f.values[i];
            std::cout << "}\n";
        } else {
            std::cout << "numeric\n";
        }
    }
    std::cout << "  " << schema.label_name() << " (label): {";
    for (std::size_t i = 0; i < schema.classes().size(); ++i)
        std::cout << (i ? "," : "") << schema.classes()[i];
    std::cout << "}\n";
    return kOk;
}

int cmd_summarize(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<fs::path> paths(inputs.begin(), inputs.end());
    const auto groups = summarize_traces(paths);
    const std::string csv = summary_csv(groups);
    if (!out.empty())
        write_text(out, csv);
    else
        std::cout << csv << "\n";
    std::cout << summary_table(groups);
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stream learning experiments: generators, online and pretrained learners, drift detectors."};
    app.require_subcommand(1);

    auto* generate = app.add_subcommand("generate", "write a synthetic (optionally drifting) dataset as CSV");
    GenerateFlags g;
    generate->add_option("--config", g.config, "take source.* keys and seed from an experiment config");
    generate->add_option("--family", g.family, "agrawal, stagger, sea, led, hyperplane or rbf");
    generate->add_option("--concepts", g.concepts, "comma-separated concept ids, one per segment");
    generate->add_option("--drift-positions", g.drift_positions, "comma-separated drift centers");
    generate->add_option("--drift-width", g.drift_width, "sigmoid drift width (1 = abrupt)");
    generate->add_option("--n", g.n, "number of rows");
    generate->add_option("--seed", g.seed, "seed");
    generate->add_option("--param", g.params, "generator parameter name=value")->take_all();
    generate->add_option("--out", g.out, "output CSV path")->required();

    auto* run = app.add_subcommand("run", "run an experiment config, or every .conf file in a directory");
    RunFlags r;
    run->add_option("--config", r.config, "config file or directory")->required();
    run->add_option("--out", r.out, "output directory for traces and summaries");
    run->add_option("--seed", r.seed, "override the config seed");
    run->add_option("--workers", r.workers, "parallel experiments in suite mode");
    run->add_option("--format", r.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* summarize = app.add_subcommand("summarize", "aggregate final accuracies of traces by learner");
    std::vector<std::string> inputs;
    std::string summary_out;
    summarize->add_option("paths", inputs, "trace files or directories")->required();
    summarize->add_option("--out", summary_out, "write the CSV summary here");

    auto* list = app.add_subcommand("list", "print algorithms, generators and detectors with their parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    if (*generate)
        return guarded([&] { return cmd_generate(g); });
    if (*run)
        return guarded([&] { return cmd_run(r); });
    if (*summarize)
        return guarded([&] { return cmd_summarize(inputs, summary_out); });
    if (*list) {
        std::cout << describe_components();
        return kOk;
    }
    return kConfigError;
}
