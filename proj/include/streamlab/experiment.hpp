#pragma once

#include "streamlab/cash.hpp"
#include "streamlab/eval.hpp"
#include "streamlab/generators.hpp"
#include "streamlab/io.hpp"
#include "streamlab/meta.hpp"

#include <filesystem>

namespace streamlab {

enum class ExperimentType { batch_pretrained, online, cash_pretrained, meta_online };

std::string_view to_string(ExperimentType type);
ExperimentType parse_experiment_type(std::string_view text);

struct SourceConfig {
    /// generator, csv or topic (a CSV file replayed through an in-process topic).
    std::string kind = "generator";
    GeneratorSpec generator;
    std::filesystem::path path;
    std::string label;
    /// Samples drawn from the source; 0 means the whole file for csv/topic.
    std::size_t n = 20000;
};

struct ExperimentConfig {
    std::string name = "experiment";
    ExperimentType type = ExperimentType::online;
    std::uint64_t seed = 1;
    SourceConfig source;

    std::string algorithm = "hoeffding_tree";
    Params learner_params;
    std::size_t epochs = 1;

    std::vector<std::string> roster = {"hoeffding_tree", "knn_window", "perceptron", "linear_sgd"};
    MetaParams meta;

    std::string protocol = "prequential";
    std::size_t report_every = 100;
    std::size_t window = 200;
    std::size_t holdout_size = 100;
    std::size_t period = 1000;
    std::optional<DetectorKind> detector;

    std::size_t prefix_size = 0;

    CashOptions cash;
    /// Empty means the default space.
    ConfigSpace space;

    std::filesystem::path output_path;
    TraceFormat format = TraceFormat::csv;
};

/// Parses `key = value` lines with dotted keys; '#' starts a comment.
/// Every problem is a config error naming the line.
ExperimentConfig parse_config(const std::string& text, const std::string& name = "experiment");
ExperimentConfig load_config(const std::filesystem::path& path);

/// The fully resolved configuration as ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& config);
std::string render_config(const ExperimentConfig& config);

struct RunSummary {
    std::string learner;
    double final_cum_accuracy = 0.0;
    double mean_window_accuracy = 0.0;
    double kappa = 0.0;
    std::size_t drift_count = 0;
    std::size_t records = 0;
    double wall_time_seconds = 0.0;
    std::filesystem::path trace_path;
    std::filesystem::path summary_path;
};

/// Executes the experiment without touching the filesystem for outputs.
struct ExperimentResult {
    MetricTrace trace;
    std::string learner;
    std::optional<CashResult> cash;
};

ExperimentResult execute_experiment(const ExperimentConfig& config);

/// Runs and writes the trace to `config.output_path` plus a JSON run summary
/// next to it. Partial outputs are removed on failure.
RunSummary run_experiment(const ExperimentConfig& config);

/// "<trace without extension>.summary.json"
std::filesystem::path summary_path_for(const std::filesystem::path& trace_path);

struct GroupSummary {
    std::string learner;
    std::vector<double> values;
    double mean = 0.0;
    double median = 0.0;
    double min = 0.0;
    double max = 0.0;
};

/// Groups traces by learner and summarizes their final cum_accuracy.
/// Directories are scanned recursively for trace files.
std::vector<GroupSummary> summarize_traces(const std::vector<std::filesystem::path>& inputs);
std::string summary_csv(const std::vector<GroupSummary>& groups);
std::string summary_table(const std::vector<GroupSummary>& groups);

/// Text listing of algorithms, generators and detectors with their parameters.
std::string describe_components();

}  // namespace streamlab
