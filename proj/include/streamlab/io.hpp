#pragma once

#include "streamlab/eval.hpp"

#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>

namespace streamlab {

// CSV

/// Splits one CSV line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv_line(const std::string& line);
/// Quotes a field only when it contains a comma, quote or newline.
std::string csv_field(const std::string& value);
/// Shortest text that parses back to the same double.
std::string format_double(double v);
bool parse_double(const std::string& text, double& out);

struct DatasetFile {
    std::filesystem::path path;
    std::vector<std::string> header;
    std::string label_column;
    std::vector<std::vector<std::string>> rows;
};

/// Reads the whole file. An empty `label_column` selects the last column.
DatasetFile read_dataset(const std::filesystem::path& path, const std::string& label_column = "");

/// A column is numeric iff every sampled value parses as a real. Category
/// values and classes keep first-seen order over the whole file.
/// `sample_rows` = 0 samples every row.
FeatureSchema infer_schema(const DatasetFile& file, std::size_t sample_rows = 0);

/// Yields the rows in file order with seq 0..n-1; a row that does not fit the
/// schema raises a parse error naming its 1-based data row.
std::unique_ptr<StreamSource> replay_csv(const DatasetFile& file, const FeatureSchema& schema);

/// Writes `n` instances from `src` as CSV with a header; returns rows written.
std::size_t write_dataset(StreamSource& src, std::size_t n, const std::filesystem::path& path);

/// Draws at most `limit` instances from another source.
class LimitedSource final : public StreamSource {
public:
    LimitedSource(StreamSource& inner, std::size_t limit) : inner_(inner), left_(limit) {}
    std::optional<Instance> next() override;
    const FeatureSchema& schema() const override { return inner_.schema(); }

private:
    StreamSource& inner_;
    std::size_t left_;
};

/// Replays a buffered vector.
class VectorSource final : public StreamSource {
public:
    VectorSource(FeatureSchema schema, std::vector<Instance> items) : schema_(std::move(schema)), items_(std::move(items)) {}
    std::optional<Instance> next() override;
    const FeatureSchema& schema() const override { return schema_; }

private:
    FeatureSchema schema_;
    std::vector<Instance> items_;
    std::size_t pos_ = 0;
};

// Topics

/// In-process append-only log with independent subscriber cursors. Subscribers
/// block on an open topic until more is published or the topic is closed.
class Topic {
public:
    Topic(std::string name, FeatureSchema schema, std::optional<std::size_t> capacity = std::nullopt);

    /// Throws invalid_argument once the optional capacity is reached or after close.
    void publish(Instance inst);
    void close();
    std::unique_ptr<StreamSource> subscribe();

    const std::string& name() const { return state_->name; }
    const FeatureSchema& schema() const { return state_->schema; }
    std::size_t size() const;
    bool closed() const;

private:
    struct State {
        std::string name;
        FeatureSchema schema;
        std::optional<std::size_t> capacity;
        mutable std::mutex mutex;
        std::condition_variable cv;
        std::vector<Instance> log;
        bool closed = false;
    };
    class Subscription;

    std::shared_ptr<State> state_;
};

class TopicRegistry {
public:
    Topic& create(const std::string& name, FeatureSchema schema, std::optional<std::size_t> capacity = std::nullopt);
    /// Throws io for unknown topics.
    Topic& get(const std::string& name);
    std::unique_ptr<StreamSource> subscribe(const std::string& name) { return get(name).subscribe(); }

private:
    std::mutex mutex_;
    std::map<std::string, std::unique_ptr<Topic>> topics_;
};

// Traces

enum class TraceFormat { csv, json };

TraceFormat parse_trace_format(std::string_view text);
std::string_view to_string(TraceFormat format);

inline constexpr int kTraceVersion = 1;

std::string render_trace(const MetricTrace& trace, TraceFormat format);
MetricTrace parse_trace(const std::string& text, TraceFormat format);

void write_trace(const MetricTrace& trace, const std::filesystem::path& path, TraceFormat format);
/// Format from the extension (.json, otherwise csv).
MetricTrace read_trace(const std::filesystem::path& path);

/// Writes `text` to `path` or raises an io error.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace streamlab
