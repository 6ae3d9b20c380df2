#include "streamlab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace streamlab {

namespace fs = std::filesystem;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (quoted)
        throw StreamError(ErrorKind::parse, "unterminated quote in CSV line");
    out.push_back(std::move(cur));
    return out;
}

std::string csv_field(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos)
        return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty())
        return false;
    const char* begin = text.data();
    if (*begin == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw StreamError(ErrorKind::io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw StreamError(ErrorKind::io, "cannot write " + path.string());
    out << text;
    out.flush();
    if (!out)
        throw StreamError(ErrorKind::io, "failed writing " + path.string());
}

DatasetFile read_dataset(const fs::path& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in)
        throw StreamError(ErrorKind::io, "cannot read dataset " + path.string());
    DatasetFile file;
    file.path = path;
    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw StreamError(ErrorKind::parse, path.string() + " is empty");
    file.header = split_csv_line(line);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        ++row;
        auto fields = split_csv_line(line);
        if (fields.size() != file.header.size())
            throw StreamError(ErrorKind::parse, path.string() + ": row " + std::to_string(row) + " has " +
                                                    std::to_string(fields.size()) + " fields, header has " +
                                                    std::to_string(file.header.size()));
        file.rows.push_back(std::move(fields));
    }
    if (file.rows.empty())
        throw StreamError(ErrorKind::parse, path.string() + " has no data rows");
    file.label_column = label_column.empty() ? file.header.back() : label_column;
    if (std::find(file.header.begin(), file.header.end(), file.label_column) == file.header.end())
        throw StreamError(ErrorKind::parse, path.string() + " has no column '" + file.label_column + "'");
    return file;
}

namespace {

std::size_t label_index(const DatasetFile& file) {
    return static_cast<std::size_t>(std::find(file.header.begin(), file.header.end(), file.label_column) -
                                    file.header.begin());
}

void add_distinct(std::vector<std::string>& values, const std::string& v) {
    if (std::find(values.begin(), values.end(), v) == values.end())
        values.push_back(v);
}

}  // namespace

FeatureSchema infer_schema(const DatasetFile& file, std::size_t sample_rows) {
    if (file.rows.empty())
        throw StreamError(ErrorKind::parse, "cannot infer a schema without data rows");
    const std::size_t label = label_index(file);
    const std::size_t sampled = sample_rows == 0 ? file.rows.size() : std::min(sample_rows, file.rows.size());
    std::vector<FeatureSpec> features;
    for (std::size_t c = 0; c < file.header.size(); ++c) {
        if (c == label)
            continue;
        bool numeric = true;
        double tmp = 0.0;
        for (std::size_t r = 0; r < sampled && numeric; ++r)
            numeric = parse_double(file.rows[r][c], tmp);
        if (numeric) {
            features.push_back(FeatureSpec::numeric(file.header[c]));
        } else {
            std::vector<std::string> values;
            for (const auto& row : file.rows)
                add_distinct(values, row[c]);
            features.push_back(FeatureSpec::categorical_of(file.header[c], std::move(values)));
        }
    }
    std::vector<std::string> classes;
    for (const auto& row : file.rows)
        add_distinct(classes, row[label]);
    FeatureSchema schema(std::move(features), file.label_column, std::move(classes));
    schema.check_well_formed();
    return schema;
}

namespace {

class CsvSource final : public StreamSource {
public:
    CsvSource(const DatasetFile& file, FeatureSchema schema) : file_(file), schema_(std::move(schema)) {
        label_ = label_index(file_);
        if (file_.header.size() != schema_.dimension() + 1)
            throw StreamError(ErrorKind::dimension_mismatch, "schema does not match the file's column count");
        for (std::size_t c = 0; c < file_.header.size(); ++c)
            if (c != label_)
                columns_.push_back(c);
        for (std::size_t f = 0; f < columns_.size(); ++f)
            if (file_.header[columns_[f]] != schema_.feature(f).name)
                throw StreamError(ErrorKind::dimension_mismatch,
                                  "column '" + file_.header[columns_[f]] + "' does not match feature '" +
                                      schema_.feature(f).name + "'");
    }

    std::optional<Instance> next() override {
        if (pos_ >= file_.rows.size())
            return std::nullopt;
        const auto& row = file_.rows[pos_];
        const std::string where = file_.path.string() + ": row " + std::to_string(pos_ + 1);
        Instance inst;
        inst.seq = pos_;
        inst.x.resize(static_cast<Eigen::Index>(columns_.size()));
        for (std::size_t f = 0; f < columns_.size(); ++f) {
            const auto& spec = schema_.feature(f);
            const std::string& cell = row[columns_[f]];
            if (spec.categorical()) {
                auto it = std::find(spec.values.begin(), spec.values.end(), cell);
                if (it == spec.values.end())
                    throw StreamError(ErrorKind::categorical_out_of_range,
                                      where + ": value '" + cell + "' is not a category of '" + spec.name + "'");
                inst.x[static_cast<Eigen::Index>(f)] = static_cast<double>(it - spec.values.begin());
            } else {
                double v = 0.0;
                if (!parse_double(cell, v))
                    throw StreamError(ErrorKind::parse,
                                      where + ": '" + cell + "' in numeric column '" + spec.name + "'");
                inst.x[static_cast<Eigen::Index>(f)] = v;
            }
        }
        const auto& classes = schema_.classes();
        auto it = std::find(classes.begin(), classes.end(), row[label_]);
        if (it == classes.end())
            throw StreamError(ErrorKind::unknown_class, where + ": unknown class '" + row[label_] + "'");
        inst.y = static_cast<int>(it - classes.begin());
        try {
            validate_instance(inst, schema_);
        } catch (const StreamError& e) {
            throw StreamError(e.kind(), where + ": " + e.what());
        }
        ++pos_;
        return inst;
    }

    const FeatureSchema& schema() const override { return schema_; }

private:
    DatasetFile file_;
    FeatureSchema schema_;
    std::size_t label_ = 0;
    std::vector<std::size_t> columns_;
    std::size_t pos_ = 0;
};

}  // namespace

std::unique_ptr<StreamSource> replay_csv(const DatasetFile& file, const FeatureSchema& schema) {
    return std::make_unique<CsvSource>(file, schema);
}

std::size_t write_dataset(StreamSource& src, std::size_t n, const fs::path& path) {
    if (n == 0)
        throw StreamError(ErrorKind::invalid_argument, "refusing to write an empty dataset");
    const FeatureSchema& schema = src.schema();
    std::string out;
    for (const auto& f : schema.features())
        out += csv_field(f.name) + ",";
    out += csv_field(schema.label_name()) + "\n";
    std::size_t written = 0;
    for (; written < n; ++written) {
        auto inst = src.next();
        if (!inst)
            break;
        for (std::size_t f = 0; f < schema.dimension(); ++f) {
            const double v = inst->x[static_cast<Eigen::Index>(f)];
            const auto& spec = schema.feature(f);
            out += spec.categorical() ? csv_field(spec.values.at(static_cast<std::size_t>(v))) : format_double(v);
            out += ',';
        }
        if (!inst->y)
            throw StreamError(ErrorKind::unlabeled_instance, "cannot write an unlabeled instance");
        out += csv_field(schema.classes().at(static_cast<std::size_t>(*inst->y))) + "\n";
    }
    write_text(path, out);
    return written;
}

std::optional<Instance> LimitedSource::next() {
    if (left_ == 0)
        return std::nullopt;
    auto inst = inner_.next();
    if (inst)
        --left_;
    return inst;
}

std::optional<Instance> VectorSource::next() {
    if (pos_ >= items_.size())
        return std::nullopt;
    return items_[pos_++];
}

// Topics

class Topic::Subscription final : public StreamSource {
public:
    explicit Subscription(std::shared_ptr<State> state) : state_(std::move(state)) {}

    std::optional<Instance> next() override {
        std::unique_lock lock(state_->mutex);
        state_->cv.wait(lock, [&] { return cursor_ < state_->log.size() || state_->closed; });
        if (cursor_ < state_->log.size())
            return state_->log[cursor_++];
        return std::nullopt;
    }

    const FeatureSchema& schema() const override { return state_->schema; }

private:
    std::shared_ptr<State> state_;
    std::size_t cursor_ = 0;
};

Topic::Topic(std::string name, FeatureSchema schema, std::optional<std::size_t> capacity)
    : state_(std::make_shared<State>()) {
    state_->name = std::move(name);
    state_->schema = std::move(schema);
    state_->capacity = capacity;
}

void Topic::publish(Instance inst) {
    validate_instance(inst, state_->schema);
    {
        std::lock_guard lock(state_->mutex);
        if (state_->closed)
            throw StreamError(ErrorKind::invalid_argument, "publish on closed topic '" + state_->name + "'");
        if (state_->capacity && state_->log.size() >= *state_->capacity)
            throw StreamError(ErrorKind::invalid_argument,
                              "topic '" + state_->name + "' is full (" + std::to_string(*state_->capacity) + ")");
        state_->log.push_back(std::move(inst));
    }
    state_->cv.notify_all();
}

void Topic::close() {
    {
        std::lock_guard lock(state_->mutex);
        state_->closed = true;
    }
    state_->cv.notify_all();
}

std::unique_ptr<StreamSource> Topic::subscribe() { return std::make_unique<Subscription>(state_); }

std::size_t Topic::size() const {
    std::lock_guard lock(state_->mutex);
    return state_->log.size();
}

bool Topic::closed() const {
    std::lock_guard lock(state_->mutex);
    return state_->closed;
}

Topic& TopicRegistry::create(const std::string& name, FeatureSchema schema, std::optional<std::size_t> capacity) {
    std::lock_guard lock(mutex_);
    if (topics_.count(name))
        throw StreamError(ErrorKind::invalid_argument, "topic '" + name + "' already exists");
    auto& slot = topics_[name];
    slot = std::make_unique<Topic>(name, std::move(schema), capacity);
    return *slot;
}

Topic& TopicRegistry::get(const std::string& name) {
    std::lock_guard lock(mutex_);
    auto it = topics_.find(name);
    if (it == topics_.end())
        throw StreamError(ErrorKind::io, "no topic named '" + name + "'");
    return *it->second;
}

// Traces

TraceFormat parse_trace_format(std::string_view text) {
    if (text == "csv") return TraceFormat::csv;
    if (text == "json") return TraceFormat::json;
    throw StreamError(ErrorKind::config, "unknown trace format '" + std::string(text) + "'");
}

std::string_view to_string(TraceFormat format) { return format == TraceFormat::json ? "json" : "csv"; }

namespace {

void check_event_text(const std::string& s) {
    if (s.empty() || s.find_first_of("/;,\"\n") != std::string::npos)
        throw StreamError(ErrorKind::invalid_argument, "trace event field '" + s + "' cannot be serialized");
}

std::string render_events(const std::vector<TraceEvent>& events) {
    std::string out;
    for (const auto& e : events) {
        check_event_text(e.source);
        check_event_text(e.detail);
        if (!out.empty())
            out += ';';
        out += std::to_string(e.seq) + "/" + e.source + "/" + e.detail;
    }
    return out;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw StreamError(ErrorKind::parse, std::string("bad ") + what + " '" + s + "'");
    return v;
}

double parse_real(const std::string& s, const char* what) {
    double v = 0.0;
    if (!parse_double(s, v))
        throw StreamError(ErrorKind::parse, std::string("bad ") + what + " '" + s + "'");
    return v;
}

std::vector<TraceEvent> parse_events(const std::string& cell) {
    std::vector<TraceEvent> out;
    if (cell.empty())
        return out;
    std::stringstream ss(cell);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto a = item.find('/');
        const auto b = item.find('/', a == std::string::npos ? a : a + 1);
        if (a == std::string::npos || b == std::string::npos)
            throw StreamError(ErrorKind::parse, "bad trace event '" + item + "'");
        out.push_back({parse_u64(item.substr(0, a), "event seq"), item.substr(a + 1, b - a - 1), item.substr(b + 1)});
    }
    return out;
}

const char* kCsvHeader = "seq,cum_accuracy,window_accuracy,kappa,drift,active_learner";

}  // namespace

std::string render_trace(const MetricTrace& trace, TraceFormat format) {
    if (trace.records.empty())
        throw StreamError(ErrorKind::invalid_argument, "cannot write an empty trace");
    if (format == TraceFormat::csv) {
        std::string out = std::string(kCsvHeader) + "\n";
        for (const auto& r : trace.records) {
            out += std::to_string(r.seq) + "," + format_double(r.cum_accuracy) + "," +
                   format_double(r.window_accuracy) + "," + format_double(r.kappa) + "," +
                   render_events(r.drift_events) + "," +
                   (r.active_learner ? std::to_string(*r.active_learner) : std::string()) + "\n";
        }
        return out;
    }
    nlohmann::ordered_json j;
    j["version"] = kTraceVersion;
    j["meta"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : trace.meta)
        j["meta"][k] = v;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : trace.records) {
        nlohmann::ordered_json row;
        row["seq"] = r.seq;
        row["cum_accuracy"] = r.cum_accuracy;
        row["window_accuracy"] = r.window_accuracy;
        row["kappa"] = r.kappa;
        row["drift"] = nlohmann::ordered_json::array();
        for (const auto& e : r.drift_events)
            row["drift"].push_back({{"seq", e.seq}, {"source", e.source}, {"detail", e.detail}});
        row["active_learner"] = r.active_learner ? nlohmann::ordered_json(*r.active_learner) : nullptr;
        j["records"].push_back(std::move(row));
    }
    return j.dump(1) + "\n";
}

MetricTrace parse_trace(const std::string& text, TraceFormat format) {
    MetricTrace trace;
    if (format == TraceFormat::csv) {
        std::stringstream ss(text);
        std::string line;
        if (!std::getline(ss, line) || line != kCsvHeader)
            throw StreamError(ErrorKind::parse, "trace CSV header mismatch");
        while (std::getline(ss, line)) {
            if (line.empty())
                continue;
            const auto f = split_csv_line(line);
            if (f.size() != 6)
                throw StreamError(ErrorKind::parse, "trace row with " + std::to_string(f.size()) + " fields");
            TraceRecord r;
            r.seq = parse_u64(f[0], "seq");
            r.cum_accuracy = parse_real(f[1], "cum_accuracy");
            r.window_accuracy = parse_real(f[2], "window_accuracy");
            r.kappa = parse_real(f[3], "kappa");
            r.drift_events = parse_events(f[4]);
            if (!f[5].empty())
                r.active_learner = static_cast<int>(parse_u64(f[5], "active_learner"));
            trace.records.push_back(std::move(r));
        }
    } else {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
            if (!j.contains("version") || j.at("version").get<int>() != kTraceVersion)
                throw StreamError(ErrorKind::parse, "unsupported trace version");
            for (const auto& [k, v] : j.at("meta").items())
                trace.meta[k] = v.get<std::string>();
            for (const auto& row : j.at("records")) {
                TraceRecord r;
                r.seq = row.at("seq").get<std::uint64_t>();
                r.cum_accuracy = row.at("cum_accuracy").get<double>();
                r.window_accuracy = row.at("window_accuracy").get<double>();
                r.kappa = row.at("kappa").get<double>();
                for (const auto& e : row.at("drift"))
                    r.drift_events.push_back({e.at("seq").get<std::uint64_t>(), e.at("source").get<std::string>(),
                                              e.at("detail").get<std::string>()});
                if (!row.at("active_learner").is_null())
                    r.active_learner = row.at("active_learner").get<int>();
                trace.records.push_back(std::move(r));
            }
        } catch (const nlohmann::json::exception& e) {
            throw StreamError(ErrorKind::parse, std::string("malformed trace JSON: ") + e.what());
        }
    }
    if (trace.records.empty())
        throw StreamError(ErrorKind::parse, "trace has no records");
    return trace;
}

void write_trace(const MetricTrace& trace, const fs::path& path, TraceFormat format) {
    write_text(path, render_trace(trace, format));
}

MetricTrace read_trace(const fs::path& path) {
    const TraceFormat format = path.extension() == ".json" ? TraceFormat::json : TraceFormat::csv;
    return parse_trace(read_text(path), format);
}

}  // namespace streamlab
