#include "aeids/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <unordered_map>

#include "aeids/error.hpp"

namespace aeids {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_finite(std::string_view text, double& out) {
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

}  // namespace

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return i;
    }
    return std::nullopt;
}

bool FeatureSchema::same_layout(const FeatureSchema& other) const {
    return columns == other.columns && label_column == other.label_column &&
           difficulty_column == other.difficulty_column;
}

FeatureSchema nslkdd_schema() {
    static constexpr std::string_view names[] = {
        "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
        "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
        "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
        "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
        "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
        "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
        "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
        "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
        "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate",
    };
    FeatureSchema schema;
    for (auto name : names) {
        const bool categorical = name == "protocol_type" || name == "service" || name == "flag";
        schema.columns.push_back({std::string(name), categorical ? ColumnKind::categorical : ColumnKind::numeric});
    }
    schema.vocabularies.resize(schema.columns.size());
    return schema;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path.string());
    FeatureSchema schema;
    schema.label_column.clear();
    schema.difficulty_column.clear();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        const auto fields = split_fields(text);
        if (fields.size() != 2 || fields[0].empty()) throw ParseError("schema: expected `name,kind`", line_no);
        const std::string name(fields[0]);
        if (fields[1] == "numeric") {
            schema.columns.push_back({name, ColumnKind::numeric});
        } else if (fields[1] == "categorical") {
            schema.columns.push_back({name, ColumnKind::categorical});
        } else if (fields[1] == "label") {
            schema.label_column = name;
        } else if (fields[1] == "difficulty") {
            schema.difficulty_column = name;
        } else {
            throw ParseError("schema: unknown kind '" + std::string(fields[1]) + "'", line_no);
        }
    }
    if (schema.columns.empty()) throw InputError("schema has no feature columns: " + path.string());
    if (schema.label_column.empty()) throw InputError("schema has no label column: " + path.string());
    schema.vocabularies.resize(schema.columns.size());
    return schema;
}

std::string_view to_string(BinaryLabel label) noexcept {
    return label == BinaryLabel::normal ? "normal" : "anomalous";
}

BinaryLabel binarize_label(std::string_view label) {
    if (label.empty()) throw InputError("empty label");
    return label == "normal" ? BinaryLabel::normal : BinaryLabel::anomalous;
}

std::vector<BinaryLabel> Dataset::binary_labels() const {
    std::vector<BinaryLabel> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.binary_label());
    return out;
}

RawRecord parse_record(std::string_view line, const FeatureSchema& schema, std::size_t line_no) {
    const auto fields = split_fields(trim(line));
    if (fields.size() != schema.field_count()) {
        throw ParseError("expected " + std::to_string(schema.field_count()) + " fields, got " +
                             std::to_string(fields.size()),
                         line_no);
    }
    RawRecord record;
    record.values.reserve(schema.columns.size());
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        if (schema.columns[i].kind == ColumnKind::numeric) {
            double value = 0.0;
            if (!parse_finite(fields[i], value)) {
                throw ParseError("non-numeric value '" + std::string(fields[i]) + "' in column " +
                                     schema.columns[i].name,
                                 line_no);
            }
        } else if (fields[i].empty()) {
            throw ParseError("empty category in column " + schema.columns[i].name, line_no);
        }
        record.values.emplace_back(fields[i]);
    }
    const auto label = fields[schema.columns.size()];
    if (label.empty()) throw ParseError("empty label", line_no);
    record.label = std::string(label);
    if (!schema.difficulty_column.empty()) {
        const auto text = fields.back();
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), record.difficulty);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw ParseError("non-integer difficulty '" + std::string(text) + "'", line_no);
        }
    }
    return record;
}

std::string to_line(const RawRecord& record, const FeatureSchema& schema) {
    std::string line;
    for (const auto& v : record.values) {
        line += v;
        line += ',';
    }
    line += record.label;
    if (!schema.difficulty_column.empty()) {
        line += ',';
        line += std::to_string(record.difficulty);
    }
    return line;
}

std::vector<RawRecord> parse_nslkdd(std::istream& in, const FeatureSchema& schema) {
    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        records.push_back(parse_record(line, schema, line_no));
    }
    return records;
}

std::vector<RawRecord> parse_nslkdd(const std::filesystem::path& path, const FeatureSchema& schema) {
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path.string());
    try {
        return parse_nslkdd(in, schema);
    } catch (const ParseError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

Dataset concat_datasets(const Dataset& a, const Dataset& b) {
    if (!a.schema.same_layout(b.schema)) throw InputError("concat: schema mismatch");
    Dataset out{a.schema, {}};
    out.records.reserve(a.records.size() + b.records.size());
    out.records.insert(out.records.end(), a.records.begin(), a.records.end());
    out.records.insert(out.records.end(), b.records.begin(), b.records.end());
    return out;
}

Dataset drop_feature(Dataset data, std::string_view name) {
    const auto idx = data.schema.index_of(name);
    if (!idx) throw InputError("unknown column: " + std::string(name));
    const auto pos = static_cast<std::ptrdiff_t>(*idx);
    data.schema.columns.erase(data.schema.columns.begin() + pos);
    if (data.schema.vocabularies.size() > *idx) {
        data.schema.vocabularies.erase(data.schema.vocabularies.begin() + pos);
    }
    for (auto& r : data.records) r.values.erase(r.values.begin() + pos);
    return data;
}

void build_vocabularies(Dataset& data) {
    auto& schema = data.schema;
    schema.vocabularies.assign(schema.columns.size(), {});
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (schema.columns[c].kind != ColumnKind::categorical) continue;
        std::unordered_map<std::string_view, std::size_t> seen;
        auto& vocab = schema.vocabularies[c];
        for (const auto& r : data.records) {
            if (seen.emplace(r.values[c], vocab.size()).second) vocab.push_back(r.values[c]);
        }
    }
}

}  // namespace aeids
