#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aeids {

enum class ColumnKind : std::uint8_t { numeric, categorical };

struct Column {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;

    friend bool operator==(const Column&, const Column&) = default;
};

/// Typed catalog of the feature columns of a flow dataset. A record line holds
/// the feature columns in order, then the label field, then (optionally) the
/// difficulty field.
struct FeatureSchema {
    std::vector<Column> columns;
    /// Parallel to `columns`; empty for numeric columns. Filled by
    /// build_vocabularies(), in first-seen order.
    std::vector<std::vector<std::string>> vocabularies;
    std::string label_column = "label";
    /// Empty when the file carries no difficulty field.
    std::string difficulty_column = "difficulty";

    std::size_t feature_count() const noexcept { return columns.size(); }
    /// Number of comma-separated fields per line.
    std::size_t field_count() const noexcept {
        return columns.size() + 1 + (difficulty_column.empty() ? 0 : 1);
    }
    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Same columns, kinds and trailing fields. Vocabularies are not compared.
    bool same_layout(const FeatureSchema& other) const;
};

/// Built-in schema for the 41 NSL-KDD features (protocol_type, service and
/// flag categorical; everything else numeric), followed by label and
/// difficulty.
FeatureSchema nslkdd_schema();

/// Reads a schema override: one `name,kind` line per column where kind is
/// numeric, categorical, label or difficulty. Blank lines and `#` comments are
/// ignored. Without a difficulty line the schema has no difficulty field.
FeatureSchema load_schema(const std::filesystem::path& path);

enum class BinaryLabel : std::uint8_t { normal = 0, anomalous = 1 };

std::string_view to_string(BinaryLabel label) noexcept;

/// "normal" maps to normal; every other non-empty label is anomalous.
BinaryLabel binarize_label(std::string_view label);

struct RawRecord {
    std::vector<std::string> values;
    std::string label;
    /// Parsed for validation and re-serialization only. Never a feature.
    int difficulty = 0;

    BinaryLabel binary_label() const { return binarize_label(label); }

    friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct Dataset {
    FeatureSchema schema;
    std::vector<RawRecord> records;

    std::vector<BinaryLabel> binary_labels() const;
};

/// Parses one line. `line_no` is 1-based and only used for messages.
RawRecord parse_record(std::string_view line, const FeatureSchema& schema, std::size_t line_no);

/// Joins the fields back into a comma-separated line.
std::string to_line(const RawRecord& record, const FeatureSchema& schema);

std::vector<RawRecord> parse_nslkdd(std::istream& in, const FeatureSchema& schema);
std::vector<RawRecord> parse_nslkdd(const std::filesystem::path& path, const FeatureSchema& schema);

/// `a` followed by `b`. Throws InputError if the layouts differ.
Dataset concat_datasets(const Dataset& a, const Dataset& b);

/// Removes one column from the schema and from every record.
Dataset drop_feature(Dataset data, std::string_view name);

/// Recomputes every categorical vocabulary from the records, first-seen order.
void build_vocabularies(Dataset& data);

}  // namespace aeids
