#pragma once

#include <filesystem>
#include <iosfwd>

#include "aeids/evaluation.hpp"

namespace aeids {

inline constexpr int kSummaryFormatVersion = 1;

/// Comma-separated summary: a `# aeids-summary v<version>` line, a
/// `# folds=<k>` line, the header `mode,classifier,metric,mean,std`, then
/// accuracy/precision/recall/f1 and cm_tn/cm_fp/cm_fn/cm_tp rows for every
/// grid cell. Numbers use %.17g so files are byte-stable across runs.
void write_summary(std::ostream& out, const ExperimentSummary& summary);

/// Rows only (no per-fold outcomes). Throws VersionMismatch on a different
/// format version and InputError on malformed content.
ExperimentSummary read_summary(std::istream& in);
ExperimentSummary read_summary(const std::filesystem::path& path);

/// Whitespace-aligned per-fold confusion cells and metrics.
void write_fold_details(std::ostream& out, const ExperimentSummary& summary);

/// Mean +/- std tables per feature mode followed by the mean confusion
/// matrices.
void render_report(std::ostream& out, const ExperimentSummary& summary);

}  // namespace aeids
