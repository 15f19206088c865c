#include "aeids/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "aeids/error.hpp"

namespace aeids {
namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
    if (s.size() >= width) return s;
    return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

/// Display width, counting each UTF-8 code point once.
std::size_t display_width(const std::string& s) {
    std::size_t w = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++w;
    }
    return w;
}

std::string pad_display(const std::string& s, std::size_t width) {
    const auto w = display_width(s);
    return w >= width ? s : std::string(width - w, ' ') + s;
}

double parse_double(const std::string& text, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("summary: bad number '" + text + "'", line_no);
    return v;
}

}  // namespace

void write_summary(std::ostream& out, const ExperimentSummary& summary) {
    out << "# aeids-summary v" << kSummaryFormatVersion << '\n';
    out << "# folds=" << summary.folds << '\n';
    out << "mode,classifier,metric,mean,std\n";
    for (const auto& r : summary.rows) {
        const std::string prefix = std::string(to_string(r.mode)) + "," + std::string(to_string(r.classifier)) + ",";
        const std::pair<const char*, Stat> stats[] = {
            {"accuracy", r.accuracy},
            {"precision", r.precision},
            {"recall", r.recall},
            {"f1", r.f1},
            {"cm_tn", {r.mean_cm.tn, r.std_cm.tn}},
            {"cm_fp", {r.mean_cm.fp, r.std_cm.fp}},
            {"cm_fn", {r.mean_cm.fn, r.std_cm.fn}},
            {"cm_tp", {r.mean_cm.tp, r.std_cm.tp}},
        };
        for (const auto& [name, s] : stats) out << prefix << name << ',' << num(s.mean) << ',' << num(s.std) << '\n';
    }
}

ExperimentSummary read_summary(std::istream& in) {
    ExperimentSummary summary;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw InputError("summary: empty file");
    ++line_no;
    const std::string magic = "# aeids-summary v";
    if (line.rfind(magic, 0) != 0) throw InputError("summary: not an aeids summary file");
    int version = 0;
    const std::string vtext = line.substr(magic.size());
    const auto [vp, vec] = std::from_chars(vtext.data(), vtext.data() + vtext.size(), version);
    if (vec != std::errc{} || vp != vtext.data() + vtext.size()) throw ParseError("summary: bad version '" + vtext + "'", 1);
    if (version != kSummaryFormatVersion) {
        throw VersionMismatch("summary: format version " + std::to_string(version) + ", expected " +
                              std::to_string(kSummaryFormatVersion));
    }
    // Keyed by first appearance so the row order of the file is kept.
    std::vector<SummaryRow> rows;
    std::map<std::pair<FeatureMode, ClassifierKind>, std::size_t> index;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# folds=", 0) == 0) {
            const std::string ftext = line.substr(8);
            const auto [fp, fec] = std::from_chars(ftext.data(), ftext.data() + ftext.size(), summary.folds);
            if (fec != std::errc{} || fp != ftext.data() + ftext.size()) {
                throw ParseError("summary: bad fold count '" + ftext + "'", line_no);
            }
            continue;
        }
        if (line.front() == '#' || line == "mode,classifier,metric,mean,std") continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 5) throw ParseError("summary: expected 5 fields", line_no);
        const auto key = std::make_pair(parse_feature_mode(f[0]), parse_classifier_kind(f[1]));
        auto [it, inserted] = index.emplace(key, rows.size());
        if (inserted) {
            rows.emplace_back();
            rows.back().mode = key.first;
            rows.back().classifier = key.second;
        }
        auto& r = rows[it->second];
        const Stat s{parse_double(f[3], line_no), parse_double(f[4], line_no)};
        const auto& m = f[2];
        if (m == "accuracy") r.accuracy = s;
        else if (m == "precision") r.precision = s;
        else if (m == "recall") r.recall = s;
        else if (m == "f1") r.f1 = s;
        else if (m == "cm_tn") r.mean_cm.tn = s.mean, r.std_cm.tn = s.std;
        else if (m == "cm_fp") r.mean_cm.fp = s.mean, r.std_cm.fp = s.std;
        else if (m == "cm_fn") r.mean_cm.fn = s.mean, r.std_cm.fn = s.std;
        else if (m == "cm_tp") r.mean_cm.tp = s.mean, r.std_cm.tp = s.std;
        else throw ParseError("summary: unknown metric '" + m + "'", line_no);
    }
    for (auto& r : rows) r.folds = summary.folds;
    summary.rows = std::move(rows);
    return summary;
}

ExperimentSummary read_summary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("file not found: " + path.string());
    return read_summary(in);
}

void write_fold_details(std::ostream& out, const ExperimentSummary& summary) {
    out << "# per-fold confusion cells (positive class = anomalous)\n";
    out << pad("fold", 4, true) << "  " << pad("mode", 10, true) << "  " << pad("classifier", 10, true) << pad("tn", 9)
        << pad("fp", 9) << pad("fn", 9) << pad("tp", 9) << pad("accuracy", 10) << pad("precision", 10)
        << pad("recall", 10) << pad("f1", 10) << '\n';
    for (const auto& o : summary.outcomes) {
        out << pad(std::to_string(o.fold + 1), 4, true) << "  " << pad(std::string(to_string(o.mode)), 10, true) << "  "
            << pad(std::string(to_string(o.classifier)), 10, true) << pad(std::to_string(o.cm.tn), 9)
            << pad(std::to_string(o.cm.fp), 9) << pad(std::to_string(o.cm.fn), 9) << pad(std::to_string(o.cm.tp), 9)
            << pad(fixed(o.metrics.accuracy, 6), 10) << pad(fixed(o.metrics.precision, 6), 10)
            << pad(fixed(o.metrics.recall, 6), 10) << pad(fixed(o.metrics.f1, 6), 10) << '\n';
    }
    if (!summary.fold_info.empty()) {
        out << "\n# per-fold split sizes\n";
        out << pad("fold", 4, true) << pad("ae_train", 10) << pad("thr_norm", 10) << pad("thr_anom", 10)
            << pad("test", 10) << pad("unused_anom", 12) << pad("ae_loss", 14) << '\n';
        for (const auto& i : summary.fold_info) {
            out << pad(std::to_string(i.fold + 1), 4, true) << pad(std::to_string(i.ae_train), 10)
                << pad(std::to_string(i.thr_normal), 10) << pad(std::to_string(i.thr_anomalous), 10)
                << pad(std::to_string(i.test), 10) << pad(std::to_string(i.discarded_anomalous), 12)
                << pad(num(i.final_ae_loss).substr(0, 12), 14) << '\n';
        }
    }
}

void render_report(std::ostream& out, const ExperimentSummary& summary) {
    std::vector<FeatureMode> modes;
    for (const auto& r : summary.rows) {
        if (std::find(modes.begin(), modes.end(), r.mode) == modes.end()) modes.push_back(r.mode);
    }
    constexpr std::size_t label_w = 10;
    constexpr std::size_t col_w = 17;
    out << "Mean +/- std over " << summary.folds << " folds (positive class = anomalous)\n";
    for (auto mode : modes) {
        std::vector<const SummaryRow*> rows;
        for (const auto& r : summary.rows) {
            if (r.mode == mode) rows.push_back(&r);
        }
        out << "\nFeatures: " << to_string(mode) << '\n';
        out << pad("", label_w, true);
        for (const auto* r : rows) out << pad(std::string(to_string(r->classifier)), col_w);
        out << '\n';
        const std::pair<const char*, Stat SummaryRow::*> metrics[] = {
            {"accuracy", &SummaryRow::accuracy},
            {"precision", &SummaryRow::precision},
            {"recall", &SummaryRow::recall},
            {"f1-score", &SummaryRow::f1},
        };
        for (const auto& [name, member] : metrics) {
            out << pad(name, label_w, true);
            for (const auto* r : rows) {
                const Stat& s = r->*member;
                out << pad_display(fixed(s.mean, 3) + " ± " + fixed(s.std, 3), col_w);
            }
            out << '\n';
        }
    }
    out << "\nMean confusion matrices (rows: actual, columns: predicted)\n";
    for (const auto& r : summary.rows) {
        out << '\n' << to_string(r.classifier) << " (" << to_string(r.mode) << ")\n";
        out << pad("", 18, true) << pad("normal", 12) << pad("anomalous", 12) << '\n';
        out << pad("  normal", 18, true) << pad(fixed(r.mean_cm.tn, 1), 12) << pad(fixed(r.mean_cm.fp, 1), 12) << '\n';
        out << pad("  anomalous", 18, true) << pad(fixed(r.mean_cm.fn, 1), 12) << pad(fixed(r.mean_cm.tp, 1), 12)
            << '\n';
    }
}

}  // namespace aeids
