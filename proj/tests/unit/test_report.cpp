#include <gtest/gtest.h>

#include <sstream>

#include "aeids/error.hpp"
#include "aeids/report.hpp"

using namespace aeids;

namespace {

ExperimentSummary sample_summary() {
    ExperimentSummary s;
    s.folds = 10;
    for (auto kind : kAllClassifiers) {
        SummaryRow r;
        r.mode = FeatureMode::re_only;
        r.classifier = kind;
        r.folds = 10;
        r.accuracy = {0.907, 0.011};
        r.precision = {0.1 + 0.1 * static_cast<double>(kind), 0.02};
        r.recall = {1.0 / 3.0, 0.0};
        r.f1 = {0.5, 0.125};
        r.mean_cm = {7368.3, 337, 1965.3, 5181.9};
        r.std_cm = {10.5, 1, 2, 3};
        s.rows.push_back(r);
    }
    return s;
}

}  // namespace

TEST(Report, SummaryRoundTrip) {
    const auto s = sample_summary();
    std::ostringstream out;
    write_summary(out, s);
    const auto text = out.str();
    EXPECT_EQ(text.rfind("# aeids-summary v1\n# folds=10\nmode,classifier,metric,mean,std\n", 0), 0u);
    EXPECT_NE(text.find("re_only,knn,accuracy,0.90700000000000003,0.010999999999999999\n"), std::string::npos);
    std::istringstream in(text);
    const auto back = read_summary(in);
    ASSERT_EQ(back.rows.size(), 4u);
    EXPECT_EQ(back.folds, 10u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(back.rows[i].classifier, s.rows[i].classifier);
        EXPECT_EQ(back.rows[i].recall.mean, 1.0 / 3.0);
        EXPECT_EQ(back.rows[i].mean_cm, s.rows[i].mean_cm);
    }
    std::ostringstream again;
    write_summary(again, back);
    EXPECT_EQ(again.str(), text);
}

TEST(Report, RejectsOtherVersionsAndGarbage) {
    std::istringstream v2("# aeids-summary v2\n");
    EXPECT_THROW(read_summary(v2), VersionMismatch);
    std::istringstream junk("hello\n");
    EXPECT_THROW(read_summary(junk), InputError);
    std::istringstream bad("# aeids-summary v1\n# folds=2\nre_only,knn,accuracy,abc,0\n");
    try {
        read_summary(bad);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(read_summary(std::filesystem::path("/nonexistent/summary.csv")), InputError);
}

TEST(Report, RenderShowsFourMetricsPerMethodAndRealCells) {
    std::ostringstream out;
    render_report(out, sample_summary());
    const auto text = out.str();
    EXPECT_NE(text.find("Features: re_only"), std::string::npos);
    std::size_t metric_lines = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        for (const char* m : {"accuracy", "precision", "recall", "f1-score"}) {
            if (line.rfind(m, 0) == 0) {
                ++metric_lines;
                std::size_t cells = 0;
                for (std::size_t p = line.find("±"); p != std::string::npos; p = line.find("±", p + 1)) ++cells;
                EXPECT_EQ(cells, 4u) << line;
            }
        }
    }
    EXPECT_EQ(metric_lines, 4u);
    EXPECT_NE(text.find("0.907 ± 0.011"), std::string::npos);
    EXPECT_NE(text.find("7368.3"), std::string::npos);
    EXPECT_NE(text.find("1965.3"), std::string::npos);
}
