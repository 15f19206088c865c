#include "aeids/evaluation.hpp"

#include <algorithm>

#include "aeids/error.hpp"

namespace aeids {

ConfusionMatrix confusion(std::span<const BinaryLabel> predictions, std::span<const BinaryLabel> truth) {
    if (predictions.size() != truth.size()) throw Error("confusion: prediction/truth length mismatch");
    if (predictions.empty()) throw Error("confusion: no predictions");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool actual = truth[i] == BinaryLabel::anomalous;
        const bool predicted = predictions[i] == BinaryLabel::anomalous;
        if (actual) (predicted ? cm.tp : cm.fn)++;
        else (predicted ? cm.fp : cm.tn)++;
    }
    return cm;
}

Stat mean_and_std(std::span<const double> values) {
    if (values.empty()) throw Error("mean_and_std: no values");
    if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
        return {values.front(), 0.0};
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    Stat s;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

SummaryRow aggregate(std::span<const FoldOutcome> outcomes) {
    if (outcomes.empty()) throw Error("aggregate: no folds");
    SummaryRow row;
    row.mode = outcomes.front().mode;
    row.classifier = outcomes.front().classifier;
    row.folds = outcomes.size();
    std::vector<double> acc, prec, rec, f1, tn, fp, fn, tp;
    for (const auto& o : outcomes) {
        if (o.mode != row.mode || o.classifier != row.classifier) {
            throw Error("aggregate: outcomes mix feature modes or classifiers");
        }
        acc.push_back(o.metrics.accuracy);
        prec.push_back(o.metrics.precision);
        rec.push_back(o.metrics.recall);
        f1.push_back(o.metrics.f1);
        tn.push_back(static_cast<double>(o.cm.tn));
        fp.push_back(static_cast<double>(o.cm.fp));
        fn.push_back(static_cast<double>(o.cm.fn));
        tp.push_back(static_cast<double>(o.cm.tp));
    }
    row.accuracy = mean_and_std(acc);
    row.precision = mean_and_std(prec);
    row.recall = mean_and_std(rec);
    row.f1 = mean_and_std(f1);
    const auto stn = mean_and_std(tn), sfp = mean_and_std(fp), sfn = mean_and_std(fn), stp = mean_and_std(tp);
    row.mean_cm = {stn.mean, sfp.mean, sfn.mean, stp.mean};
    row.std_cm = {stn.std, sfp.std, sfn.std, stp.std};
    return row;
}

const SummaryRow* ExperimentSummary::find(FeatureMode mode, ClassifierKind classifier) const {
    for (const auto& r : rows) {
        if (r.mode == mode && r.classifier == classifier) return &r;
    }
    return nullptr;
}

}  // namespace aeids
