#include <cmath>

#include "aeids/classifiers.hpp"
#include "aeids/error.hpp"

namespace aeids {

ReferenceThreshold fit_reference(std::span<const double> reconstruction_errors, double z_ac) {
    if (reconstruction_errors.empty()) throw InputError("reference threshold: no reconstruction errors");
    const double n = static_cast<double>(reconstruction_errors.size());
    double sum = 0.0;
    for (double re : reconstruction_errors) sum += re;
    const double mean = sum / n;
    double ss = 0.0;
    for (double re : reconstruction_errors) ss += (re - mean) * (re - mean);
    ReferenceThreshold thr;
    thr.mean = mean;
    thr.stddev = std::sqrt(ss / n);
    thr.z_ac = z_ac;
    thr.threshold = mean + z_ac * thr.stddev;
    return thr;
}

BinaryLabel classify_reference(const ReferenceThreshold& thr, double re) {
    return re <= thr.threshold ? BinaryLabel::normal : BinaryLabel::anomalous;
}

}  // namespace aeids
