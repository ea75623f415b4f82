#ifndef CENN_METRICS_HPP
#define CENN_METRICS_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cenn/box.hpp"

namespace cenn {

// Intersection over union of two boxes; 0 when disjoint.
inline double overlap(const BoundingBox& rt, const BoundingBox& ra) {
    if (!rt.valid() || !ra.valid())
        throw std::invalid_argument("overlap: degenerate box");
    const long x0 = std::max(rt.x, ra.x);
    const long y0 = std::max(rt.y, ra.y);
    const long x1 = std::min(rt.x + rt.w, ra.x + ra.w);
    const long y1 = std::min(rt.y + rt.h, ra.y + ra.h);
    const long inter = std::max(0L, x1 - x0) * std::max(0L, y1 - y0);
    const long uni = rt.area() + ra.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Fraction of frames whose overlap reaches each of 101 thresholds in [0, 1].
struct SuccessCurve {
    static constexpr int kPoints = 101;
    std::vector<double> thresholds;    // 0.00, 0.01, ..., 1.00
    std::vector<double> success_rate;  // non-increasing
};

inline SuccessCurve success_curve(const std::vector<double>& overlaps) {
    if (overlaps.empty())
        throw std::invalid_argument("success_curve: no overlap values");
    SuccessCurve c;
    c.thresholds.resize(SuccessCurve::kPoints);
    c.success_rate.resize(SuccessCurve::kPoints);
    const double n = static_cast<double>(overlaps.size());
    for (int i = 0; i < SuccessCurve::kPoints; ++i) {
        const double t = i / 100.0;
        c.thresholds[i] = t;
        long hit = 0;
        for (double s : overlaps)
            if (s >= t) ++hit;
        c.success_rate[i] = hit / n;
    }
    c.success_rate[0] = 1.0;  // S >= 0 always holds
    return c;
}

// Trapezoidal area under the success curve over t in [0, 1].
inline double auc(const SuccessCurve& c) {
    double a = 0.0;
    for (int i = 1; i < SuccessCurve::kPoints; ++i)
        a += 0.5 * (c.success_rate[i - 1] + c.success_rate[i]) *
             (c.thresholds[i] - c.thresholds[i - 1]);
    return a;
}

}  // namespace cenn

#endif
