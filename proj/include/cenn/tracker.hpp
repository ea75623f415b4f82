#ifndef CENN_TRACKER_HPP
#define CENN_TRACKER_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cenn/box.hpp"
#include "cenn/grid.hpp"
#include "cenn/kalman.hpp"
#include "cenn/solver.hpp"
#include "cenn/templates.hpp"
#include "cenn/trainer.hpp"

namespace cenn {

struct TrackerConfig {
    int dilation_radius = 3;   // max expected inter-frame motion, cells
    double k_prop = kDefaultPropagationFactor;
    double weak_q = 1.0;       // motion filter: trust measurements
    double weak_r = 4.0;
    double strong_q = 0.01;    // size filter: heavy smoothing
    double strong_r = 25.0;
    int min_box_dim = 4;

    void validate() const {
        if (dilation_radius < 1)
            throw std::invalid_argument("TrackerConfig: dilation radius must be >= 1");
        if (min_box_dim < 1)
            throw std::invalid_argument("TrackerConfig: min box dim must be >= 1");
    }
};

struct TrackState {
    TrainedModel model;
    BoundingBox box;
    Image location_mask;       // dilated previous object support
    KalmanFilter motion_kf;    // weak: (cx, cy)
    KalmanFilter size_kf;      // strong: (w, h)
    int frame_index = 0;
    bool lost = false;
    long object_area = 0;      // cells in last object mask (0 when lost)
};

struct Localization {
    BoundingBox measurement;
    Image object_mask;
};

// Weighted sum of the pooled DoG responses, normalized to [-1, 1].
inline Image featured_image(const Image& frame, const TrainedModel& model,
                            const SolverConfig& cfg = {}) {
    model.validate();
    Image sum(frame.width(), frame.height(), 0.0);
    for (std::size_t k = 0; k < model.kernels.size(); ++k) {
        const Image resp = pool_response(apply_dog(frame, model.kernels[k], cfg), cfg);
        const double w = model.weights[k];
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * resp[i];
    }
    return normalize_featured(std::move(sum));
}

// THRES -> LOGAND with the location mask -> RECALL -> SHADOWL / SHADOWD.
// Returns nothing when no object pixel survives (target lost).
inline std::optional<Localization> localize(const TrackState& state, const Image& featured,
                                            const TrackerConfig& tcfg = {},
                                            const SolverConfig& cfg = {}) {
    const Image binary = threshold_image(featured, state.model.final_threshold, cfg);
    const Image markers = and_image(binary, state.location_mask, cfg);
    if (foreground_area(markers) == 0) return std::nullopt;
    const Image object = recall_image(markers, binary, cfg, tcfg.k_prop);

    const Image left = shadow_image(object, ShadowDirection::Left, cfg, tcfg.k_prop);
    const Image down = shadow_image(object, ShadowDirection::Down, cfg, tcfg.k_prop);

    int y0 = -1, y1 = -1;
    for (int r = 0; r < left.height(); ++r)
        if (left.at(r, 0) > 0.0) {
            if (y0 < 0) y0 = r;
            y1 = r;
        }
    int x0 = -1, x1 = -1;
    const int bottom = down.height() - 1;
    for (int c = 0; c < down.width(); ++c)
        if (down.at(bottom, c) > 0.0) {
            if (x0 < 0) x0 = c;
            x1 = c;
        }
    if (x0 < 0 || y0 < 0) return std::nullopt;

    Localization loc;
    loc.measurement = BoundingBox{x0, y0, x1 - x0 + 1, y1 - y0 + 1};
    loc.object_mask = object;
    return loc;
}

// sqrt-area rule: box scales with the response area relative to frame one.
inline std::pair<double, double> resize_rule(const TrackState& state, long object_area) {
    if (!(state.model.reference_response_area > 0.0))
        throw std::invalid_argument("resize_rule: reference response area must be positive");
    const double scale =
        std::sqrt(static_cast<double>(object_area) / state.model.reference_response_area);
    const double w = state.model.ground_truth_box.w * scale;
    const double h = state.model.ground_truth_box.h * scale;
    return {w, h};
}

namespace detail {

inline BoundingBox filtered_box(const TrackState& state, const TrackerConfig& tcfg,
                                int frame_w, int frame_h) {
    const double cx = state.motion_kf.p1();
    const double cy = state.motion_kf.p2();
    int w = static_cast<int>(std::lround(state.size_kf.p1()));
    int h = static_cast<int>(std::lround(state.size_kf.p2()));
    w = std::clamp(w, tcfg.min_box_dim, frame_w);
    h = std::clamp(h, tcfg.min_box_dim, frame_h);
    BoundingBox box;
    box.w = w;
    box.h = h;
    box.x = static_cast<int>(std::lround(cx - (w - 1) / 2.0));
    box.y = static_cast<int>(std::lround(cy - (h - 1) / 2.0));
    return box.clipped(frame_w, frame_h);
}

}  // namespace detail

// Initialize from the ground-truth box of the first frame.  The reference
// response area is re-measured by localizing on that frame so that later
// area ratios compare like with like; training's estimate is the fallback.
inline TrackState init(const TrainedModel& model, const Image& first_frame,
                       const BoundingBox& box, const TrackerConfig& tcfg = {},
                       const SolverConfig& cfg = {}) {
    tcfg.validate();
    model.validate();
    if (!box.inside(first_frame.width(), first_frame.height()))
        throw std::invalid_argument("init: box outside frame");

    TrackState state;
    state.model = model;
    state.box = box;
    state.location_mask = dilate_image(
        box_mask(box, first_frame.width(), first_frame.height()), tcfg.dilation_radius, cfg);
    state.motion_kf = KalmanFilter(box.cx(), box.cy(), tcfg.weak_q, tcfg.weak_r);
    state.size_kf = KalmanFilter(box.w, box.h, tcfg.strong_q, tcfg.strong_r);
    state.frame_index = 0;

    const Image featured = featured_image(first_frame, model, cfg);
    if (auto loc = localize(state, featured, tcfg, cfg)) {
        state.object_area = foreground_area(loc->object_mask);
        state.model.reference_response_area = static_cast<double>(state.object_area);
        state.location_mask = dilate_image(loc->object_mask, tcfg.dilation_radius, cfg);
    }
    return state;
}

inline std::pair<double, double> mask_centroid(const Image& mask) {
    double sr = 0.0, sc = 0.0;
    long n = 0;
    for (int r = 0; r < mask.height(); ++r)
        for (int c = 0; c < mask.width(); ++c)
            if (mask.at(r, c) > 0.0) {
                sr += r;
                sc += c;
                ++n;
            }
    if (n == 0) throw std::invalid_argument("mask_centroid: empty mask");
    return {sc / n, sr / n};  // (cx, cy)
}

// One tracking step: feature extraction, localization, Kalman filtering, and
// the location mask for the next frame.  Returns the output box.
inline BoundingBox process_frame(TrackState& state, const Image& frame,
                                 const TrackerConfig& tcfg = {},
                                 const SolverConfig& cfg = {}) {
    tcfg.validate();
    if (frame.width() != state.location_mask.width() ||
        frame.height() != state.location_mask.height())
        throw std::invalid_argument("process_frame: frame dimension mismatch");

    const Image featured = featured_image(frame, state.model, cfg);
    const auto loc = localize(state, featured, tcfg, cfg);

    state.motion_kf.predict();
    state.size_kf.predict();

    if (loc) {
        const auto [cx, cy] = mask_centroid(loc->object_mask);
        state.motion_kf.update(cx, cy);
        state.object_area = foreground_area(loc->object_mask);
        const auto [w, h] = resize_rule(state, state.object_area);
        state.size_kf.update(std::clamp(w, double(tcfg.min_box_dim), double(frame.width())),
                             std::clamp(h, double(tcfg.min_box_dim), double(frame.height())));
        state.lost = false;
    } else {
        // coast: keep the prediction, re-acquire around the predicted box
        state.lost = true;
        state.object_area = 0;
    }

    state.box = detail::filtered_box(state, tcfg, frame.width(), frame.height());
    state.location_mask =
        loc ? dilate_image(loc->object_mask, tcfg.dilation_radius, cfg)
            : dilate_image(box_mask(state.box, frame.width(), frame.height()),
                           tcfg.dilation_radius, cfg);
    ++state.frame_index;
    return state.box;
}

}  // namespace cenn

#endif
