#ifndef CENN_SYNTH_HPP
#define CENN_SYNTH_HPP

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "cenn/box.hpp"
#include "cenn/grid.hpp"

namespace cenn {

// Moving square/disc generator for desk-scale evaluation: programmable
// velocity, contrast, and optional background texture.
struct SynthSpec {
    int width = 240;
    int height = 80;
    int frames = 100;
    BoundingBox box{6, 30, 20, 20};  // initial object position
    double vx = 2.0;                 // cells per frame
    double vy = 0.0;
    bool disc = false;
    int object_gray = 30;            // dark object
    int background_gray = 225;       // light background
    double texture = 0.0;            // uniform +-texture gray jitter
    std::uint32_t texture_seed = 7;

    void validate() const {
        if (width < 1 || height < 1 || frames < 1)
            throw std::invalid_argument("SynthSpec: empty geometry");
        if (!box.inside(width, height))
            throw std::invalid_argument("SynthSpec: initial box outside frame");
    }
};

struct SynthSequence {
    std::vector<Image> frames;
    std::vector<BoundingBox> boxes;  // ground truth, 0-based
};

inline SynthSequence generate_sequence(const SynthSpec& spec) {
    spec.validate();
    SynthSequence seq;
    std::mt19937 rng(spec.texture_seed);
    std::uniform_real_distribution<double> jitter(-spec.texture, spec.texture);

    for (int f = 0; f < spec.frames; ++f) {
        BoundingBox b = spec.box;
        b.x = static_cast<int>(std::lround(spec.box.x + f * spec.vx));
        b.y = static_cast<int>(std::lround(spec.box.y + f * spec.vy));
        b = b.clipped(spec.width, spec.height);

        Image img(spec.width, spec.height, gray_to_signal(spec.background_gray));
        if (spec.texture > 0.0)
            for (double& v : img.data())
                v = gray_to_signal(
                    std::clamp(static_cast<int>(spec.background_gray + jitter(rng)), 0, 255));

        const double rx = (b.w - 1) / 2.0, ry = (b.h - 1) / 2.0;
        for (int r = b.y; r < b.y + b.h; ++r)
            for (int c = b.x; c < b.x + b.w; ++c) {
                if (spec.disc) {
                    const double dx = (c - b.x - rx) / std::max(rx, 0.5);
                    const double dy = (r - b.y - ry) / std::max(ry, 0.5);
                    if (dx * dx + dy * dy > 1.0) continue;
                }
                img.at(r, c) = gray_to_signal(spec.object_gray);
            }
        seq.frames.push_back(std::move(img));
        seq.boxes.push_back(b);
    }
    return seq;
}

}  // namespace cenn

#endif
