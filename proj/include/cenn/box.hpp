#ifndef CENN_BOX_HPP
#define CENN_BOX_HPP

#include <algorithm>
#include <stdexcept>

#include "cenn/grid.hpp"

namespace cenn {

// Axis-aligned box, top-left corner (x, y), in cell coordinates.
struct BoundingBox {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    long area() const { return static_cast<long>(w) * h; }
    double cx() const { return x + (w - 1) / 2.0; }
    double cy() const { return y + (h - 1) / 2.0; }

    bool valid() const { return w >= 1 && h >= 1; }
    bool inside(int frame_w, int frame_h) const {
        return valid() && x >= 0 && y >= 0 && x + w <= frame_w && y + h <= frame_h;
    }
    bool contains(int row, int col) const {
        return col >= x && col < x + w && row >= y && row < y + h;
    }

    BoundingBox clipped(int frame_w, int frame_h) const {
        BoundingBox b = *this;
        b.w = std::min(b.w, frame_w);
        b.h = std::min(b.h, frame_h);
        b.x = std::clamp(b.x, 0, frame_w - b.w);
        b.y = std::clamp(b.y, 0, frame_h - b.h);
        return b;
    }

    bool operator==(const BoundingBox&) const = default;
};

// +1 inside the box, -1 outside.
inline Image box_mask(const BoundingBox& box, int frame_w, int frame_h) {
    if (!box.valid())
        throw std::invalid_argument("box_mask: degenerate box");
    Image mask(frame_w, frame_h, -1.0);
    const int r1 = std::min(box.y + box.h, frame_h);
    const int c1 = std::min(box.x + box.w, frame_w);
    for (int r = std::max(box.y, 0); r < r1; ++r)
        for (int c = std::max(box.x, 0); c < c1; ++c)
            mask.at(r, c) = 1.0;
    return mask;
}

inline long foreground_area(const Image& mask) {
    long n = 0;
    for (double v : mask.data())
        if (v > 0.0) ++n;
    return n;
}

}  // namespace cenn

#endif
