#ifndef CENN_GRID_HPP
#define CENN_GRID_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cenn {

// Signal convention: +1 = black/foreground, -1 = white/background.
inline double gray_to_signal(int gray) {
    return 1.0 - 2.0 * static_cast<double>(gray) / 255.0;
}

inline int signal_to_gray(double v) {
    double g = (1.0 - std::clamp(v, -1.0, 1.0)) * 255.0 / 2.0;
    return static_cast<int>(std::lround(g));
}

// Plain 2-D field of doubles, row major.
class Image {
public:
    Image() = default;
    Image(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("Image: dimensions must be positive");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return data_.size(); }

    double& at(int row, int col) { return data_[static_cast<std::size_t>(row) * width_ + col]; }
    double at(int row, int col) const { return data_[static_cast<std::size_t>(row) * width_ + col]; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool same_shape(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_;
    }

    bool operator==(const Image& other) const {
        return width_ == other.width_ && height_ == other.height_ && data_ == other.data_;
    }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    double mean() const {
        double s = 0.0;
        for (double v : data_) s += v;
        return s / static_cast<double>(data_.size());
    }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

enum class Boundary : std::uint8_t {
    ZeroFlux,    // mirror the edge cell
    FixedWhite,  // out-of-grid neighbors read -1
    FixedBlack,  // out-of-grid neighbors read +1
};

// Cell array: state x, input u, and the boundary rule used by template runs.
struct CellGrid {
    Image state;
    Image input;
    Boundary boundary = Boundary::ZeroFlux;

    CellGrid() = default;
    explicit CellGrid(Image img, Boundary b = Boundary::ZeroFlux)
        : state(img), input(std::move(img)), boundary(b) {}
    CellGrid(Image x, Image u, Boundary b = Boundary::ZeroFlux)
        : state(std::move(x)), input(std::move(u)), boundary(b) {
        if (!state.same_shape(input))
            throw std::invalid_argument("CellGrid: state/input shape mismatch");
    }

    int width() const { return state.width(); }
    int height() const { return state.height(); }
};

// Snap every state value to the nearest of 2^bits uniform levels on [-1, +1].
// Models the ADC -> register -> DAC round trip of the processing unit.
inline Image quantize(const Image& img, int bits) {
    if (bits < 1 || bits > 16)
        throw std::invalid_argument("quantize: bits must be in [1, 16]");
    const int levels = (1 << bits) - 1;  // spacing 2/levels
    Image out = img;
    for (double& v : out.data()) {
        double t = (std::clamp(v, -1.0, 1.0) + 1.0) * 0.5 * levels;
        v = -1.0 + 2.0 * std::round(t) / levels;
    }
    return out;
}

inline CellGrid quantize(const CellGrid& grid, int bits) {
    CellGrid out = grid;
    out.state = quantize(grid.state, bits);
    return out;
}

}  // namespace cenn

#endif
