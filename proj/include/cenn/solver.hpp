#ifndef CENN_SOLVER_HPP
#define CENN_SOLVER_HPP

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cenn/cell_template.hpp"
#include "cenn/grid.hpp"

namespace cenn {

// Explicit Euler settings. R = C = 1 internally; physical time enters only
// through tau_ns.
struct SolverConfig {
    double dt_ns = 0.1;
    double tau_ns = 1.0;

    void validate() const {
        if (!(dt_ns > 0.0) || !(tau_ns > 0.0))
            throw std::invalid_argument("SolverConfig: dt and tau must be positive");
        if (dt_ns > tau_ns / 2.0)
            throw std::invalid_argument("SolverConfig: dt must be <= tau/2");
    }
};

// Piecewise-linear saturation 0.5*(|x+1| - |x-1|): identity on [-1, +1],
// clamped outside.  Written as a clamp so saturated outputs are exact.
inline double output(double x) {
    return x > 1.0 ? 1.0 : (x < -1.0 ? -1.0 : x);
}

inline Image output_image(const Image& state) {
    Image y = state;
    for (double& v : y.data()) v = output(v);
    return y;
}

namespace detail {

inline int resolve_index(int i, int n, Boundary b, bool& in_grid) {
    if (i >= 0 && i < n) {
        in_grid = true;
        return i;
    }
    in_grid = (b == Boundary::ZeroFlux);
    return i < 0 ? 0 : n - 1;  // mirror; ignored for fixed boundaries
}

// Nonzero template entries in row-major order, with flat-index offsets for
// interior cells.  Keeping row-major order makes the optimized update
// bit-identical to a naive quadruple loop (skipped zero entries contribute
// exactly +-0.0 to a non-negative-zero accumulator).
struct EntryList {
    struct Entry {
        int dr, dc;
        long flat;  // dr*width + dc
        double weight;
    };
    std::vector<Entry> items;

    EntryList(const std::vector<double>& m, int radius, int width) {
        const int side = 2 * radius + 1;
        for (int dr = -radius; dr <= radius; ++dr)
            for (int dc = -radius; dc <= radius; ++dc) {
                const double w = m[static_cast<std::size_t>(dr + radius) * side + (dc + radius)];
                if (w != 0.0)
                    items.push_back({dr, dc, static_cast<long>(dr) * width + dc, w});
            }
    }
};

// One Euler update into `next`.
inline void euler_step(const Image& state, const Image& y, const Image& input,
                       Boundary boundary, const Template& t, const EntryList& ea,
                       const EntryList& eb, double dt_over_tau, Image& next) {
    const int h = state.height();
    const int w = state.width();
    const int r = t.radius;
    const double fixed = boundary == Boundary::FixedBlack ? 1.0 : -1.0;
    const double bias = t.bias;
    const double* yd = y.data().data();
    const double* ud = input.data().data();
    const double* xd = state.data().data();
    double* nd = next.data().data();

    auto border_cell = [&](int row, int col) {
        double sa = 0.0;
        for (const auto& e : ea.items) {
            bool row_in = false, col_in = false;
            const int nr = resolve_index(row + e.dr, h, boundary, row_in);
            const int nc = resolve_index(col + e.dc, w, boundary, col_in);
            sa += e.weight * (row_in && col_in ? yd[static_cast<long>(nr) * w + nc]
                                               : output(fixed));
        }
        double sb = 0.0;
        for (const auto& e : eb.items) {
            bool row_in = false, col_in = false;
            const int nr = resolve_index(row + e.dr, h, boundary, row_in);
            const int nc = resolve_index(col + e.dc, w, boundary, col_in);
            sb += e.weight * (row_in && col_in ? ud[static_cast<long>(nr) * w + nc] : fixed);
        }
        const double x = xd[static_cast<long>(row) * w + col];
        nd[static_cast<long>(row) * w + col] = x + dt_over_tau * (-x + sa + sb + bias);
    };

    for (int row = 0; row < h; ++row) {
        const bool row_interior = row >= r && row < h - r;
        if (!row_interior || w <= 2 * r) {
            for (int col = 0; col < w; ++col) border_cell(row, col);
            continue;
        }
        for (int col = 0; col < r; ++col) border_cell(row, col);
        const long base = static_cast<long>(row) * w;
        for (int col = r; col < w - r; ++col) {
            const long i = base + col;
            double sa = 0.0;
            for (const auto& e : ea.items) sa += e.weight * yd[i + e.flat];
            double sb = 0.0;
            for (const auto& e : eb.items) sb += e.weight * ud[i + e.flat];
            const double x = xd[i];
            nd[i] = x + dt_over_tau * (-x + sa + sb + bias);
        }
        for (int col = w - r; col < w; ++col) border_cell(row, col);
    }
}

inline std::size_t step_count(double duration_ns, double dt_ns) {
    if (duration_ns <= 0.0) return 0;
    return static_cast<std::size_t>(std::ceil(duration_ns / dt_ns - 1e-9));
}

}  // namespace detail

// One explicit-Euler update of every cell; input is untouched.
inline CellGrid step(CellGrid grid, const Template& t, const SolverConfig& cfg) {
    cfg.validate();
    t.validate();
    if (!grid.state.all_finite() || !grid.input.all_finite())
        throw std::runtime_error("step: non-finite state or input");
    Image next(grid.width(), grid.height());
    const Image y = output_image(grid.state);
    const detail::EntryList ea(t.feedback, t.radius, grid.width());
    const detail::EntryList eb(t.feedforward, t.radius, grid.width());
    detail::euler_step(grid.state, y, grid.input, grid.boundary, t, ea, eb,
                       cfg.dt_ns / cfg.tau_ns, next);
    grid.state = std::move(next);
    return grid;
}

// Run the template for its duration: ceil(duration/dt) Euler steps.
inline CellGrid run(CellGrid grid, const Template& t, const SolverConfig& cfg) {
    cfg.validate();
    t.validate();
    if (!grid.state.all_finite() || !grid.input.all_finite())
        throw std::runtime_error("run: non-finite state or input");
    const std::size_t n = detail::step_count(t.duration_ns, cfg.dt_ns);
    if (n == 0) return grid;

    Image next(grid.width(), grid.height());
    Image y(grid.width(), grid.height());
    const detail::EntryList ea(t.feedback, t.radius, grid.width());
    const detail::EntryList eb(t.feedforward, t.radius, grid.width());
    const double k = cfg.dt_ns / cfg.tau_ns;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = output(grid.state[i]);
        detail::euler_step(grid.state, y, grid.input, grid.boundary, t, ea, eb, k, next);
        std::swap(grid.state, next);
    }
    if (!grid.state.all_finite())
        throw std::runtime_error("run: state diverged under template '" + t.name + "'");
    return grid;
}

}  // namespace cenn

#endif
