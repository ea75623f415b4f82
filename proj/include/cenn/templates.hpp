#ifndef CENN_TEMPLATES_HPP
#define CENN_TEMPLATES_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cenn/cell_template.hpp"
#include "cenn/grid.hpp"
#include "cenn/solver.hpp"

namespace cenn {

// Propagating templates (shadow, recall) need time proportional to the grid
// extent; k_prop is the per-cell transit budget in units of tau.
inline constexpr double kDefaultPropagationFactor = 4.0;

// Settling budget for non-propagating binary templates.
inline constexpr double kSettleTau = 12.0;

// Thresholding needs longer: the bias nudge that resolves exact ties is 1e-9,
// and escaping the unstable point from that close takes ~21 tau (e^21 ~ 1e9).
// 30 tau gives margin and matches the published 0.3 us THRES step at 1 ns/tau.
inline constexpr double kThresholdSettleTau = 30.0;

inline const std::vector<double> kZero3x3(9, 0.0);

// ---------------------------------------------------------------------------
// Diffusion
// ---------------------------------------------------------------------------

// A-only template whose linear-region dynamics are a mass-conserving local
// average: center 0, off-center weights sum to 1.
inline Template diffusion_isotropic(double duration_ns = 0.0) {
    return Template("DIFFUS", 1,
                    {0.10, 0.15, 0.10,
                     0.15, 0.00, 0.15,
                     0.10, 0.15, 0.10},
                    kZero3x3, 0.0, duration_ns);
}

// Anisotropic variant: the neighbor pair along `angle_deg` (0, 45, 90, 135)
// carries most of the weight.
inline Template diffusion_directional(double angle_deg, double duration_ns = 0.0) {
    const int a = static_cast<int>(std::lround(angle_deg)) % 180;
    const double hi = 0.35, lo = 0.05;
    std::vector<double> A(9, lo);
    A[4] = 0.0;
    // offsets into the 3x3, row major: 0..8
    int pair1, pair2;
    switch (a) {
        case 0:   pair1 = 3; pair2 = 5; break;  // left / right
        case 45:  pair1 = 2; pair2 = 6; break;  // up-right / down-left
        case 90:  pair1 = 1; pair2 = 7; break;  // up / down
        case 135: pair1 = 0; pair2 = 8; break;  // up-left / down-right
        default:
            throw std::invalid_argument("diffusion_directional: angle must be 0/45/90/135");
    }
    A[pair1] = hi;
    A[pair2] = hi;
    return Template("DIFFUS_" + std::to_string(a), 1, std::move(A), kZero3x3, 0.0,
                    duration_ns);
}

// ---------------------------------------------------------------------------
// Arithmetic and logic
// ---------------------------------------------------------------------------

// Minuend in state, subtrahend in input.  With A center 1 the linear-region
// dynamics integrate -u at unit rate, so after exactly tau the state is
// x0 - u = minuend - subtrahend; saturation clamps the rest.
inline Template subtraction(const SolverConfig& cfg = {}) {
    std::vector<double> A = kZero3x3, B = kZero3x3;
    A[4] = 1.0;
    B[4] = -1.0;
    return Template("SUB", 1, std::move(A), std::move(B), 0.0, cfg.tau_ns);
}

// Bistable cell driven away from the unstable point at z; settles to +1 where
// x0 > z and -1 where x0 < z.  The tiny bias nudge resolves exact ties to -1.
inline Template threshold(double z, const SolverConfig& cfg = {}) {
    if (z < -1.0 || z > 1.0)
        throw std::invalid_argument("threshold: z must be in [-1, 1]");
    std::vector<double> A = kZero3x3;
    A[4] = 2.0;
    return Template("THRES", 1, std::move(A), kZero3x3, -z - 1e-9,
                    kThresholdSettleTau * cfg.tau_ns);
}

// Operands in state and input; settles to +1 iff both are +1.
inline Template logic_and(const SolverConfig& cfg = {}) {
    std::vector<double> A = kZero3x3, B = kZero3x3;
    A[4] = 2.0;
    B[4] = 2.0;
    return Template("LOGAND", 1, std::move(A), std::move(B), -2.0,
                    kSettleTau * cfg.tau_ns);
}

// ---------------------------------------------------------------------------
// Morphology
// ---------------------------------------------------------------------------

enum class ShadowDirection { Left, Down };

// Black propagates against `dir`: shadow(left) blackens each row from column 0
// to its rightmost black pixel, so column 0 ends up as the row-occupancy
// indicator; shadow(down) symmetrically fills columns toward the bottom row.
inline Template shadow(ShadowDirection dir, int extent_cells, const SolverConfig& cfg = {},
                       double k_prop = kDefaultPropagationFactor) {
    if (extent_cells < 1)
        throw std::invalid_argument("shadow: extent must be >= 1");
    std::vector<double> A = kZero3x3, B = kZero3x3;
    A[4] = 2.0;
    A[dir == ShadowDirection::Left ? 5 : 1] = 2.0;  // right neighbor / up neighbor
    B[4] = 2.0;
    return Template(dir == ShadowDirection::Left ? "SHADOWL" : "SHADOWD", 1,
                    std::move(A), std::move(B), 2.0,
                    k_prop * extent_cells * cfg.tau_ns);
}

// 3x3 structuring element: a cell turns black iff any of its nine input
// neighbors is black.  One application grows blobs by one cell.
inline Template dilation(const SolverConfig& cfg = {}) {
    std::vector<double> A = kZero3x3;
    A[4] = 2.0;
    return Template("DILATION", 1, std::move(A), std::vector<double>(9, 1.0), 9.0,
                    kSettleTau * cfg.tau_ns);
}

// Morphological reconstruction: markers in state, reference mask in input.
// Settles to the union of 8-connected components of the mask that touch a
// marker.
inline Template recall(int width, int height, const SolverConfig& cfg = {},
                       double k_prop = kDefaultPropagationFactor) {
    std::vector<double> A(9, 1.0), B = kZero3x3;
    A[4] = 2.0;
    B[4] = 9.0;
    return Template("RECALL", 1, std::move(A), std::move(B), -1.0,
                    k_prop * (width + height) * cfg.tau_ns);
}

// ---------------------------------------------------------------------------
// Image-level helpers (state/input wiring plus output readout)
// ---------------------------------------------------------------------------

inline Image apply_unary(const Image& img, const Template& t, const SolverConfig& cfg,
                         Boundary b = Boundary::ZeroFlux) {
    return output_image(run(CellGrid(img, b), t, cfg).state);
}

inline Image apply_binary(const Image& state, const Image& input, const Template& t,
                          const SolverConfig& cfg, Boundary b = Boundary::ZeroFlux) {
    return output_image(run(CellGrid(state, input, b), t, cfg).state);
}

inline void require_binary(const Image& img, const char* op) {
    for (double v : img.data())
        if (std::abs(std::abs(v) - 1.0) > 1e-6)
            throw std::invalid_argument(std::string(op) + ": operand is not binary");
}

inline Image threshold_image(const Image& img, double z, const SolverConfig& cfg = {}) {
    return apply_unary(img, threshold(z, cfg), cfg);
}

inline Image and_image(const Image& a, const Image& b, const SolverConfig& cfg = {}) {
    if (!a.same_shape(b))
        throw std::invalid_argument("and_image: shape mismatch");
    require_binary(a, "and_image");
    require_binary(b, "and_image");
    return apply_binary(a, b, logic_and(cfg), cfg);
}

inline Image subtract_image(const Image& minuend, const Image& subtrahend,
                            const SolverConfig& cfg = {}) {
    if (!minuend.same_shape(subtrahend))
        throw std::invalid_argument("subtract_image: shape mismatch");
    return apply_binary(minuend, subtrahend, subtraction(cfg), cfg);
}

inline Image dilate_image(const Image& img, int radius_steps, const SolverConfig& cfg = {}) {
    if (radius_steps < 1)
        throw std::invalid_argument("dilate_image: radius must be >= 1");
    Image out = img;
    const Template t = dilation(cfg);
    for (int i = 0; i < radius_steps; ++i) out = apply_unary(out, t, cfg);
    return out;
}

inline Image shadow_image(const Image& img, ShadowDirection dir, const SolverConfig& cfg = {},
                          double k_prop = kDefaultPropagationFactor) {
    const int extent = dir == ShadowDirection::Left ? img.width() : img.height();
    return apply_unary(img, shadow(dir, extent, cfg, k_prop), cfg);
}

inline Image recall_image(const Image& marker, const Image& reference,
                          const SolverConfig& cfg = {},
                          double k_prop = kDefaultPropagationFactor) {
    if (!marker.same_shape(reference))
        throw std::invalid_argument("recall_image: shape mismatch");
    require_binary(marker, "recall_image");
    require_binary(reference, "recall_image");
    // Restrict markers to the reference first: a marker outside the mask takes
    // ~1 tau to die, and during that transient it can seed an adjacent mask
    // component that reconstruction from the restricted marker never reaches.
    const Image seed = apply_binary(marker, reference, logic_and(cfg), cfg);
    return apply_binary(seed, reference,
                        recall(marker.width(), marker.height(), cfg, k_prop), cfg);
}

// ---------------------------------------------------------------------------
// Difference of Gaussians
// ---------------------------------------------------------------------------

// Two diffusions of the same image with a step-count mismatch (or different
// orientations), subtracted: a band-pass response.
struct DoGKernel {
    Template diffuse1;
    Template diffuse2;
    int steps1 = 10;  // time steps, 1 step = 1 ns
    int steps2 = 10;
    std::optional<double> orientation_deg;

    void validate() const {
        if (steps1 < 10 || steps1 > 75 || steps2 < 10 || steps2 > 75)
            throw std::invalid_argument("DoGKernel: step counts must be in [10, 75]");
        // identical diffusions are allowed but give an all-zero response
    }
};

inline DoGKernel make_dog(bool isotropic, double angle_deg, int steps1, int steps2) {
    DoGKernel k;
    k.diffuse1 = isotropic ? diffusion_isotropic() : diffusion_directional(angle_deg);
    k.diffuse2 = k.diffuse1;
    k.steps1 = steps1;
    k.steps2 = steps2;
    if (!isotropic) k.orientation_deg = angle_deg;
    k.validate();
    return k;
}

inline Image apply_dog(const Image& img, const DoGKernel& k, const SolverConfig& cfg = {}) {
    k.validate();
    const Image d1 = apply_unary(img, k.diffuse1.with_duration(k.steps1 * 1.0), cfg);
    const Image d2 = apply_unary(img, k.diffuse2.with_duration(k.steps2 * 1.0), cfg);
    return subtract_image(d1, d2, cfg);
}

}  // namespace cenn

#endif
