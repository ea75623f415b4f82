#ifndef CENN_TRAINER_HPP
#define CENN_TRAINER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <random>
#include <stdexcept>
#include <vector>

#include "cenn/box.hpp"
#include "cenn/grid.hpp"
#include "cenn/solver.hpp"
#include "cenn/templates.hpp"

namespace cenn {

// Pooling diffusion time after thresholding a DoG response (time steps).
inline constexpr double kPoolDiffusionNs = 25.0;

struct GAConfig {
    int population = 20;
    int generations = 100;
    double crossover_rate = 0.8;
    double mutation_rate = 0.1;
    double mutation_sigma = 0.1;
    double weight_lo = -2.0;
    double weight_hi = 2.0;
    std::uint32_t rng_seed = 1;

    void validate() const {
        if (population < 2) throw std::invalid_argument("GAConfig: population must be >= 2");
        if (generations < 1) throw std::invalid_argument("GAConfig: generations must be >= 1");
        if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
            mutation_rate > 1.0)
            throw std::invalid_argument("GAConfig: rates must be in [0, 1]");
        if (!(weight_lo < weight_hi))
            throw std::invalid_argument("GAConfig: empty weight range");
    }
};

struct TrainerConfig {
    int n_kernels = 25;
    int n_keep = 5;
    GAConfig ga;
};

struct PoolEntry {
    DoGKernel kernel;
    int enumeration_index = 0;  // position in the fixed kernel enumeration
    Image response;             // pooled blob image
};

struct FeaturePool {
    std::vector<PoolEntry> entries;
    int source_frame = 0;
};

struct TrainedModel {
    std::vector<DoGKernel> kernels;
    std::vector<double> weights;
    double final_threshold = 0.0;
    double reference_response_area = 0.0;
    BoundingBox ground_truth_box;

    void validate() const {
        if (kernels.empty() || kernels.size() != weights.size())
            throw std::invalid_argument("TrainedModel: kernel/weight count mismatch");
        for (double w : weights)
            if (!std::isfinite(w))
                throw std::invalid_argument("TrainedModel: non-finite weight");
    }
};

// ---------------------------------------------------------------------------
// Kernel enumeration
// ---------------------------------------------------------------------------

// Fixed, documented order: kinds {isotropic, 0deg, 45deg, 90deg, 135deg} outer,
// then step pairs (s1, s2) with s1 < s2 over {10, 15, ..., 75}.  The seeded
// pool draw is a shuffle of this list, so a given (seed, n) is reproducible.
inline std::vector<DoGKernel> kernel_enumeration() {
    std::vector<DoGKernel> all;
    const double angles[] = {-1.0, 0.0, 45.0, 90.0, 135.0};  // -1 = isotropic
    for (double ang : angles)
        for (int s1 = 10; s1 <= 75; s1 += 5)
            for (int s2 = s1 + 5; s2 <= 75; s2 += 5)
                all.push_back(make_dog(ang < 0.0, ang, s1, s2));
    return all;
}

// ---------------------------------------------------------------------------
// Pooling
// ---------------------------------------------------------------------------

// Threshold the response at the most descriptive level, then diffuse the
// binary result into soft blobs.  Descriptiveness is the binary image's
// variance (maximal when foreground/background split evenly); ties resolve to
// the smallest |z|, then the smallest z.
inline double select_pool_threshold(const Image& response) {
    const long n = static_cast<long>(response.size());
    double best_z = 0.0;
    long long best_score = -1;
    for (int i = -4; i <= 4; ++i) {
        const double z = 0.2 * i;
        long k = 0;
        for (double v : response.data())
            if (v > z) ++k;
        const long long score = static_cast<long long>(k) * (n - k);
        const bool better =
            score > best_score ||
            (score == best_score && (std::abs(z) < std::abs(best_z) - 1e-12 ||
                                     (std::abs(std::abs(z) - std::abs(best_z)) <= 1e-12 &&
                                      z < best_z)));
        if (better) {
            best_score = score;
            best_z = z;
        }
    }
    return best_z;
}

inline Image pool_response(const Image& response, const SolverConfig& cfg = {}) {
    const double z = select_pool_threshold(response);
    Image binary = threshold_image(response, z, cfg);
    return apply_unary(binary, diffusion_isotropic(kPoolDiffusionNs), cfg);
}

// ---------------------------------------------------------------------------
// Pool generation and feature selection
// ---------------------------------------------------------------------------

inline FeaturePool generate_pool(const Image& frame, int n_kernels,
                                 const TrainerConfig& tcfg, const SolverConfig& cfg = {}) {
    if (n_kernels < 1)
        throw std::invalid_argument("generate_pool: need at least one kernel");
    std::vector<DoGKernel> all = kernel_enumeration();
    std::vector<int> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(tcfg.ga.rng_seed);
    std::shuffle(order.begin(), order.end(), rng);
    if (static_cast<std::size_t>(n_kernels) > all.size())
        throw std::invalid_argument("generate_pool: kernel count exceeds enumeration size");

    FeaturePool pool;
    pool.entries.reserve(n_kernels);
    for (int i = 0; i < n_kernels; ++i) {
        PoolEntry e;
        e.enumeration_index = order[i];
        e.kernel = all[order[i]];
        e.response = pool_response(apply_dog(frame, e.kernel, cfg), cfg);
        pool.entries.push_back(std::move(e));
    }
    return pool;
}

// Mean response inside the box minus mean response outside.
inline double feature_score(const Image& response, const BoundingBox& box) {
    double in = 0.0, out = 0.0;
    long nin = 0, nout = 0;
    for (int r = 0; r < response.height(); ++r)
        for (int c = 0; c < response.width(); ++c) {
            if (box.contains(r, c)) {
                in += response.at(r, c);
                ++nin;
            } else {
                out += response.at(r, c);
                ++nout;
            }
        }
    if (nin == 0)
        throw std::invalid_argument("feature_score: box does not cover any cell");
    return in / nin - (nout > 0 ? out / nout : 0.0);
}

// Keep the n_keep strongest descriptors, ordered by score; ties keep the
// smaller enumeration index first.
inline FeaturePool select_features(const FeaturePool& pool, const BoundingBox& box,
                                   int n_keep) {
    if (n_keep < 1 || static_cast<std::size_t>(n_keep) > pool.entries.size())
        throw std::invalid_argument("select_features: n_keep out of range");
    std::vector<std::pair<double, int>> ranked;  // (score, pool index)
    for (std::size_t i = 0; i < pool.entries.size(); ++i)
        ranked.emplace_back(feature_score(pool.entries[i].response, box),
                            static_cast<int>(i));
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return pool.entries[a.second].enumeration_index <
               pool.entries[b.second].enumeration_index;
    });
    FeaturePool kept;
    kept.source_frame = pool.source_frame;
    for (int i = 0; i < n_keep; ++i) kept.entries.push_back(pool.entries[ranked[i].second]);
    return kept;
}

// ---------------------------------------------------------------------------
// Genetic weighting
// ---------------------------------------------------------------------------

inline Image weighted_sum(const std::vector<const Image*>& descriptors,
                          const std::vector<double>& weights) {
    if (descriptors.empty() || descriptors.size() != weights.size())
        throw std::invalid_argument("weighted_sum: descriptor/weight mismatch");
    Image sum(descriptors[0]->width(), descriptors[0]->height(), 0.0);
    for (std::size_t k = 0; k < descriptors.size(); ++k) {
        if (!descriptors[k]->same_shape(sum))
            throw std::invalid_argument("weighted_sum: descriptor shape mismatch");
        const double w = weights[k];
        const auto& d = descriptors[k]->data();
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += w * d[i];
    }
    return sum;
}

// MSE between the clamped weighted sum and the ground-truth mask.
inline double fitness(const std::vector<double>& weights,
                      const std::vector<const Image*>& descriptors, const Image& gt_mask) {
    Image sum = weighted_sum(descriptors, weights);
    if (!sum.same_shape(gt_mask))
        throw std::invalid_argument("fitness: mask shape mismatch");
    double err = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        const double d = std::clamp(sum[i], -1.0, 1.0) - gt_mask[i];
        err += d * d;
    }
    return err / static_cast<double>(sum.size());
}

// Generational GA: tournament of 2, uniform crossover, Gaussian mutation,
// elitism of 1.  Returns the best-ever weight vector; `history`, when given,
// receives the best-so-far fitness after each generation (initial + one per
// generation).
inline std::vector<double> ga_optimize(const std::vector<const Image*>& descriptors,
                                       const Image& gt_mask, const GAConfig& cfg,
                                       std::vector<double>* history = nullptr) {
    cfg.validate();
    if (descriptors.empty())
        throw std::invalid_argument("ga_optimize: no descriptors");
    const std::size_t dim = descriptors.size();
    std::mt19937 rng(cfg.rng_seed);
    std::uniform_real_distribution<double> in_range(cfg.weight_lo, cfg.weight_hi);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> noise(0.0, cfg.mutation_sigma);
    std::uniform_int_distribution<int> pick(0, cfg.population - 1);

    std::vector<std::vector<double>> popn(cfg.population, std::vector<double>(dim));
    for (auto& ind : popn)
        for (double& w : ind) w = in_range(rng);

    std::vector<double> fit(cfg.population);
    auto evaluate = [&](const std::vector<std::vector<double>>& p) {
        for (int i = 0; i < cfg.population; ++i) fit[i] = fitness(p[i], descriptors, gt_mask);
    };
    evaluate(popn);

    auto best_idx = [&]() {
        return static_cast<int>(std::min_element(fit.begin(), fit.end()) - fit.begin());
    };
    std::vector<double> best = popn[best_idx()];
    double best_fit = fit[best_idx()];
    if (history) {
        history->clear();
        history->push_back(best_fit);
    }

    auto tournament = [&]() -> const std::vector<double>& {
        const int a = pick(rng), b = pick(rng);
        return fit[a] <= fit[b] ? popn[a] : popn[b];
    };

    for (int gen = 0; gen < cfg.generations; ++gen) {
        std::vector<std::vector<double>> next;
        next.reserve(cfg.population);
        next.push_back(best);  // elite
        while (static_cast<int>(next.size()) < cfg.population) {
            std::vector<double> child = tournament();
            if (unit(rng) < cfg.crossover_rate) {
                const std::vector<double>& other = tournament();
                for (std::size_t g = 0; g < dim; ++g)
                    if (unit(rng) < 0.5) child[g] = other[g];
            }
            for (double& w : child)
                if (unit(rng) < cfg.mutation_rate)
                    w = std::clamp(w + noise(rng), cfg.weight_lo, cfg.weight_hi);
            next.push_back(std::move(child));
        }
        popn = std::move(next);
        evaluate(popn);
        const int bi = best_idx();
        if (fit[bi] < best_fit) {
            best_fit = fit[bi];
            best = popn[bi];
        }
        if (history) history->push_back(best_fit);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Final threshold and end-to-end training
// ---------------------------------------------------------------------------

// Normalization applied before thresholding the weighted sum, shared with the
// per-frame featured image.
inline Image normalize_featured(Image sum) {
    const double m = std::max(1.0, sum.max_abs());
    for (double& v : sum.data()) v /= m;
    return sum;
}

// Scan 101 uniform levels in [-1, 1] for the threshold minimizing MSE against
// the mask; smallest z wins ties.
inline double select_final_threshold(const Image& weighted, const Image& gt_mask) {
    if (!weighted.same_shape(gt_mask))
        throw std::invalid_argument("select_final_threshold: shape mismatch");
    double best_z = -1.0, best_err = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
        const double z = -1.0 + i * 0.02;
        double err = 0.0;
        for (std::size_t p = 0; p < weighted.size(); ++p) {
            const double b = weighted[p] > z ? 1.0 : -1.0;
            const double d = b - gt_mask[p];
            err += d * d;
        }
        if (err < best_err) {
            best_err = err;
            best_z = z;
        }
    }
    return best_z;
}

inline TrainedModel train(const Image& frame, const BoundingBox& box,
                          const TrainerConfig& tcfg, const SolverConfig& cfg = {},
                          std::vector<double>* fitness_history = nullptr) {
    if (!box.inside(frame.width(), frame.height()))
        throw std::invalid_argument("train: box outside frame");
    FeaturePool pool = generate_pool(frame, tcfg.n_kernels, tcfg, cfg);
    FeaturePool kept = select_features(pool, box, tcfg.n_keep);

    std::vector<const Image*> descriptors;
    for (const PoolEntry& e : kept.entries) descriptors.push_back(&e.response);
    const Image mask = box_mask(box, frame.width(), frame.height());
    std::vector<double> weights = ga_optimize(descriptors, mask, tcfg.ga, fitness_history);

    const Image featured = normalize_featured(weighted_sum(descriptors, weights));
    TrainedModel model;
    for (const PoolEntry& e : kept.entries) model.kernels.push_back(e.kernel);
    model.weights = std::move(weights);
    model.final_threshold = select_final_threshold(featured, mask);
    model.ground_truth_box = box;

    // First-frame blob area: thresholded foreground inside the box.
    long area = 0;
    for (int r = box.y; r < box.y + box.h; ++r)
        for (int c = box.x; c < box.x + box.w; ++c)
            if (featured.at(r, c) > model.final_threshold) ++area;
    model.reference_response_area = static_cast<double>(std::max(1L, area));
    model.validate();
    return model;
}

}  // namespace cenn

#endif
