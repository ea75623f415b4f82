#ifndef CENN_COMMANDS_HPP
#define CENN_COMMANDS_HPP

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "cenn/config.hpp"
#include "cenn/io.hpp"
#include "cenn/metrics.hpp"
#include "cenn/png_io.hpp"
#include "cenn/synth.hpp"
#include "cenn/tracker.hpp"
#include "cenn/trainer.hpp"

namespace cenn {

// Bad or missing user input; mapped to exit code 2 by the CLI.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string must_read(const fs::path& path) {
    try {
        return read_file(path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// synth: write a generated sequence + ground truth to a directory
// ---------------------------------------------------------------------------

inline void cmd_synth(const SynthSpec& spec, const fs::path& out_dir) {
    SynthSequence seq = generate_sequence(spec);
    fs::create_directories(out_dir);
    char name[32];
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        std::snprintf(name, sizeof name, "%05zu.pgm", i + 1);
        write_pgm(out_dir / name, seq.frames[i]);
    }
    atomic_write(out_dir / "groundtruth.txt", encode_ground_truth(seq.boxes));
    std::printf("wrote %zu frames to %s\n", seq.frames.size(), out_dir.c_str());
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

inline TrainedModel run_train(const Image& first_frame, const BoundingBox& box,
                              const RunConfig& cfg,
                              std::vector<double>* fitness_history = nullptr) {
    return train(first_frame, box, cfg.trainer, cfg.solver, fitness_history);
}

inline void cmd_train(const fs::path& sequence_dir, const fs::path& gt_path,
                      const fs::path& model_out, const RunConfig& cfg) {
    std::vector<fs::path> frames;
    std::vector<BoundingBox> gt;
    try {
        frames = list_frames(sequence_dir);
        gt = load_ground_truth(gt_path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (gt.empty()) throw UsageError("ground truth is empty: " + gt_path.string());
    const Image first = read_frame(frames[0]);
    if (!gt[0].inside(first.width(), first.height()))
        throw UsageError("first ground-truth box lies outside the frame");

    std::vector<double> history;
    TrainedModel model = run_train(first, gt[0], cfg, &history);
    for (std::size_t g = 0; g < history.size(); ++g)
        std::printf("gen %3zu  best fitness %.6f\n", g, history[g]);
    atomic_write(model_out, model_to_json(model));
    std::printf("trained %zu kernels, final threshold %.4f, model -> %s\n",
                model.kernels.size(), model.final_threshold, model_out.c_str());
}

// ---------------------------------------------------------------------------
// track
// ---------------------------------------------------------------------------

inline std::vector<FrameResult> run_track(const TrainedModel& model,
                                          const std::vector<Image>& frames,
                                          const BoundingBox& init_box,
                                          const RunConfig& cfg,
                                          std::vector<Image>* masks = nullptr) {
    if (frames.empty()) throw UsageError("no frames to track");
    TrackState state = init(model, frames[0], init_box, cfg.tracker, cfg.solver);
    std::vector<FrameResult> results;
    results.push_back({0, init_box, false, state.object_area});
    if (masks) masks->push_back(state.location_mask);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        const BoundingBox box = process_frame(state, frames[f], cfg.tracker, cfg.solver);
        results.push_back({static_cast<int>(f), box, state.lost, state.object_area});
        if (masks) masks->push_back(state.location_mask);
    }
    return results;
}

inline void cmd_track(const fs::path& model_path, const fs::path& sequence_dir,
                      const fs::path& gt_path, const fs::path& results_out,
                      const RunConfig& cfg, const std::optional<fs::path>& mask_dir) {
    TrainedModel model;
    try {
        model = model_from_json(detail::must_read(model_path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError("cannot parse model " + model_path.string() + ": " + e.what());
    }
    std::vector<fs::path> paths;
    std::vector<BoundingBox> gt;
    try {
        paths = list_frames(sequence_dir);
        gt = load_ground_truth(gt_path);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (gt.empty()) throw UsageError("ground truth is empty");

    std::vector<Image> frames;
    frames.reserve(paths.size());
    for (const fs::path& p : paths) frames.push_back(read_frame(p));

    std::vector<Image> masks;
    std::vector<FrameResult> results =
        run_track(model, frames, gt[0], cfg, mask_dir ? &masks : nullptr);
    atomic_write(results_out, encode_results_csv(results));
    if (mask_dir) {
        fs::create_directories(*mask_dir);
        char name[32];
        for (std::size_t i = 0; i < masks.size(); ++i) {
            std::snprintf(name, sizeof name, "mask_%05zu.pgm", i);
            write_pgm(*mask_dir / name, masks[i]);
        }
    }
    std::printf("tracked %zu frames -> %s\n", results.size(), results_out.c_str());
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

struct ScoreOutput {
    std::vector<double> overlaps;
    SuccessCurve curve;
    double auc_value = 0.0;
};

inline ScoreOutput run_score(const std::vector<FrameResult>& results,
                             const std::vector<BoundingBox>& gt) {
    if (results.empty()) throw UsageError("no tracking results");
    if (gt.size() < results.size())
        throw UsageError("ground truth has fewer rows than results");
    ScoreOutput out;
    for (std::size_t i = 0; i < results.size(); ++i)
        out.overlaps.push_back(overlap(results[i].box, gt[i]));
    out.curve = success_curve(out.overlaps);
    out.auc_value = auc(out.curve);
    return out;
}

inline void cmd_score(const fs::path& results_path, const fs::path& gt_path,
                      const fs::path& curve_out) {
    std::vector<FrameResult> results;
    std::vector<BoundingBox> gt;
    try {
        results = parse_results_csv(detail::must_read(results_path), results_path.string());
        gt = load_ground_truth(gt_path);
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    ScoreOutput out = run_score(results, gt);
    atomic_write(curve_out, encode_curve_csv(out.curve));
    std::printf("AUC %.4f\n", out.auc_value);
}

// ---------------------------------------------------------------------------
// cost
// ---------------------------------------------------------------------------

inline void cmd_cost(const std::optional<fs::path>& pipeline_path, const CostParams& params,
                     long frames, const std::optional<fs::path>& csv_out,
                     std::optional<std::pair<double, double>> cpu_energy_delay) {
    std::vector<PipelineStep> pipeline;
    if (pipeline_path) {
        try {
            pipeline = pipeline_from_json(detail::must_read(*pipeline_path));
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError("cannot parse pipeline: " + std::string(e.what()));
        }
    } else {
        pipeline = reference_pipeline();
    }
    if (pipeline.empty()) throw UsageError("pipeline is empty");

    CostReport rep = frame_report(pipeline, params, frames);
    std::fputs(report_text(rep).c_str(), stdout);
    if (cpu_energy_delay) {
        const double ratio =
            edp_compare(rep, cpu_energy_delay->first, cpu_energy_delay->second);
        std::printf("EDP improvement over CPU: %.2fx\n", ratio);
    }
    if (csv_out) atomic_write(*csv_out, report_csv(rep));
}

}  // namespace cenn

#endif
