#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cenn/commands.hpp"

namespace {

cenn::RunConfig load_config(const std::optional<std::string>& path) {
    if (!path) return {};
    return cenn::config_from_json(cenn::read_file(*path));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CeNN co-processor simulator and target tracker"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    app.add_option("--config", config_path, "run configuration JSON")->expected(1);

    // train
    auto* train = app.add_subcommand("train", "train a tracking model on the first frame");
    std::string tr_seq, tr_gt, tr_out = "model.json";
    train->add_option("--sequence", tr_seq, "frame directory")->required();
    train->add_option("--ground-truth", tr_gt, "ground truth file")->required();
    train->add_option("--model-out", tr_out, "output model JSON");

    // track
    auto* track = app.add_subcommand("track", "track a sequence with a trained model");
    std::string tk_model, tk_seq, tk_gt, tk_out = "results.csv";
    std::optional<std::string> tk_masks;
    track->add_option("--model", tk_model, "trained model JSON")->required();
    track->add_option("--sequence", tk_seq, "frame directory")->required();
    track->add_option("--ground-truth", tk_gt, "ground truth (first row seeds the tracker)")
        ->required();
    track->add_option("--results-out", tk_out, "output results CSV");
    track->add_option("--mask-dir", tk_masks, "dump per-frame location masks as PGM");

    // score
    auto* score = app.add_subcommand("score", "success curve and AUC for tracking results");
    std::string sc_results, sc_gt, sc_out = "curve.csv";
    score->add_option("--results", sc_results, "results CSV")->required();
    score->add_option("--ground-truth", sc_gt, "ground truth file")->required();
    score->add_option("--curve-out", sc_out, "output success-curve CSV");

    // cost
    auto* cost = app.add_subcommand("cost", "energy/delay/EDP report for a pipeline");
    std::optional<std::string> co_pipeline, co_csv;
    long co_frames = 1;
    double co_cpu_energy = 0.0, co_cpu_delay = 0.0;
    cost->add_option("--pipeline", co_pipeline,
                     "pipeline JSON (default: built-in per-frame pipeline)");
    cost->add_option("--frames", co_frames, "sequence length for totals");
    cost->add_option("--csv-out", co_csv, "write the per-row report as CSV");
    cost->add_option("--cpu-energy-j", co_cpu_energy, "baseline energy in joules");
    cost->add_option("--cpu-delay-s", co_cpu_delay, "baseline delay in seconds");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic moving-object sequence");
    cenn::SynthSpec spec;
    std::string sy_out = "synth";
    synth->add_option("--out", sy_out, "output directory")->required();
    synth->add_option("--width", spec.width);
    synth->add_option("--height", spec.height);
    synth->add_option("--frames", spec.frames);
    std::vector<int> sy_box;
    synth->add_option("--box", sy_box, "object box as x,y,w,h")
        ->delimiter(',')
        ->expected(4);
    synth->add_option("--vx", spec.vx);
    synth->add_option("--vy", spec.vy);
    synth->add_flag("--disc", spec.disc, "draw a disc instead of a square");
    synth->add_option("--object-gray", spec.object_gray);
    synth->add_option("--background-gray", spec.background_gray);
    synth->add_option("--texture", spec.texture, "background gray jitter amplitude");
    synth->add_option("--texture-seed", spec.texture_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const cenn::RunConfig cfg = load_config(config_path);
        if (train->parsed()) {
            cenn::cmd_train(tr_seq, tr_gt, tr_out, cfg);
        } else if (track->parsed()) {
            cenn::cmd_track(tk_model, tk_seq, tk_gt, tk_out, cfg,
                            tk_masks ? std::optional<cenn::fs::path>(*tk_masks)
                                     : std::nullopt);
        } else if (score->parsed()) {
            cenn::cmd_score(sc_results, sc_gt, sc_out);
        } else if (cost->parsed()) {
            std::optional<std::pair<double, double>> cpu;
            if (co_cpu_energy > 0.0 && co_cpu_delay > 0.0)
                cpu = {co_cpu_energy, co_cpu_delay};
            cenn::cmd_cost(co_pipeline ? std::optional<cenn::fs::path>(*co_pipeline)
                                       : std::nullopt,
                           cfg.cost, co_frames,
                           co_csv ? std::optional<cenn::fs::path>(*co_csv) : std::nullopt,
                           cpu);
        } else if (synth->parsed()) {
            if (!sy_box.empty())
                spec.box = {sy_box[0], sy_box[1], sy_box[2], sy_box[3]};
            cenn::cmd_synth(spec, sy_out);
        }
    } catch (const cenn::UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
