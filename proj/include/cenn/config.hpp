#ifndef CENN_CONFIG_HPP
#define CENN_CONFIG_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "cenn/cost.hpp"
#include "cenn/solver.hpp"
#include "cenn/tracker.hpp"
#include "cenn/trainer.hpp"

namespace cenn {

// Every paper-silent parameter surfaces here so experiment setups are
// declarative.  Absent keys keep their defaults.
struct RunConfig {
    SolverConfig solver;
    TrainerConfig trainer;
    TrackerConfig tracker;
    CostParams cost;
};

inline RunConfig config_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunConfig c;
    auto get = [](const nlohmann::json& obj, const char* key, auto& out) {
        if (obj.contains(key)) out = obj[key].get<std::decay_t<decltype(out)>>();
    };
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        get(s, "dt_ns", c.solver.dt_ns);
        get(s, "tau_ns", c.solver.tau_ns);
    }
    if (j.contains("trainer")) {
        const auto& t = j["trainer"];
        get(t, "n_kernels", c.trainer.n_kernels);
        get(t, "n_keep", c.trainer.n_keep);
        get(t, "population", c.trainer.ga.population);
        get(t, "generations", c.trainer.ga.generations);
        get(t, "crossover_rate", c.trainer.ga.crossover_rate);
        get(t, "mutation_rate", c.trainer.ga.mutation_rate);
        get(t, "mutation_sigma", c.trainer.ga.mutation_sigma);
        get(t, "weight_lo", c.trainer.ga.weight_lo);
        get(t, "weight_hi", c.trainer.ga.weight_hi);
        get(t, "seed", c.trainer.ga.rng_seed);
    }
    if (j.contains("tracker")) {
        const auto& t = j["tracker"];
        get(t, "dilation_radius", c.tracker.dilation_radius);
        get(t, "k_prop", c.tracker.k_prop);
        get(t, "weak_q", c.tracker.weak_q);
        get(t, "weak_r", c.tracker.weak_r);
        get(t, "strong_q", c.tracker.strong_q);
        get(t, "strong_r", c.tracker.strong_r);
        get(t, "min_box_dim", c.tracker.min_box_dim);
    }
    if (j.contains("cost")) {
        const auto& t = j["cost"];
        get(t, "p_ota_unit_uw", c.cost.p_ota_unit_uw);
        get(t, "p_overhead_cell_uw", c.cost.p_overhead_cell_uw);
        get(t, "adc_bits", c.cost.adc_bits);
        get(t, "e_adc_conv_pj", c.cost.e_adc_conv_pj);
        get(t, "n_cells", c.cost.n_cells);
    }
    c.solver.validate();
    c.trainer.ga.validate();
    c.tracker.validate();
    c.cost.validate();
    return c;
}

}  // namespace cenn

#endif
