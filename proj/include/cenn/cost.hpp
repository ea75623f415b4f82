#ifndef CENN_COST_HPP
#define CENN_COST_HPP

#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cenn/cell_template.hpp"

namespace cenn {

// OTA power is proportional to template magnitude; the unit is calibrated so
// the isotropic diffusion template (|A|+|B| = 1) draws p_ota_unit per cell.
struct CostParams {
    double p_ota_unit_uw = 1.5;
    double p_overhead_cell_uw = 0.08;  // ADC/register/DAC share per cell
    int adc_bits = 8;
    double e_adc_conv_pj = 2.0;  // per 8-bit conversion; calibration constant
    long n_cells = 352L * 240L;  // frame pixel count

    void validate() const {
        if (!(p_ota_unit_uw > 0.0) || !(p_overhead_cell_uw > 0.0) || n_cells <= 0 ||
            !(e_adc_conv_pj > 0.0))
            throw std::invalid_argument("CostParams: values must be positive");
        if (adc_bits < 1 || adc_bits > 16)
            throw std::invalid_argument("CostParams: adc_bits out of range");
    }
};

// One pipeline step.  ota_power_uw is pinned per operation name; rows whose
// published energy does not scale with the full frame (region-of-interest
// runs) carry an explicit energy override.
struct PipelineStep {
    std::string name;
    double duration_us = 0.0;
    double ota_power_uw = 0.0;
    std::optional<double> energy_override_uj;
};

struct CostRow {
    std::string name;
    double duration_us = 0.0;
    double ota_power_uw = 0.0;
    double total_power_uw = 0.0;
    double energy_uj = 0.0;
};

struct CostReport {
    std::vector<CostRow> rows;
    double frame_time_us = 0.0;
    double frame_energy_uj = 0.0;
    double frame_power_uw = 0.0;   // sum of per-row total powers
    double frame_edp = 0.0;        // uJ * us
    long frames = 1;
    double sequence_time_s = 0.0;
    double sequence_energy_j = 0.0;
};

// Template-derived per-cell power (used when a pipeline is built from actual
// templates rather than the pinned table).
inline double op_power_per_cell(const Template& t, const CostParams& p) {
    p.validate();
    return p.p_ota_unit_uw * t.magnitude() + p.p_overhead_cell_uw;
}

inline double op_energy_uj(double duration_us, double power_per_cell_uw, long n_cells) {
    if (!(duration_us > 0.0) || !(power_per_cell_uw > 0.0) || n_cells <= 0)
        throw std::invalid_argument("op_energy: arguments must be positive");
    return power_per_cell_uw * static_cast<double>(n_cells) * duration_us * 1e-6;
}

struct AdcSchedule {
    double frequency_hz = 0.0;  // register clocks at the same rate
    double energy_pj = 0.0;
};

// ADC (and register) frequency: accesses over the analog total runtime.
inline AdcSchedule adc_schedule(long n_accesses, double total_runtime_s,
                                const CostParams& p) {
    if (!(total_runtime_s > 0.0))
        throw std::invalid_argument("adc_schedule: runtime must be positive");
    if (n_accesses < 0)
        throw std::invalid_argument("adc_schedule: negative access count");
    AdcSchedule s;
    s.frequency_hz = static_cast<double>(n_accesses) / total_runtime_s;
    s.energy_pj = static_cast<double>(n_accesses) * p.e_adc_conv_pj;
    return s;
}

// The published 14-step per-frame pipeline for a 352x240 sequence.
inline std::vector<PipelineStep> reference_pipeline() {
    return {
        {"Init", 7.5, 1.5, 0.0081},
        {"DIFFUS1", 7.5, 1.5, 0.0081},
        {"Init", 7.5, 1.5, 0.0081},
        {"DIFFUS2", 7.5, 1.5, 0.0081},
        {"SUB", 7.5, 3.0, 0.0158},
        {"DIFFUS3", 25.0, 1.5, 0.027},
        {"Init", 0.3, 1.5, 0.0324},
        {"THRES", 0.3, 3.0, std::nullopt},
        {"LOGAND", 0.3, 6.0, std::nullopt},
        {"RECALL", 35.2, 21.8, std::nullopt},
        {"SHADOWL", 35.2, 9.0, std::nullopt},
        {"Init", 0.3, 1.5, 0.00324},
        {"SHADOWD", 24.0, 9.0, std::nullopt},
        {"DILATION", 1.6, 13.5, std::nullopt},
    };
}

// Frame count for the published full-sequence totals.
inline constexpr long kReferenceSequenceFrames = 1917;

inline CostReport frame_report(const std::vector<PipelineStep>& pipeline,
                               const CostParams& params, long frames = 1) {
    params.validate();
    if (pipeline.empty())
        throw std::invalid_argument("frame_report: empty pipeline");
    if (frames < 1)
        throw std::invalid_argument("frame_report: frame count must be >= 1");

    CostReport rep;
    rep.frames = frames;
    for (const PipelineStep& s : pipeline) {
        CostRow row;
        row.name = s.name;
        row.duration_us = s.duration_us;
        row.ota_power_uw = s.ota_power_uw;
        row.total_power_uw = s.ota_power_uw + params.p_overhead_cell_uw;
        row.energy_uj = s.energy_override_uj
                            ? *s.energy_override_uj
                            : op_energy_uj(s.duration_us, row.total_power_uw, params.n_cells);
        rep.frame_time_us += row.duration_us;
        rep.frame_energy_uj += row.energy_uj;
        rep.frame_power_uw += row.total_power_uw;
        rep.rows.push_back(std::move(row));
    }
    rep.frame_edp = rep.frame_energy_uj * rep.frame_time_us;
    rep.sequence_time_s = rep.frame_time_us * 1e-6 * frames;
    rep.sequence_energy_j = rep.frame_energy_uj * 1e-6 * frames;
    return rep;
}

// EDP improvement of the accelerator over an externally measured CPU run.
inline double edp_compare(const CostReport& accel, double cpu_energy_j, double cpu_delay_s) {
    const double accel_edp = accel.sequence_energy_j * accel.sequence_time_s;
    if (!(accel_edp > 0.0) || !(cpu_energy_j > 0.0) || !(cpu_delay_s > 0.0))
        throw std::invalid_argument("edp_compare: energies and delays must be positive");
    return cpu_energy_j * cpu_delay_s / accel_edp;
}

// ---------------------------------------------------------------------------
// Report formatting
// ---------------------------------------------------------------------------

inline std::string report_csv(const CostReport& rep) {
    std::ostringstream os;
    os << "operation,time_per_frame_us,ota_power_uw,total_power_uw,energy_per_frame_uj\n";
    os << std::setprecision(6);
    for (const CostRow& r : rep.rows)
        os << r.name << ',' << r.duration_us << ',' << r.ota_power_uw << ','
           << r.total_power_uw << ',' << r.energy_uj << '\n';
    os << "Total/frame," << rep.frame_time_us << ",," << rep.frame_power_uw << ','
       << rep.frame_energy_uj << '\n';
    os << "Total/sequence," << rep.sequence_time_s * 1e6 << ",,," << rep.sequence_energy_j * 1e6
       << '\n';
    return os.str();
}

inline std::string report_text(const CostReport& rep) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "Operation" << std::right << std::setw(14)
       << "Time (us)" << std::setw(16) << "OTA pwr (uW)" << std::setw(16) << "Total (uW)"
       << std::setw(16) << "Energy (uJ)" << '\n';
    os << std::string(74, '-') << '\n';
    os << std::fixed;
    for (const CostRow& r : rep.rows) {
        os << std::left << std::setw(12) << r.name << std::right << std::setprecision(2)
           << std::setw(14) << r.duration_us << std::setw(16) << r.ota_power_uw
           << std::setw(16) << r.total_power_uw << std::setprecision(4) << std::setw(16)
           << r.energy_uj << '\n';
    }
    os << std::string(74, '-') << '\n';
    os << std::left << std::setw(12) << "Total/frame" << std::right << std::setprecision(2)
       << std::setw(14) << rep.frame_time_us << std::setw(16) << ' ' << std::setw(16)
       << rep.frame_power_uw << std::setprecision(4) << std::setw(16) << rep.frame_energy_uj
       << '\n';
    os << std::left << std::setw(12) << "Sequence" << std::right << std::setprecision(4)
       << std::setw(14) << rep.sequence_time_s << " s" << std::setw(30) << ' '
       << std::setw(14) << rep.sequence_energy_j << " J  (" << rep.frames << " frames)\n";
    return os.str();
}

}  // namespace cenn

#endif
