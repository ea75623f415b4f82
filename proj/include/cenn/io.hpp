#ifndef CENN_IO_HPP
#define CENN_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cenn/box.hpp"
#include "cenn/cost.hpp"
#include "cenn/grid.hpp"
#include "cenn/metrics.hpp"
#include "cenn/templates.hpp"
#include "cenn/trainer.hpp"

namespace cenn {

namespace fs = std::filesystem;
using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Atomic file writes (temp + rename)
// ---------------------------------------------------------------------------

inline void atomic_write(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// PGM (P5, 8-bit)
// ---------------------------------------------------------------------------

inline std::string encode_pgm(const Image& img) {
    std::string out = "P5\n" + std::to_string(img.width()) + " " +
                      std::to_string(img.height()) + "\n255\n";
    out.reserve(out.size() + img.size());
    for (double v : img.data()) out.push_back(static_cast<char>(signal_to_gray(v)));
    return out;
}

inline void write_pgm(const fs::path& path, const Image& img) {
    atomic_write(path, encode_pgm(img));
}

inline Image decode_pgm(const std::string& bytes, const std::string& origin) {
    std::istringstream is(bytes);
    std::string magic;
    is >> magic;
    if (magic != "P5") throw std::runtime_error(origin + ": not a P5 PGM");
    auto next_token = [&]() -> long {
        // skip whitespace and '#' comments
        for (;;) {
            int ch = is.peek();
            if (ch == '#') {
                std::string line;
                std::getline(is, line);
            } else if (std::isspace(ch)) {
                is.get();
            } else {
                break;
            }
        }
        long v;
        if (!(is >> v)) throw std::runtime_error(origin + ": malformed PGM header");
        return v;
    };
    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w <= 0 || h <= 0 || maxval != 255)
        throw std::runtime_error(origin + ": unsupported PGM geometry or depth");
    is.get();  // single whitespace before raster
    Image img(static_cast<int>(w), static_cast<int>(h));
    const std::size_t offset = static_cast<std::size_t>(is.tellg());
    if (bytes.size() < offset + img.size())
        throw std::runtime_error(origin + ": truncated PGM raster");
    for (std::size_t i = 0; i < img.size(); ++i)
        img[i] = gray_to_signal(static_cast<unsigned char>(bytes[offset + i]));
    return img;
}

inline std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

inline Image read_pgm(const fs::path& path) {
    return decode_pgm(read_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Ground truth: one "x,y,w,h" line per frame, 1-based, comma or tab separated
// ---------------------------------------------------------------------------

inline std::vector<BoundingBox> parse_ground_truth(const std::string& text,
                                                   const std::string& origin) {
    std::vector<BoundingBox> boxes;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        for (char& ch : line)
            if (ch == ',' || ch == '\t') ch = ' ';
        std::istringstream ls(line);
        double x, y, w, h;
        if (!(ls >> x >> y >> w >> h))
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": expected x,y,w,h");
        if (w <= 0 || h <= 0)
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": box dimensions must be positive");
        BoundingBox b;
        b.x = static_cast<int>(std::lround(x)) - 1;  // 1-based -> 0-based
        b.y = static_cast<int>(std::lround(y)) - 1;
        b.w = static_cast<int>(std::lround(w));
        b.h = static_cast<int>(std::lround(h));
        boxes.push_back(b);
    }
    return boxes;
}

inline std::vector<BoundingBox> load_ground_truth(const fs::path& path) {
    return parse_ground_truth(read_file(path), path.string());
}

inline std::string encode_ground_truth(const std::vector<BoundingBox>& boxes) {
    std::string out;
    for (const BoundingBox& b : boxes)
        out += std::to_string(b.x + 1) + "," + std::to_string(b.y + 1) + "," +
               std::to_string(b.w) + "," + std::to_string(b.h) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Frame sequences
// ---------------------------------------------------------------------------

inline std::vector<fs::path> list_frames(const fs::path& dir) {
    if (!fs::is_directory(dir))
        throw std::runtime_error("not a directory: " + dir.string());
    std::vector<fs::path> frames;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".png") frames.push_back(entry.path());
    }
    std::sort(frames.begin(), frames.end());
    if (frames.empty())
        throw std::runtime_error("no .pgm/.png frames in " + dir.string());
    return frames;
}

// ---------------------------------------------------------------------------
// Trained model JSON
// ---------------------------------------------------------------------------

inline json kernel_to_json(const DoGKernel& k) {
    json j;
    j["isotropic"] = !k.orientation_deg.has_value();
    if (k.orientation_deg) j["orientation_deg"] = *k.orientation_deg;
    j["steps1"] = k.steps1;
    j["steps2"] = k.steps2;
    return j;
}

inline DoGKernel kernel_from_json(const json& j) {
    const bool iso = j.at("isotropic").get<bool>();
    const double ang = iso ? 0.0 : j.at("orientation_deg").get<double>();
    return make_dog(iso, ang, j.at("steps1").get<int>(), j.at("steps2").get<int>());
}

inline std::string model_to_json(const TrainedModel& m) {
    json j;
    j["kernels"] = json::array();
    for (const DoGKernel& k : m.kernels) j["kernels"].push_back(kernel_to_json(k));
    j["weights"] = m.weights;
    j["final_threshold"] = m.final_threshold;
    j["reference_response_area"] = m.reference_response_area;
    j["ground_truth_box"] = {{"x", m.ground_truth_box.x},
                             {"y", m.ground_truth_box.y},
                             {"w", m.ground_truth_box.w},
                             {"h", m.ground_truth_box.h}};
    return j.dump(2) + "\n";
}

inline TrainedModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    TrainedModel m;
    for (const json& jk : j.at("kernels")) m.kernels.push_back(kernel_from_json(jk));
    m.weights = j.at("weights").get<std::vector<double>>();
    m.final_threshold = j.at("final_threshold").get<double>();
    m.reference_response_area = j.at("reference_response_area").get<double>();
    const json& jb = j.at("ground_truth_box");
    m.ground_truth_box = {jb.at("x").get<int>(), jb.at("y").get<int>(),
                          jb.at("w").get<int>(), jb.at("h").get<int>()};
    m.validate();
    return m;
}

// ---------------------------------------------------------------------------
// Results and curve CSV
// ---------------------------------------------------------------------------

struct FrameResult {
    int frame = 0;
    BoundingBox box;
    bool lost = false;
    long area = 0;
};

inline std::string encode_results_csv(const std::vector<FrameResult>& results) {
    std::string out = "frame,x,y,w,h,lost,area\n";
    for (const FrameResult& r : results)
        out += std::to_string(r.frame) + "," + std::to_string(r.box.x) + "," +
               std::to_string(r.box.y) + "," + std::to_string(r.box.w) + "," +
               std::to_string(r.box.h) + "," + (r.lost ? "1" : "0") + "," +
               std::to_string(r.area) + "\n";
    return out;
}

inline std::vector<FrameResult> parse_results_csv(const std::string& text,
                                                  const std::string& origin) {
    std::vector<FrameResult> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;  // header
        for (char& ch : line)
            if (ch == ',') ch = ' ';
        std::istringstream ls(line);
        FrameResult r;
        int lost;
        if (!(ls >> r.frame >> r.box.x >> r.box.y >> r.box.w >> r.box.h >> lost >> r.area))
            throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                     ": malformed results row");
        r.lost = lost != 0;
        out.push_back(r);
    }
    return out;
}

inline std::string encode_curve_csv(const SuccessCurve& c) {
    std::ostringstream os;
    os << "threshold,success_rate\n";
    char buf[64];
    for (int i = 0; i < SuccessCurve::kPoints; ++i) {
        std::snprintf(buf, sizeof buf, "%.2f,%.6f\n", c.thresholds[i], c.success_rate[i]);
        os << buf;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Cost pipeline JSON: [{"name":..., "duration_us":..., "ota_power_uw":...,
//                       "energy_uj": optional}, ...]
// ---------------------------------------------------------------------------

inline std::vector<PipelineStep> pipeline_from_json(const std::string& text) {
    const json j = json::parse(text);
    std::vector<PipelineStep> steps;
    for (const json& js : j) {
        PipelineStep s;
        s.name = js.at("name").get<std::string>();
        s.duration_us = js.at("duration_us").get<double>();
        s.ota_power_uw = js.at("ota_power_uw").get<double>();
        if (js.contains("energy_uj")) s.energy_override_uj = js["energy_uj"].get<double>();
        steps.push_back(std::move(s));
    }
    return steps;
}

}  // namespace cenn

#endif
