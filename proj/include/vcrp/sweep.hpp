#ifndef VCRP_SWEEP_HPP
#define VCRP_SWEEP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vcrp/metrics.hpp"
#include "vcrp/mode_masks.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

// Fully determines a sweep run; serialized alongside the results.
struct RunManifest {
    std::vector<std::string> sequences;  // Y4M paths (video part)
    std::vector<int> qps = {22, 27, 32, 37};
    int frames = 49;

    std::vector<std::string> images;  // PGM paths (image part)
    std::vector<int> qualities = {25, 50, 75};
    std::string image_mask = "c10,c01";

    uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = "sweep-out";
    std::string mode_mask_table;  // optional JSON override path
    std::string id = "inline";    // provenance tag for CSV rows

    static RunManifest from_json_file(const std::string& path);
    static RunManifest from_json(const std::string& text, const std::string& id);
    std::string to_json() const;
    void validate() const;
};

struct SequenceResult {
    std::string name;
    RDCurve baseline;
    RDCurve predicted;
    std::vector<double> gain_pct_per_qp;  // paired rate saving at each QP
    double bd_rate_pct = 0.0;             // negative = saving
};

struct ImageResult {
    std::string name;
    std::vector<int> qualities;
    std::vector<double> base_bpp, pred_bpp, gain_pct, base_psnr, pred_psnr;
    double mean_gain_pct = 0.0;
};

struct SweepResult {
    std::vector<SequenceResult> video;
    std::vector<ImageResult> image;
    double mean_bd_rate_pct = 0.0;
    double mean_image_gain_pct = 0.0;
};

SweepResult rd_sweep(const RunManifest& manifest);

// CSV is the canonical artifact; SVG plots are generated directly.
std::string sweep_video_csv(const SweepResult& r, const RunManifest& m);
std::string sweep_image_csv(const SweepResult& r, const RunManifest& m);
std::string gain_vs_bitrate_svg(const SweepResult& r);
void write_sweep_reports(const SweepResult& r, const RunManifest& m);

}  // namespace vcrp

#endif
