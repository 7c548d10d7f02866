#include "vcrp/sweep.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "vcrp/image_codec.hpp"
#include "vcrp/mask.hpp"
#include "vcrp/pgm.hpp"
#include "vcrp/video_codec.hpp"
#include "vcrp/y4m.hpp"

namespace vcrp {

namespace fs = std::filesystem;

RunManifest RunManifest::from_json(const std::string& text, const std::string& id) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("manifest: bad JSON: ") + e.what());
    }
    RunManifest m;
    m.id = id;
    if (j.contains("sequences")) m.sequences = j["sequences"].get<std::vector<std::string>>();
    if (j.contains("qps")) m.qps = j["qps"].get<std::vector<int>>();
    if (j.contains("frames")) m.frames = j["frames"].get<int>();
    if (j.contains("images")) m.images = j["images"].get<std::vector<std::string>>();
    if (j.contains("qualities")) m.qualities = j["qualities"].get<std::vector<int>>();
    if (j.contains("image_mask")) m.image_mask = j["image_mask"].get<std::string>();
    if (j.contains("seed")) m.seed = j["seed"].get<uint64_t>();
    if (j.contains("threads")) m.threads = j["threads"].get<int>();
    if (j.contains("out_dir")) m.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("mode_mask_table")) m.mode_mask_table = j["mode_mask_table"].get<std::string>();
    return m;
}

RunManifest RunManifest::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("manifest: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text, path);
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["sequences"] = sequences;
    j["qps"] = qps;
    j["frames"] = frames;
    j["images"] = images;
    j["qualities"] = qualities;
    j["image_mask"] = image_mask;
    j["seed"] = seed;
    j["threads"] = threads;
    j["out_dir"] = out_dir;
    if (!mode_mask_table.empty()) j["mode_mask_table"] = mode_mask_table;
    return j.dump(2);
}

void RunManifest::validate() const {
    if (sequences.empty() && images.empty())
        throw invalid_input("manifest: nothing to run (no sequences, no images)");
    if (!sequences.empty() && qps.empty()) throw invalid_input("manifest: empty QP list");
    if (!images.empty() && qualities.empty()) throw invalid_input("manifest: empty quality list");
    if (frames <= 0) throw invalid_input("manifest: frame count must be positive");
    if (threads <= 0) throw invalid_input("manifest: thread count must be positive");
    std::string missing;
    for (const auto& p : sequences)
        if (!fs::exists(p)) missing += "  " + p + "\n";
    for (const auto& p : images)
        if (!fs::exists(p)) missing += "  " + p + "\n";
    if (!mode_mask_table.empty() && !fs::exists(mode_mask_table))
        missing += "  " + mode_mask_table + "\n";
    if (!missing.empty()) throw invalid_input("manifest: missing input files:\n" + missing);
}

namespace {

struct VideoJob {
    size_t seq_idx;
    size_t qp_idx;
};

struct VideoJobResult {
    RDPoint baseline;
    RDPoint predicted;
    double gain_pct;
};

VideoJobResult run_video_job(const Y4mVideo& video, int qp, const ModeMaskTable& table) {
    VideoCodecConfig cfg;
    cfg.qp = qp;
    cfg.table = table;

    cfg.vcrespred = false;
    EncodedVideo base = encode_video(video.frames, cfg);
    cfg.vcrespred = true;
    EncodedVideo pred = encode_video(video.frames, cfg);

    auto kbps = [&](const EncodedVideo& e) {
        double payload_bits = static_cast<double>(e.stream.size() * 8 - e.header_bits);
        return payload_bits * video.fps() / static_cast<double>(video.frames.size()) / 1000.0;
    };
    auto mean_psnr = [&](const EncodedVideo& e) {
        double sum = 0.0;
        for (size_t f = 0; f < video.frames.size(); ++f) sum += psnr(e.recon[f], video.frames[f]).db;
        return sum / static_cast<double>(video.frames.size());
    };
    VideoJobResult r;
    r.baseline = {kbps(base), mean_psnr(base)};
    r.predicted = {kbps(pred), mean_psnr(pred)};
    double bb = static_cast<double>(base.stream.size() * 8 - base.header_bits);
    double pb = static_cast<double>(pred.stream.size() * 8 - pred.header_bits);
    r.gain_pct = (bb - pb) / bb * 100.0;
    return r;
}

}  // namespace

SweepResult rd_sweep(const RunManifest& manifest) {
    manifest.validate();
    SweepResult out;
    ModeMaskTable table = manifest.mode_mask_table.empty()
                              ? ModeMaskTable::defaults()
                              : ModeMaskTable::load(manifest.mode_mask_table);

    // Video part: independent (sequence, QP) jobs, merged in deterministic order.
    if (!manifest.sequences.empty()) {
        std::vector<Y4mVideo> videos;
        videos.reserve(manifest.sequences.size());
        for (const auto& path : manifest.sequences) videos.push_back(read_y4m(path, manifest.frames));

        std::vector<VideoJob> jobs;
        for (size_t s = 0; s < manifest.sequences.size(); ++s)
            for (size_t qi = 0; qi < manifest.qps.size(); ++qi) jobs.push_back({s, qi});
        std::vector<VideoJobResult> results(jobs.size());
        size_t next = 0;
        while (next < jobs.size()) {
            size_t batch = std::min<size_t>(static_cast<size_t>(manifest.threads),
                                            jobs.size() - next);
            std::vector<std::future<VideoJobResult>> futs;
            for (size_t b = 0; b < batch; ++b) {
                VideoJob jb = jobs[next + b];
                futs.push_back(std::async(std::launch::async, [&videos, &manifest, &table, jb] {
                    return run_video_job(videos[jb.seq_idx], manifest.qps[jb.qp_idx], table);
                }));
            }
            for (size_t b = 0; b < batch; ++b) results[next + b] = futs[b].get();
            next += batch;
        }

        for (size_t s = 0; s < manifest.sequences.size(); ++s) {
            SequenceResult sr;
            sr.name = fs::path(manifest.sequences[s]).stem().string();
            sr.baseline.label = sr.name + "-baseline";
            sr.predicted.label = sr.name + "-vcrespred";
            for (size_t qi = 0; qi < manifest.qps.size(); ++qi) {
                const VideoJobResult& jr = results[s * manifest.qps.size() + qi];
                sr.baseline.points.push_back(jr.baseline);
                sr.predicted.points.push_back(jr.predicted);
                sr.gain_pct_per_qp.push_back(jr.gain_pct);
            }
            // QP ascending = bitrate descending; RD curves want ascending rate.
            auto ascending = [](RDCurve& c) {
                std::sort(c.points.begin(), c.points.end(),
                          [](const RDPoint& a, const RDPoint& b) { return a.bitrate < b.bitrate; });
            };
            ascending(sr.baseline);
            ascending(sr.predicted);
            sr.bd_rate_pct = bd_rate(sr.baseline, sr.predicted);
            out.mean_bd_rate_pct += sr.bd_rate_pct;
            out.video.push_back(std::move(sr));
        }
        out.mean_bd_rate_pct /= static_cast<double>(out.video.size());
    }

    // Image part: baseline vs static-mask prediction at each quality.
    if (!manifest.images.empty()) {
        for (const auto& path : manifest.images) {
            PixelPlane img = read_pgm(path);
            ImageResult ir;
            ir.name = fs::path(path).stem().string();
            for (int qual : manifest.qualities) {
                ImageCodecConfig base_cfg;
                base_cfg.quant = make_jpeg_quant(qual, 8);
                base_cfg.restore_enabled = false;
                ImageCodecConfig pred_cfg = base_cfg;
                pred_cfg.restore_enabled = true;
                pred_cfg.mask = parse_mask(manifest.image_mask, 8);

                EncodedImage base = encode_image(img, base_cfg);
                EncodedImage pred = encode_image(img, pred_cfg);
                ir.qualities.push_back(qual);
                ir.base_bpp.push_back(base.report.bpp);
                ir.pred_bpp.push_back(pred.report.bpp);
                ir.gain_pct.push_back((base.report.bpp - pred.report.bpp) / base.report.bpp * 100.0);
                ir.base_psnr.push_back(psnr(base.local_recon, img).db);
                ir.pred_psnr.push_back(psnr(pred.local_recon, img).db);
            }
            double sum = 0.0;
            for (double g : ir.gain_pct) sum += g;
            ir.mean_gain_pct = sum / static_cast<double>(ir.gain_pct.size());
            out.mean_image_gain_pct += ir.mean_gain_pct;
            out.image.push_back(std::move(ir));
        }
        out.mean_image_gain_pct /= static_cast<double>(out.image.size());
    }
    return out;
}

std::string sweep_video_csv(const SweepResult& r, const RunManifest& m) {
    std::ostringstream os;
    os << "manifest,seed,sequence,qp,baseline_kbps,baseline_psnr,vcrespred_kbps,"
          "vcrespred_psnr,paired_gain_pct,bd_rate_pct\n";
    for (const auto& sr : r.video)
        for (size_t qi = 0; qi < m.qps.size(); ++qi) {
            // points were sorted by rate; recover QP pairing by descending rate
            size_t ri = m.qps.size() - 1 - qi;
            os << m.id << ',' << m.seed << ',' << sr.name << ',' << m.qps[qi] << ','
               << sr.baseline.points[ri].bitrate << ',' << sr.baseline.points[ri].psnr << ','
               << sr.predicted.points[ri].bitrate << ',' << sr.predicted.points[ri].psnr << ','
               << sr.gain_pct_per_qp[qi] << ',' << sr.bd_rate_pct << '\n';
        }
    return os.str();
}

std::string sweep_image_csv(const SweepResult& r, const RunManifest& m) {
    std::ostringstream os;
    os << "manifest,seed,image,quality,mask,baseline_bpp,vcrespred_bpp,gain_pct,"
          "baseline_psnr,vcrespred_psnr\n";
    for (const auto& ir : r.image)
        for (size_t qi = 0; qi < ir.qualities.size(); ++qi)
            os << m.id << ',' << m.seed << ',' << ir.name << ',' << ir.qualities[qi] << ','
               << m.image_mask << ',' << ir.base_bpp[qi] << ',' << ir.pred_bpp[qi] << ','
               << ir.gain_pct[qi] << ',' << ir.base_psnr[qi] << ',' << ir.pred_psnr[qi] << '\n';
    return os.str();
}

std::string gain_vs_bitrate_svg(const SweepResult& r) {
    const int w = 640, h = 420, ml = 60, mb = 50, mt = 20, mr = 20;
    double max_rate = 1.0, max_gain = 1.0, min_gain = 0.0;
    for (const auto& sr : r.video)
        for (size_t i = 0; i < sr.baseline.points.size(); ++i) {
            max_rate = std::max(max_rate, sr.baseline.points[i].bitrate);
            size_t gi = sr.gain_pct_per_qp.size() - 1 - i;
            max_gain = std::max(max_gain, sr.gain_pct_per_qp[gi]);
            min_gain = std::min(min_gain, sr.gain_pct_per_qp[gi]);
        }
    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='" << h << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<line x1='" << ml << "' y1='" << h - mb << "' x2='" << w - mr << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << h - mb
       << "' stroke='black'/>\n";
    os << "<text x='" << w / 2 << "' y='" << h - 12 << "' font-size='13'>bitrate (kbps)</text>\n";
    os << "<text x='14' y='" << h / 2 << "' font-size='13' transform='rotate(-90 14 " << h / 2
       << ")'>gain (%)</text>\n";
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
    auto sx = [&](double rate) { return ml + rate / max_rate * (w - ml - mr); };
    auto sy = [&](double gain) {
        return h - mb - (gain - min_gain) / (max_gain - min_gain + 1e-12) * (h - mt - mb);
    };
    int ci = 0;
    for (const auto& sr : r.video) {
        const char* col = colors[ci % 6];
        os << "<polyline fill='none' stroke='" << col << "' stroke-width='2' points='";
        for (size_t i = 0; i < sr.baseline.points.size(); ++i) {
            size_t gi = sr.gain_pct_per_qp.size() - 1 - i;
            os << sx(sr.baseline.points[i].bitrate) << ',' << sy(sr.gain_pct_per_qp[gi]) << ' ';
        }
        os << "'/>\n";
        os << "<text x='" << w - mr - 150 << "' y='" << mt + 16 * (ci + 1) << "' fill='" << col
           << "' font-size='12'>" << sr.name << " (BD " << sr.bd_rate_pct << "%)</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    return os.str();
}

void write_sweep_reports(const SweepResult& r, const RunManifest& m) {
    fs::create_directories(m.out_dir);
    auto dump = [&](const std::string& name, const std::string& text) {
        std::ofstream out(fs::path(m.out_dir) / name);
        if (!out) throw invalid_input("write_sweep_reports: cannot write " + name);
        out << text;
    };
    dump("manifest.json", m.to_json() + "\n");
    if (!r.video.empty()) {
        dump("video_rd.csv", sweep_video_csv(r, m));
        dump("gain_vs_bitrate.svg", gain_vs_bitrate_svg(r));
    }
    if (!r.image.empty()) dump("image_gains.csv", sweep_image_csv(r, m));
}

}  // namespace vcrp
