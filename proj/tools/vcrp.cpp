#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "vcrp/costmap.hpp"
#include "vcrp/image_codec.hpp"
#include "vcrp/metrics.hpp"
#include "vcrp/pgm.hpp"
#include "vcrp/sweep.hpp"
#include "vcrp/video_codec.hpp"
#include "vcrp/y4m.hpp"

namespace fs = std::filesystem;
using namespace vcrp;

namespace {

struct GlobalOpts {
    std::string config;
    uint64_t seed = 1;
    int threads = 1;
    std::string out_dir = ".";
};

struct SharedConfig {
    DescentConfig descent;
    std::string image_mask = "c10,c01";
    ModeMaskTable table = ModeMaskTable::defaults();
};

SharedConfig load_config(const GlobalOpts& g) {
    SharedConfig c;
    if (g.config.empty()) return c;
    std::ifstream in(g.config);
    if (!in) throw invalid_input("cannot open config: " + g.config);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("bad config JSON: ") + e.what());
    }
    if (j.contains("descent")) {
        const auto& d = j["descent"];
        if (d.contains("gamma0")) c.descent.gamma0 = d["gamma0"].get<double>();
        if (d.contains("schedule"))
            c.descent.schedule = d["schedule"].get<std::string>() == "harmonic"
                                     ? DescentConfig::Schedule::HARMONIC
                                     : DescentConfig::Schedule::FIXED;
        if (d.contains("max_iters")) c.descent.max_iters = d["max_iters"].get<int>();
        if (d.contains("stationarity_eps"))
            c.descent.stationarity_eps = d["stationarity_eps"].get<double>();
        if (d.contains("curv_eps")) c.descent.curv_eps = d["curv_eps"].get<double>();
    }
    if (j.contains("image_mask")) c.image_mask = j["image_mask"].get<std::string>();
    if (j.contains("mode_mask_table"))
        c.table = ModeMaskTable::load(j["mode_mask_table"].get<std::string>());
    return c;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    if (out.empty()) throw invalid_input("empty integer list: " + text);
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw invalid_input("cannot write " + path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-DCT image/intra-video compression testbed with TV-based "
                 "coefficient restoration"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOpts g;
    app.add_option("--config", g.config, "JSON config (descent params, masks, mode table)");
    app.add_option("--seed", g.seed, "RNG seed for randomized experiments");
    app.add_option("--threads", g.threads, "parallel jobs for sweeps");
    app.add_option("--out-dir", g.out_dir, "output directory for reports");

    auto* ie = app.add_subcommand("image-encode", "encode a PGM with the still-image codec");
    std::string ie_in, ie_out, ie_mask = "c10,c01";
    int ie_q = 50;
    bool ie_baseline = false;
    ie->add_option("--in", ie_in, "input PGM")->required();
    ie->add_option("--out", ie_out, "output stream")->required();
    ie->add_option("--q", ie_q, "JPEG quality 1..100");
    ie->add_option("--mask", ie_mask, "predicted coefficient set, e.g. c10,c01");
    ie->add_flag("--baseline", ie_baseline, "disable the restoration stage");

    auto* id = app.add_subcommand("image-decode", "decode a still-image stream");
    std::string id_in, id_out, id_mask = "c10,c01", id_stages;
    int id_q = 50;
    bool id_baseline = false;
    id->add_option("--in", id_in)->required();
    id->add_option("--out", id_out, "reconstruction PGM")->required();
    id->add_option("--q", id_q, "quality used at the encoder");
    id->add_option("--mask", id_mask, "mask used at the encoder");
    id->add_flag("--baseline", id_baseline);
    id->add_option("--stages-dir", id_stages, "dump per-stage reconstructions here");

    auto* ps = app.add_subcommand("position-study", "per-position cancellation/restoration study");
    std::string ps_corpus, ps_q = "25,50,75", ps_csv;
    ps->add_option("--corpus", ps_corpus, "directory of PGM images")->required();
    ps->add_option("--q", ps_q, "comma-separated qualities");
    ps->add_option("--csv", ps_csv, "output CSV")->required();

    auto* rc = app.add_subcommand("restore", "random cancellation/restoration experiment");
    std::string rc_in;
    double rc_pct = 10.0;
    rc->add_option("--in", rc_in)->required();
    rc->add_option("--pct", rc_pct, "percentage of AC coefficients to cancel");

    auto* orr = app.add_subcommand("optimal-reconstruct",
                                   "TV reconstruction inside quantization bins");
    std::string or_in, or_out;
    int or_q = 25;
    orr->add_option("--in", or_in)->required();
    orr->add_option("--out", or_out, "output PGM");
    orr->add_option("--q", or_q, "JPEG quality");

    auto* ve = app.add_subcommand("intra-encode", "encode Y4M frames, intra only");
    std::string ve_in, ve_out, ve_costmap, ve_vcres = "on";
    int ve_qp = 27, ve_frames = -1;
    ve->add_option("--in", ve_in)->required();
    ve->add_option("--out", ve_out)->required();
    ve->add_option("--qp", ve_qp, "QP 0..51");
    ve->add_option("--frames", ve_frames, "frame cap (-1 = all)");
    ve->add_option("--vcrespred", ve_vcres, "on|off");
    ve->add_option("--costmap", ve_costmap, "write per-block symbol cost map (PGM + CSV)");

    auto* vd = app.add_subcommand("intra-decode", "decode an intra-video stream");
    std::string vd_in, vd_out;
    vd->add_option("--in", vd_in)->required();
    vd->add_option("--out", vd_out, "output Y4M")->required();

    auto* sw = app.add_subcommand("rd-sweep", "run baseline-vs-prediction RD sweeps");
    std::string sw_manifest;
    sw->add_option("--manifest", sw_manifest, "JSON run manifest")->required();

    auto* bd = app.add_subcommand("bd-rate", "Bjontegaard rate difference of two RD curves");
    std::string bd_anchor, bd_test;
    bd->add_option("--anchor", bd_anchor, "CSV of bitrate,psnr rows")->required();
    bd->add_option("--test", bd_test, "CSV of bitrate,psnr rows")->required();

    auto* cm = app.add_subcommand("costmap", "render a symbol cost map CSV to PGM");
    std::string cm_in, cm_out;
    cm->add_option("--in", cm_in, "cost map CSV")->required();
    cm->add_option("--out", cm_out, "output PGM")->required();

    auto* sy = app.add_subcommand("synth", "generate deterministic demo content");
    std::string sy_kind = "image", sy_out;
    int sy_w = 512, sy_h = 512, sy_frames = 49;
    sy->add_option("--kind", sy_kind, "image|video");
    sy->add_option("--out", sy_out)->required();
    sy->add_option("--width", sy_w);
    sy->add_option("--height", sy_h);
    sy->add_option("--frames", sy_frames);

    try {
        app.parse(argc, argv);
        SharedConfig cfg = load_config(g);

        if (*ie) {
            PixelPlane img = read_pgm(ie_in);
            ImageCodecConfig icfg;
            icfg.quant = make_jpeg_quant(ie_q, 8);
            icfg.descent = cfg.descent;
            icfg.restore_enabled = !ie_baseline;
            if (!ie_baseline) icfg.mask = parse_mask(ie_mask.empty() ? cfg.image_mask : ie_mask, 8);
            EncodedImage enc = encode_image(img, icfg);
            write_stream_file(ie_out, enc.stream);
            std::cout << "bits " << enc.report.total_bits << "  bpp " << enc.report.bpp
                      << "  psnr " << psnr(enc.local_recon, img).to_string() << "\n";
        } else if (*id) {
            ImageCodecConfig icfg;
            icfg.quant = make_jpeg_quant(id_q, 8);
            icfg.descent = cfg.descent;
            icfg.restore_enabled = !id_baseline;
            if (!id_baseline) icfg.mask = parse_mask(id_mask.empty() ? cfg.image_mask : id_mask, 8);
            DecodedImage dec = decode_image(read_stream_file(id_in), icfg);
            write_pgm(dec.recon, id_out);
            if (!id_stages.empty()) {
                fs::create_directories(id_stages);
                write_pgm(dec.stage1, (fs::path(id_stages) / "stage1.pgm").string());
                write_pgm(dec.stage2, (fs::path(id_stages) / "stage2.pgm").string());
                write_pgm(dec.stage3, (fs::path(id_stages) / "stage3.pgm").string());
            }
            std::cout << "decoded " << dec.recon.width << "x" << dec.recon.height << "\n";
        } else if (*ps) {
            std::vector<PixelPlane> corpus;
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(ps_corpus))
                if (e.path().extension() == ".pgm") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) corpus.push_back(read_pgm(f.string()));
            if (corpus.empty()) throw invalid_input("no .pgm files in " + ps_corpus);
            auto rows = position_study(corpus, parse_int_list(ps_q), cfg.descent);
            write_text(ps_csv, position_study_csv(rows));
            std::cout << "wrote " << rows.size() << " rows to " << ps_csv << "\n";
        } else if (*rc) {
            PixelPlane img = read_pgm(rc_in);
            CancellationResult res =
                random_cancellation_experiment(img, rc_pct, cfg.descent, g.seed);
            std::cout << "cancelled " << res.cancelled << " coefficients\n"
                      << "psnr zero-filled " << res.psnr_before << " dB\n"
                      << "psnr restored   " << res.psnr_after << " dB\n";
        } else if (*orr) {
            PixelPlane img = read_pgm(or_in);
            QuantSpec q = make_jpeg_quant(or_q, 8);
            QuantizedPlane qp = quantize_plane(img, q, 8);
            PixelPlane plain = dequantize_plane(qp, q);
            PixelPlane rec = optimal_reconstruct(qp, q, cfg.descent);
            if (!or_out.empty()) write_pgm(rec, or_out);
            std::cout << "psnr plain dequant " << psnr(plain, img).to_string() << "\n"
                      << "psnr reconstructed " << psnr(rec, img).to_string() << "\n";
        } else if (*ve) {
            if (ve_vcres != "on" && ve_vcres != "off")
                throw invalid_input("--vcrespred must be on or off");
            Y4mVideo video = read_y4m(ve_in, ve_frames);
            VideoCodecConfig vcfg;
            vcfg.qp = ve_qp;
            vcfg.vcrespred = ve_vcres == "on";
            vcfg.table = cfg.table;
            vcfg.descent = cfg.descent;
            EncodedVideo enc = encode_video(video.frames, vcfg);
            write_stream_file(ve_out, enc.stream);
            double kbps = static_cast<double>(enc.stream.size() * 8 - enc.header_bits) *
                          video.fps() / video.frames.size() / 1000.0;
            double mean_psnr = 0;
            for (size_t f = 0; f < video.frames.size(); ++f)
                mean_psnr += psnr(enc.recon[f], video.frames[f]).db;
            mean_psnr /= static_cast<double>(video.frames.size());
            std::cout << "frames " << video.frames.size() << "  rate " << kbps << " kbps  psnr "
                      << mean_psnr << " dB\n";
            if (!ve_costmap.empty()) {
                VideoCodecConfig ocfg = vcfg;
                ocfg.vcrespred = !vcfg.vcrespred;
                EncodedVideo other = encode_video(video.frames, ocfg);
                const EncodedVideo& baseline = vcfg.vcrespred ? other : enc;
                const EncodedVideo& predicted = vcfg.vcrespred ? enc : other;
                SymbolCostMap map;
                map.block_size = block_size_for_width(video.width);
                map.baseline = baseline.block_bins[0];
                map.predicted = predicted.block_bins[0];
                write_pgm(costmap_render(map), ve_costmap);
                write_text(ve_costmap + ".csv", map.to_csv());
            }
        } else if (*vd) {
            DecodedVideo dec = decode_video(read_stream_file(vd_in), cfg.table, cfg.descent);
            Y4mVideo out;
            out.width = dec.frames[0].width;
            out.height = dec.frames[0].height;
            out.frames = dec.frames;
            write_y4m(out, vd_out);
            std::cout << "decoded " << dec.frames.size() << " frames\n";
        } else if (*sw) {
            RunManifest m = RunManifest::from_json_file(sw_manifest);
            if (g.threads > 1) m.threads = g.threads;
            if (g.out_dir != ".") m.out_dir = g.out_dir;
            SweepResult r = rd_sweep(m);
            write_sweep_reports(r, m);
            for (const auto& s : r.video)
                std::cout << s.name << " bd-rate " << s.bd_rate_pct << " %\n";
            for (const auto& i : r.image)
                std::cout << i.name << " mean rate gain " << i.mean_gain_pct << " %\n";
            if (!r.video.empty())
                std::cout << "video mean bd-rate " << r.mean_bd_rate_pct << " %\n";
            if (!r.image.empty())
                std::cout << "image mean rate gain " << r.mean_image_gain_pct << " %\n";
        } else if (*bd) {
            auto load_curve = [](const std::string& path) {
                std::ifstream in(path);
                if (!in) throw invalid_input("cannot open " + path);
                RDCurve c;
                c.label = path;
                std::string line;
                while (std::getline(in, line)) {
                    if (line.empty() || !isdigit(static_cast<unsigned char>(line[0]))) continue;
                    std::stringstream ls(line);
                    RDPoint p;
                    char comma;
                    if (ls >> p.bitrate >> comma >> p.psnr) c.points.push_back(p);
                }
                std::sort(c.points.begin(), c.points.end(),
                          [](const RDPoint& a, const RDPoint& b) { return a.bitrate < b.bitrate; });
                return c;
            };
            std::cout << "bd-rate " << bd_rate(load_curve(bd_anchor), load_curve(bd_test))
                      << " %\n";
        } else if (*cm) {
            std::ifstream in(cm_in);
            if (!in) throw invalid_input("cannot open " + cm_in);
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            write_pgm(costmap_render(SymbolCostMap::from_csv(text)), cm_out);
        } else if (*sy) {
            auto gen_frame = [&](int w, int h, int f, uint64_t seed) {
                PixelPlane p(w, h);
                for (int r = 0; r < h; ++r)
                    for (int c = 0; c < w; ++c) {
                        double x = c + 1.4 * f, y = r + 0.5 * f;
                        double v = 110 + 35 * std::sin(0.018 * x + 0.7) * std::sin(0.023 * y);
                        v += 60.0 / (1.0 + std::exp(-(0.8 * x + 0.6 * y - 0.6 * w) / 1.2));
                        v += 45 * std::exp(-(std::pow(x - w * 0.4, 2) + std::pow(y - h * 0.5, 2)) /
                                           (2.0 * 180.0));
                        v += 3.0 * std::sin(0.6 * x + static_cast<double>(seed % 7)) *
                             std::sin(0.5 * y);
                        p.samples(r, c) = clamp8(v);
                    }
                return p;
            };
            if (sy_kind == "image") {
                write_pgm(gen_frame(sy_w, sy_h, 0, g.seed), sy_out);
            } else if (sy_kind == "video") {
                Y4mVideo v;
                v.width = sy_w;
                v.height = sy_h;
                for (int f = 0; f < sy_frames; ++f)
                    v.frames.push_back(gen_frame(sy_w, sy_h, f, g.seed));
                write_y4m(v, sy_out);
            } else {
                throw invalid_input("synth --kind must be image or video");
            }
            std::cout << "wrote " << sy_out << "\n";
        }
        return 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const stream_error& e) {
        std::cerr << "stream error: " << e.what() << "\n";
        return 3;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
