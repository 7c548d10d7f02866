#include "vcrp/video_codec.hpp"

#include <array>
#include <cstring>
#include <tuple>
#include <functional>

#include "vcrp/coeff_syntax.hpp"
#include "vcrp/dct.hpp"
#include "vcrp/intra.hpp"
#include "vcrp/scan.hpp"

namespace vcrp {

uint64_t plane_hash(const PixelPlane& plane) {
    uint64_t h = 1469598103934665603ull;
    for (int r = 0; r < plane.height; ++r)
        for (int c = 0; c < plane.width; ++c) {
            double v = plane.samples(r, c);
            uint64_t bits;
            static_assert(sizeof(bits) == sizeof(v));
            std::memcpy(&bits, &v, sizeof(bits));
            for (int b = 0; b < 8; ++b) {
                h ^= (bits >> (8 * b)) & 0xFF;
                h *= 1099511628211ull;
            }
        }
    return h;
}

namespace {

// Walk the masked coefficients in prediction order: run the single-coefficient
// descent on the support, quantize/consume the prediction error, fold the
// reconstructed coefficient back into the support. Identical at both ends;
// only the error-level source differs.
// `have_support` gates the descent: with an all-zero support there is no
// in-block evidence and predictions are pure extrapolation noise, so both
// sides skip the descent and code the raw levels.
Mat hierarchical_predict(Mat beta, const Block& pred, const PatchContext& ring,
                         const ModeMaskEntry& entry, const DescentConfig& descent, double step,
                         bool have_support,
                         const std::function<int(size_t, const FreqPos&, double)>& error_level) {
    const int n = static_cast<int>(beta.rows());
    for (size_t k = 0; k < entry.mask.order.size(); ++k) {
        const FreqPos& pos = entry.mask.order[k];
        if (have_support) {
            CoeffMask single(n, {pos});
            RestoreResult rr = restore_block(ring, pred, CoeffBlock(beta), single, descent);
            beta = rr.coeffs.coeffs;
        }
        int elev = error_level(k, pos, beta(pos.first, pos.second));
        beta(pos.first, pos.second) += elev * step;
    }
    return beta;
}

// Support levels travel in the mode's scan order with the masked positions
// removed; prediction errors follow as their own short sequence.
std::vector<FreqPos> support_positions(const ScanOrder& scan, const CoeffMask& mask) {
    std::vector<FreqPos> out;
    out.reserve(scan.positions.size() - mask.i_dct.size());
    for (const auto& pos : scan.positions)
        if (!mask.contains(pos.first, pos.second)) out.push_back(pos);
    return out;
}

std::array<ScanOrder, 4> all_scans(int n) {
    return {make_scan(ScanKind::ZIGZAG, n), make_scan(ScanKind::ROW_FIRST, n),
            make_scan(ScanKind::COLUMN_FIRST, n), make_scan(ScanKind::DIAG_DOWNLEFT, n)};
}

const ScanOrder& pick_scan(const std::array<ScanOrder, 4>& scans, ScanKind k) {
    return scans[static_cast<size_t>(k)];
}

struct ModeMemory {
    int bw;
    std::vector<int> modes;  // per block, -1 while undecided

    explicit ModeMemory(int bw_, int bh) : bw(bw_), modes(static_cast<size_t>(bw_) * bh, -1) {}
    int left(int br, int bc) const { return bc > 0 ? modes[static_cast<size_t>(br) * bw + bc - 1] : -1; }
    int top(int br, int bc) const { return br > 0 ? modes[static_cast<size_t>(br - 1) * bw + bc] : -1; }
    void set(int br, int bc, int m) { modes[static_cast<size_t>(br) * bw + bc] = m; }
};

}  // namespace

EncodedVideo encode_video(const std::vector<PixelPlane>& frames, const VideoCodecConfig& cfg) {
    if (frames.empty()) throw invalid_input("encode_video: no frames");
    const int w = frames[0].width, h = frames[0].height;
    const int n = cfg.block_size.value_or(block_size_for_width(w));
    if (n != 4 && n != 8) throw invalid_input("encode_video: block size must be 4 or 8");
    if (w > 65535 || h > 65535 || frames.size() > 65535)
        throw invalid_input("encode_video: dimensions or frame count exceed the stream format");
    if (w % n || h % n) throw invalid_input("encode_video: dimensions not divisible by block size");
    for (const auto& f : frames)
        if (f.width != w || f.height != h) throw invalid_input("encode_video: frame size mismatch");

    const QuantSpec q = make_qp_quant(cfg.qp, n);
    const double step = q.table(0, 0);
    // conservative steps: prediction quality beats descent convergence here
    DescentConfig descent = cfg.descent.resolved(0.01 * step);
    descent.couple_ring = true;  // causal neighbors feed the curvature
    const std::array<ScanOrder, 4> scans = all_scans(n);
    const int bw = w / n, bh = h / n;

    StreamHeader hdr;
    hdr.codec = kCodecIntraVideo;
    hdr.width = static_cast<uint16_t>(w);
    hdr.height = static_cast<uint16_t>(h);
    hdr.block_size = static_cast<uint8_t>(n);
    hdr.quant_kind = QuantKind::QP_UNIFORM;
    hdr.quality_or_qp = static_cast<uint8_t>(cfg.qp);
    hdr.flags = cfg.vcrespred ? (kFlagPredictionEnabled | kFlagPerModeMasks) : 0;
    hdr.frame_count = static_cast<uint16_t>(frames.size());
    BitstreamWriter bwr;
    hdr.write(bwr);

    EncodedVideo out;
    out.header_bits = bwr.bit_count();

    RangeEncoder enc;
    for (const PixelPlane& orig : frames) {
        CoeffContexts cctx, ectx;
        ModeContexts mctx;
        ModeMemory mem(bw, bh);
        PixelPlane recon(w, h);
        Eigen::ArrayXXi bins = Eigen::ArrayXXi::Zero(bh, bw);
        Eigen::ArrayXXi mode_map = Eigen::ArrayXXi::Zero(bh, bw);
        for (int br = 0; br < bh; ++br)
            for (int bc = 0; bc < bw; ++bc) {
                const int r0 = br * n, c0 = bc * n;
                const Mat orig_block = orig.samples.block(r0, c0, n, n);

                // Mode decision on original-plane neighbors so the choice is
                // independent of the residual coding path.
                IntraNeighbors nb_orig = gather_neighbors(orig.samples, r0, c0, n);
                int mode = choose_mode(orig_block, nb_orig);
                int mpm = most_probable_mode(mem.left(br, bc), mem.top(br, bc));
                out.mode_bins += static_cast<size_t>(encode_mode(mode, mpm, enc, mctx));
                mem.set(br, bc, mode);
                mode_map(br, bc) = mode;

                IntraNeighbors nb = gather_neighbors(recon.samples, r0, c0, n);
                Block pred = intra_predict(mode, nb, n);
                Mat resid = forward_dct(orig_block - pred.samples);

                const ModeMaskEntry& entry = cfg.table.entry(n, mode);
                const bool use_pred = cfg.vcrespred && !entry.mask.empty();
                const ScanOrder& scan_ref =
                    pick_scan(scans, use_pred ? entry.scan : ScanKind::ZIGZAG);

                Mat rhat(n, n);
                int b = 0;
                if (!use_pred) {
                    std::vector<int> seq(static_cast<size_t>(n) * n, 0);
                    for (size_t p = 0; p < scan_ref.positions.size(); ++p) {
                        const auto& [i, j] = scan_ref.positions[p];
                        seq[p] = static_cast<int>(quantize_scalar(resid(i, j), step));
                        rhat(i, j) = seq[p] * step;
                    }
                    b = encode_levels(seq, enc, cctx);
                } else {
                    const std::vector<FreqPos> support = support_positions(scan_ref, entry.mask);
                    std::vector<int> seq(support.size(), 0);
                    Mat beta = Mat::Zero(n, n);
                    for (size_t p = 0; p < support.size(); ++p) {
                        const auto& [i, j] = support[p];
                        int lev = static_cast<int>(quantize_scalar(resid(i, j), step));
                        seq[p] = lev;
                        beta(i, j) = lev * step;
                    }
                    std::vector<int> errs(entry.mask.order.size(), 0);
                    bool have_support = false;
                    for (int v : seq) have_support = have_support || v != 0;
                    PatchContext ring = ring_from_plane(recon.samples, r0, c0, n, true);
                    rhat = hierarchical_predict(
                        std::move(beta), pred, ring, entry, descent, step, have_support,
                        [&](size_t k, const FreqPos& pos, double predicted) {
                            int elev = static_cast<int>(
                                quantize_scalar(resid(pos.first, pos.second) - predicted, step));
                            errs[k] = elev;
                            return elev;
                        });
                    b = encode_levels2(errs, seq, enc, ectx, cctx);
                }
                bins(br, bc) = b;
                out.residual_bins += static_cast<size_t>(b);

                recon.samples.block(r0, c0, n, n) = pred.samples + inverse_dct(rhat);
            }
        out.block_bins.push_back(std::move(bins));
        out.modes.push_back(std::move(mode_map));
        out.sync_proof.push_back(plane_hash(recon));
        out.recon.push_back(std::move(recon));
    }

    std::vector<uint8_t> payload = enc.finish();
    out.stream = bwr.take();
    out.stream.insert(out.stream.end(), payload.begin(), payload.end());
    return out;
}

DecodedVideo decode_video(const std::vector<uint8_t>& stream, const ModeMaskTable& table,
                          const DescentConfig& descent_cfg) {
    BitstreamReader br(stream);
    StreamHeader hdr = StreamHeader::read(br);
    if (hdr.codec != kCodecIntraVideo) throw stream_error("decode_video: not an intra-video stream");
    if (hdr.quant_kind != QuantKind::QP_UNIFORM) throw stream_error("decode_video: bad quant kind");
    const int w = hdr.width, h = hdr.height;
    const int n = hdr.block_size;
    if (n != 4 && n != 8) throw stream_error("decode_video: bad block size");
    if (w <= 0 || h <= 0 || w % n || h % n) throw stream_error("decode_video: bad dimensions");
    const bool vcrespred = (hdr.flags & kFlagPredictionEnabled) != 0;

    const QuantSpec q = make_qp_quant(hdr.quality_or_qp, n);
    const double step = q.table(0, 0);
    DescentConfig descent = descent_cfg.resolved(0.01 * step);
    descent.couple_ring = true;
    const std::array<ScanOrder, 4> scans = all_scans(n);
    const int bw = w / n, bh = h / n;

    if (stream.size() <= StreamHeader::kByteSize) throw stream_error("decode_video: no payload");
    RangeDecoder dec(stream.data() + StreamHeader::kByteSize,
                     stream.size() - StreamHeader::kByteSize);

    DecodedVideo out;
    for (int f = 0; f < hdr.frame_count; ++f) {
        CoeffContexts cctx, ectx;
        ModeContexts mctx;
        ModeMemory mem(bw, bh);
        PixelPlane recon(w, h);
        for (int br2 = 0; br2 < bh; ++br2)
            for (int bc = 0; bc < bw; ++bc) {
                const int r0 = br2 * n, c0 = bc * n;
                int mpm = most_probable_mode(mem.left(br2, bc), mem.top(br2, bc));
                int mode = -1;
                std::vector<int> seq, errs;
                const ModeMaskEntry* entry = nullptr;
                bool use_pred = false;
                const ScanOrder* scan_ref = nullptr;
                try {
                    mode = decode_mode(mpm, dec, mctx);
                    entry = &table.entry(n, mode);
                    use_pred = vcrespred && !entry->mask.empty();
                    scan_ref = &pick_scan(scans, use_pred ? entry->scan : ScanKind::ZIGZAG);
                    if (!use_pred) {
                        seq = decode_levels(n * n, dec, cctx);
                    } else {
                        int nsupp = n * n - static_cast<int>(entry->mask.i_dct.size());
                        std::tie(errs, seq) = decode_levels2(
                            static_cast<int>(entry->mask.i_dct.size()), nsupp, dec, ectx, cctx);
                    }
                } catch (const stream_error& e) {
                    throw stream_error(std::string(e.what()) + " (frame " + std::to_string(f) +
                                       ", block " + std::to_string(br2) + "," + std::to_string(bc) +
                                       ")");
                }
                mem.set(br2, bc, mode);

                IntraNeighbors nb = gather_neighbors(recon.samples, r0, c0, n);
                Block pred = intra_predict(mode, nb, n);

                Mat rhat(n, n);
                if (!use_pred) {
                    for (size_t p = 0; p < scan_ref->positions.size(); ++p) {
                        const auto& [i, j] = scan_ref->positions[p];
                        rhat(i, j) = seq[p] * step;
                    }
                } else {
                    const std::vector<FreqPos> support = support_positions(*scan_ref, entry->mask);
                    Mat beta = Mat::Zero(n, n);
                    for (size_t p = 0; p < support.size(); ++p)
                        beta(support[p].first, support[p].second) = seq[p] * step;
                    bool have_support = false;
                    for (int v : seq) have_support = have_support || v != 0;
                    PatchContext ring = ring_from_plane(recon.samples, r0, c0, n, true);
                    rhat = hierarchical_predict(
                        std::move(beta), pred, ring, *entry, descent, step, have_support,
                        [&](size_t k, const FreqPos&, double) { return errs[k]; });
                }
                recon.samples.block(r0, c0, n, n) = pred.samples + inverse_dct(rhat);
            }
        out.sync_proof.push_back(plane_hash(recon));
        out.frames.push_back(std::move(recon));
    }
    return out;
}

}  // namespace vcrp
