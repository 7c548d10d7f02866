#include "vcrp/image_codec.hpp"

#include <random>
#include <sstream>

#include "vcrp/coeff_syntax.hpp"
#include "vcrp/dct.hpp"
#include "vcrp/metrics.hpp"
#include "vcrp/scan.hpp"

namespace vcrp {

namespace {

constexpr int kN = 8;

struct BlockGrid {
    int bw = 0, bh = 0;
    int count() const { return bw * bh; }
};

BlockGrid grid_for(const PixelPlane& plane) {
    if (plane.width % kN || plane.height % kN)
        throw invalid_input("image codec: dimensions must be divisible by 8");
    if (plane.width > 65535 || plane.height > 65535)
        throw invalid_input("image codec: dimensions exceed the stream format");
    return {plane.width / kN, plane.height / kN};
}

DescentConfig effective_descent(const ImageCodecConfig& cfg) {
    return cfg.descent.resolved(0.05 * cfg.quant.mean_step());
}

// Level layout per block: support positions in zigzag order with the masked
// positions removed, then the prediction-error levels in prediction order.
std::vector<FreqPos> support_scan(const CoeffMask& mask) {
    ScanOrder zz = make_scan(ScanKind::ZIGZAG, kN);
    std::vector<FreqPos> out;
    for (const auto& pos : zz.positions)
        if (!mask.contains(pos.first, pos.second)) out.push_back(pos);
    return out;
}

}  // namespace

EncodedImage encode_image(const PixelPlane& plane, const ImageCodecConfig& cfg) {
    BlockGrid g = grid_for(plane);
    const QuantSpec& q = cfg.quant;
    if (q.size() != kN) throw invalid_input("image codec: quantizer must be 8x8");
    const bool predict = cfg.prediction_active();
    CoeffMask mask = predict ? cfg.mask : CoeffMask(kN, {});
    mask.sort_order_by(make_scan(ScanKind::ZIGZAG, kN));
    const std::vector<FreqPos> scan_io = support_scan(mask);
    const DescentConfig descent = effective_descent(cfg);

    // Pass 1: transform, quantize, and build the support-only plane the
    // restoration stage sees at the decoder.
    std::vector<Mat> orig_coeffs(static_cast<size_t>(g.count()));
    std::vector<Mat> step1_coeffs(static_cast<size_t>(g.count()));
    PixelPlane step1(plane.width, plane.height);
    std::vector<Mat> levels(static_cast<size_t>(g.count()));
    int bi = 0;
    for (int br = 0; br < g.bh; ++br)
        for (int bc = 0; bc < g.bw; ++bc, ++bi) {
            int r0 = br * kN, c0 = bc * kN;
            CoeffBlock cb = forward_bdct(Block(r0, c0, plane.samples.block(r0, c0, kN, kN)));
            orig_coeffs[bi] = cb.coeffs;
            Mat lev = quantize(cb, q).coeffs;
            Mat dec = lev.array() * q.table.array();
            for (const auto& [i, j] : mask.i_dct) {
                lev(i, j) = 0;
                dec(i, j) = 0;
            }
            levels[bi] = lev;
            step1_coeffs[bi] = dec;
            step1.samples.block(r0, c0, kN, kN) = inverse_dct(dec);
        }

    // Pass 2: restore the masked coefficients from the support plane and
    // quantize the prediction errors.
    std::vector<Mat> predicted(static_cast<size_t>(g.count()));
    std::vector<Mat> error_levels(static_cast<size_t>(g.count()));
    PixelPlane recon(plane.width, plane.height);
    Block zero_pred(Mat::Zero(kN, kN));
    bi = 0;
    for (int br = 0; br < g.bh; ++br)
        for (int bc = 0; bc < g.bw; ++bc, ++bi) {
            int r0 = br * kN, c0 = bc * kN;
            Mat rec_coeffs = step1_coeffs[bi];
            if (predict) {
                PatchContext ctx = ring_from_plane(step1.samples, r0, c0, kN, false);
                RestoreResult rr = restore_block(ctx, zero_pred, CoeffBlock(step1_coeffs[bi]),
                                                 mask, descent);
                predicted[bi] = rr.coeffs.coeffs;
                error_levels[bi] = Mat::Zero(kN, kN);
                for (const auto& [i, j] : mask.i_dct) {
                    double e = orig_coeffs[bi](i, j) - predicted[bi](i, j);
                    double lv = quantize_scalar(e, q.step(i, j));
                    error_levels[bi](i, j) = lv;
                    rec_coeffs(i, j) = predicted[bi](i, j) + lv * q.step(i, j);
                }
            }
            recon.samples.block(r0, c0, kN, kN) = inverse_dct(rec_coeffs);
        }

    // Pass 3: entropy coding.
    StreamHeader hdr;
    hdr.codec = kCodecImage;
    hdr.width = static_cast<uint16_t>(plane.width);
    hdr.height = static_cast<uint16_t>(plane.height);
    hdr.block_size = kN;
    hdr.quant_kind = q.kind;
    hdr.quality_or_qp = static_cast<uint8_t>(q.quality);
    hdr.flags = predict ? kFlagPredictionEnabled : 0;
    hdr.frame_count = 1;
    BitstreamWriter bw;
    hdr.write(bw);

    RangeEncoder enc;
    CoeffContexts ctx_io, ctx_err;
    for (bi = 0; bi < g.count(); ++bi) {
        std::vector<int> seq;
        seq.reserve(scan_io.size());
        for (const auto& [i, j] : scan_io) seq.push_back(static_cast<int>(levels[bi](i, j)));
        encode_levels(seq, enc, ctx_io);
        if (predict) {
            std::vector<int> errs;
            errs.reserve(mask.order.size());
            for (const auto& [i, j] : mask.order)
                errs.push_back(static_cast<int>(error_levels[bi](i, j)));
            encode_levels(errs, enc, ctx_err);
        }
    }
    std::vector<uint8_t> payload = enc.finish();

    EncodedImage out;
    out.stream = bw.take();
    out.report.header_bits = out.stream.size() * 8;
    out.stream.insert(out.stream.end(), payload.begin(), payload.end());
    out.report.total_bits = out.stream.size() * 8;
    out.report.bpp = static_cast<double>(out.report.total_bits) /
                     (static_cast<double>(plane.width) * plane.height);
    out.local_recon = std::move(recon);

    // Per-position entropy of what actually got coded.
    out.report.position_entropy = Mat::Zero(kN, kN);
    for (int i = 0; i < kN; ++i)
        for (int j = 0; j < kN; ++j) {
            std::vector<int> sym(static_cast<size_t>(g.count()));
            bool masked = mask.contains(i, j);
            for (bi = 0; bi < g.count(); ++bi)
                sym[static_cast<size_t>(bi)] = static_cast<int>(
                    masked ? error_levels[bi](i, j) : levels[bi](i, j));
            out.report.position_entropy(i, j) = entropy_estimate(sym);
        }
    return out;
}

DecodedImage decode_image(const std::vector<uint8_t>& stream, const ImageCodecConfig& cfg) {
    BitstreamReader br(stream);
    StreamHeader hdr = StreamHeader::read(br);
    if (hdr.codec != kCodecImage) throw stream_error("decode_image: not an image stream");
    const bool predict = (hdr.flags & kFlagPredictionEnabled) != 0;
    if (predict != cfg.prediction_active())
        throw invalid_input("decode_image: config prediction stage does not match stream flags");
    const QuantSpec& q = cfg.quant;
    if (hdr.quant_kind != q.kind || hdr.quality_or_qp != static_cast<uint8_t>(q.quality))
        throw invalid_input("decode_image: config quantizer does not match stream");
    PixelPlane dims(hdr.width, hdr.height);
    BlockGrid g = grid_for(dims);

    CoeffMask mask = predict ? cfg.mask : CoeffMask(kN, {});
    mask.sort_order_by(make_scan(ScanKind::ZIGZAG, kN));
    const std::vector<FreqPos> scan_io = support_scan(mask);
    const DescentConfig descent = effective_descent(cfg);

    if (stream.size() <= StreamHeader::kByteSize) throw stream_error("decode_image: no payload");
    RangeDecoder dec(stream.data() + StreamHeader::kByteSize, stream.size() - StreamHeader::kByteSize);
    CoeffContexts ctx_io, ctx_err;

    std::vector<Mat> step1_coeffs(static_cast<size_t>(g.count()));
    std::vector<Mat> error_levels(static_cast<size_t>(g.count()));
    DecodedImage out;
    out.stage1 = PixelPlane(hdr.width, hdr.height);
    int bi = 0;
    for (int br2 = 0; br2 < g.bh; ++br2)
        for (int bc = 0; bc < g.bw; ++bc, ++bi) {
            std::vector<int> seq, errs;
            try {
                seq = decode_levels(static_cast<int>(scan_io.size()), dec, ctx_io);
                if (predict)
                    errs = decode_levels(static_cast<int>(mask.order.size()), dec, ctx_err);
            } catch (const stream_error& e) {
                throw stream_error(std::string(e.what()) + " (block " + std::to_string(br2) + "," +
                                   std::to_string(bc) + ")");
            }
            Mat coeffs = Mat::Zero(kN, kN);
            for (size_t p = 0; p < scan_io.size(); ++p)
                coeffs(scan_io[p].first, scan_io[p].second) =
                    seq[p] * q.step(scan_io[p].first, scan_io[p].second);
            step1_coeffs[static_cast<size_t>(bi)] = coeffs;
            error_levels[static_cast<size_t>(bi)] = Mat::Zero(kN, kN);
            for (size_t m = 0; m < mask.order.size(); ++m)
                error_levels[static_cast<size_t>(bi)](mask.order[m].first, mask.order[m].second) =
                    errs[m];
            out.stage1.samples.block(br2 * kN, bc * kN, kN, kN) = inverse_dct(coeffs);
        }

    out.stage2 = out.stage1;
    out.stage3 = out.stage1;
    Block zero_pred(Mat::Zero(kN, kN));
    if (predict) {
        bi = 0;
        for (int br2 = 0; br2 < g.bh; ++br2)
            for (int bc = 0; bc < g.bw; ++bc, ++bi) {
                int r0 = br2 * kN, c0 = bc * kN;
                PatchContext pctx = ring_from_plane(out.stage1.samples, r0, c0, kN, false);
                RestoreResult rr = restore_block(pctx, zero_pred,
                                                 CoeffBlock(step1_coeffs[static_cast<size_t>(bi)]),
                                                 mask, descent);
                Mat with_err = rr.coeffs.coeffs;
                for (const auto& [i, j] : mask.i_dct)
                    with_err(i, j) += error_levels[static_cast<size_t>(bi)](i, j) * q.step(i, j);
                out.stage2.samples.block(r0, c0, kN, kN) = inverse_dct(rr.coeffs.coeffs);
                out.stage3.samples.block(r0, c0, kN, kN) = inverse_dct(with_err);
            }
    }
    out.recon = out.stage3;
    return out;
}

CancellationResult random_cancellation_experiment(const PixelPlane& plane, double pct,
                                                  const DescentConfig& cfg, uint64_t seed) {
    if (pct <= 0.0 || pct >= 100.0)
        throw invalid_input("random_cancellation_experiment: pct must be in (0, 100)");
    BlockGrid g = grid_for(plane);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    std::vector<Mat> coeffs(static_cast<size_t>(g.count()));
    std::vector<CoeffMask> masks(static_cast<size_t>(g.count()), CoeffMask(kN, {}));
    CancellationResult res;
    PixelPlane zeroed(plane.width, plane.height);
    int bi = 0;
    for (int br = 0; br < g.bh; ++br)
        for (int bc = 0; bc < g.bw; ++bc, ++bi) {
            int r0 = br * kN, c0 = bc * kN;
            Mat c = forward_dct(plane.samples.block(r0, c0, kN, kN));
            for (int i = 0; i < kN; ++i)
                for (int j = 0; j < kN; ++j) {
                    if (i == 0 && j == 0) continue;
                    if (coin(rng) * 100.0 < pct) {
                        c(i, j) = 0.0;
                        masks[static_cast<size_t>(bi)].i_dct.emplace_back(i, j);
                        ++res.cancelled;
                    }
                }
            masks[static_cast<size_t>(bi)].order = masks[static_cast<size_t>(bi)].i_dct;
            coeffs[static_cast<size_t>(bi)] = c;
            zeroed.samples.block(r0, c0, kN, kN) = inverse_dct(c);
        }
    res.psnr_before = psnr(zeroed, plane).db;
    DescentConfig descent = cfg.resolved(1.0);  // unquantized coefficients
    PixelPlane restored = tv_restore_plane(plane.width, plane.height, kN, coeffs, masks,
                                           nullptr, nullptr, descent);
    res.psnr_after = psnr(restored, plane).db;
    return res;
}

std::vector<PositionStudyRow> position_study(const std::vector<PixelPlane>& corpus,
                                             const std::vector<int>& qualities,
                                             const DescentConfig& cfg) {
    if (corpus.empty()) throw invalid_input("position_study: empty corpus");
    if (qualities.empty()) throw invalid_input("position_study: empty quality list");
    std::vector<PositionStudyRow> rows;
    for (int qual : qualities) {
        QuantSpec q = make_jpeg_quant(qual, kN);
        DescentConfig descent = cfg.resolved(0.05 * q.mean_step());
        Mat entropy_sum = Mat::Zero(kN, kN);
        Mat drop_sum = Mat::Zero(kN, kN);
        for (const PixelPlane& img : corpus) {
            QuantizedPlane qp = quantize_plane(img, q, kN);
            PixelPlane base = dequantize_plane(qp, q);
            double psnr_base = psnr(base, img).db;
            for (int i = 0; i < kN; ++i)
                for (int j = 0; j < kN; ++j) {
                    if (i == 0 && j == 0) continue;  // DC excluded
                    std::vector<int> sym(qp.levels.size());
                    for (size_t b = 0; b < qp.levels.size(); ++b)
                        sym[b] = static_cast<int>(qp.levels[b](i, j));
                    entropy_sum(i, j) += entropy_estimate(sym);

                    std::vector<Mat> coeffs(qp.levels.size());
                    for (size_t b = 0; b < qp.levels.size(); ++b) {
                        coeffs[b] = qp.levels[b].array() * q.table.array();
                        coeffs[b](i, j) = 0.0;
                    }
                    std::vector<CoeffMask> masks(qp.levels.size(), CoeffMask(kN, {{i, j}}));
                    PixelPlane restored = tv_restore_plane(qp.width, qp.height, kN, coeffs,
                                                           masks, nullptr, nullptr, descent);
                    drop_sum(i, j) += psnr_base - psnr(restored, img).db;
                }
        }
        for (int i = 0; i < kN; ++i)
            for (int j = 0; j < kN; ++j) {
                if (i == 0 && j == 0) continue;
                PositionStudyRow row;
                row.quality = qual;
                row.i = i;
                row.j = j;
                row.entropy_bits = entropy_sum(i, j) / static_cast<double>(corpus.size());
                row.psnr_drop_db = drop_sum(i, j) / static_cast<double>(corpus.size());
                rows.push_back(row);
            }
    }
    return rows;
}

std::string position_study_csv(const std::vector<PositionStudyRow>& rows) {
    std::ostringstream os;
    os << "quality,i,j,entropy_bits,psnr_drop_db\n";
    for (const auto& r : rows)
        os << r.quality << ',' << r.i << ',' << r.j << ',' << r.entropy_bits << ','
           << r.psnr_drop_db << '\n';
    return os.str();
}

}  // namespace vcrp
