#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "synthetic.hpp"
#include "vcrp/dct.hpp"
#include "vcrp/intra.hpp"
#include "vcrp/metrics.hpp"
#include "vcrp/video_codec.hpp"
#include "vcrp/y4m.hpp"

using namespace vcrp;

namespace {

IntraNeighbors seeded_neighbors(int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    IntraNeighbors nb;
    nb.n = n;
    nb.top_avail = nb.left_avail = true;
    for (int k = 0; k < 2 * n; ++k) nb.top.push_back(static_cast<int>(rng() % 256));
    for (int k = 0; k < n; ++k) nb.left.push_back(static_cast<int>(rng() % 256));
    nb.corner = static_cast<int>(rng() % 256);
    return nb;
}

}  // namespace

TEST_CASE("dc mode with uniform neighbors predicts the same value") {
    IntraNeighbors nb;
    nb.n = 4;
    nb.top.assign(8, 128);
    nb.left.assign(4, 128);
    nb.corner = 128;
    Block p = intra_predict(kModeDC, nb, 4);
    CHECK(p.samples.minCoeff() == 128.0);
    CHECK(p.samples.maxCoeff() == 128.0);
}

TEST_CASE("vertical mode copies the top row") {
    IntraNeighbors nb = seeded_neighbors(4, 9);
    Block p = intra_predict(kModeVertical, nb, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(p.samples(r, c) == nb.top[static_cast<size_t>(c)]);
    Block ph = intra_predict(kModeHorizontal, nb, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(ph.samples(r, c) == nb.left[static_cast<size_t>(r)]);
}

TEST_CASE("diag-down-left 4x4 matches the hand tap-table oracle") {
    IntraNeighbors nb = seeded_neighbors(4, 77);
    Block p = intra_predict(kModeDiagDownLeft, nb, 4);
    const auto& t = nb.top;
    // taps written out per pixel from the standard's equations
    auto f = [&](int a, int b, int c) { return (t[a] + 2 * t[b] + t[c] + 2) >> 2; };
    int want[4][4] = {
        {f(0, 1, 2), f(1, 2, 3), f(2, 3, 4), f(3, 4, 5)},
        {f(1, 2, 3), f(2, 3, 4), f(3, 4, 5), f(4, 5, 6)},
        {f(2, 3, 4), f(3, 4, 5), f(4, 5, 6), f(5, 6, 7)},
        {f(3, 4, 5), f(4, 5, 6), f(5, 6, 7), (t[6] + 3 * t[7] + 2) >> 2},
    };
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(p.samples(r, c) == want[r][c]);
}

TEST_CASE("all predictions stay within the neighbor sample range") {
    for (int n : {4, 8})
        for (uint64_t seed : {1ull, 2ull, 3ull}) {
            IntraNeighbors nb = seeded_neighbors(n, seed);
            int lo = 255, hi = 0;
            for (int v : nb.top) lo = std::min(lo, v), hi = std::max(hi, v);
            for (int v : nb.left) lo = std::min(lo, v), hi = std::max(hi, v);
            lo = std::min(lo, nb.corner);
            hi = std::max(hi, nb.corner);
            for (int mode = 0; mode < kNumIntraModes; ++mode) {
                Block p = intra_predict(mode, nb, n);
                CHECK(p.samples.minCoeff() >= lo);
                CHECK(p.samples.maxCoeff() <= hi);
            }
        }
    CHECK_THROWS_AS(intra_predict(9, seeded_neighbors(4, 5), 4), invalid_input);
}

TEST_CASE("neighbor substitution rules") {
    Mat plane = Mat::Constant(16, 16, 200.0);
    IntraNeighbors nb = gather_neighbors(plane, 0, 0, 4);  // nothing decoded above/left
    CHECK(!nb.top_avail);
    CHECK(!nb.left_avail);
    for (int v : nb.top) CHECK(v == 128);
    for (int v : nb.left) CHECK(v == 128);
    CHECK(nb.corner == 128);
    // top-right beyond the frame edge replicates the last top sample
    IntraNeighbors edge = gather_neighbors(plane, 4, 12, 4);
    CHECK(edge.top_avail);
    for (size_t k = 4; k < 8; ++k) CHECK(edge.top[k] == 200);
}

TEST_CASE("choose_mode matches an exhaustive argmin oracle") {
    std::mt19937_64 rng(2222);
    for (int trial = 0; trial < 200; ++trial) {
        int n = (trial % 2) ? 4 : 8;
        IntraNeighbors nb = seeded_neighbors(n, rng());
        Mat orig(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) orig(r, c) = static_cast<double>(rng() % 256);
        int got = choose_mode(orig, nb);
        int want = -1;
        double best = 1e300;
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            double sad = (orig - intra_predict(mode, nb, n).samples).cwiseAbs().sum();
            if (sad < best) {
                best = sad;
                want = mode;
            }
        }
        REQUIRE(got == want);
    }
}

TEST_CASE("vertical content picks the vertical mode") {
    IntraNeighbors nb = seeded_neighbors(4, 321);
    Mat orig(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) orig(r, c) = nb.top[static_cast<size_t>(c)];
    CHECK(choose_mode(orig, nb) == kModeVertical);
}

TEST_CASE("default mode mask table shape") {
    ModeMaskTable t = ModeMaskTable::defaults();
    for (int n : {4, 8}) {
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            const CoeffMask& m = t.entry(n, mode).mask;
            CHECK(m.i_dct.size() == 3);
            CHECK(m.contains(0, 1));
            CHECK(m.contains(1, 0));
            CHECK(m.contains(1, 1));
            CHECK(!m.contains(0, 0));
        }
    }
    // prediction order is low-to-high along the entry's scan
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            const ModeMaskEntry& e = t.entry(n, mode);
            ScanOrder s = make_scan(e.scan, n);
            for (size_t k = 1; k < e.mask.order.size(); ++k)
                CHECK(s.index_of(e.mask.order[k - 1].first, e.mask.order[k - 1].second) <
                      s.index_of(e.mask.order[k].first, e.mask.order[k].second));
        }
}

TEST_CASE("mode mask table json round-trip") {
    ModeMaskTable t = ModeMaskTable::defaults();
    ModeMaskTable back = ModeMaskTable::from_json(t.to_json());
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            CHECK(back.entry(n, mode).scan == t.entry(n, mode).scan);
            CHECK(back.entry(n, mode).mask.i_dct == t.entry(n, mode).mask.i_dct);
            CHECK(back.entry(n, mode).mask.order == t.entry(n, mode).mask.order);
        }
    CHECK_THROWS_AS(ModeMaskTable::from_json("{bad"), invalid_input);
}

TEST_CASE("encoder and decoder reconstructions are byte-identical") {
    std::vector<PixelPlane> frames = synth::sequence(64, 48, 3, 5001);
    for (bool vcres : {false, true})
        for (int qp : {22, 32}) {
            VideoCodecConfig cfg;
            cfg.qp = qp;
            cfg.vcrespred = vcres;
            EncodedVideo enc = encode_video(frames, cfg);
            DecodedVideo dec = decode_video(enc.stream, cfg.table, cfg.descent);
            REQUIRE(dec.frames.size() == frames.size());
            for (size_t f = 0; f < frames.size(); ++f) {
                REQUIRE(dec.sync_proof[f] == enc.sync_proof[f]);
                CHECK(std::memcmp(dec.frames[f].samples.data(), enc.recon[f].samples.data(),
                                  sizeof(double) * static_cast<size_t>(64 * 48)) == 0);
            }
        }
}

TEST_CASE("an empty mask table degenerates to the baseline stream") {
    std::vector<PixelPlane> frames = synth::sequence(48, 48, 2, 88);
    VideoCodecConfig off;
    off.qp = 27;
    off.vcrespred = false;
    VideoCodecConfig on_empty;
    on_empty.qp = 27;
    on_empty.vcrespred = true;
    on_empty.table = ModeMaskTable::empty();
    EncodedVideo a = encode_video(frames, off);
    EncodedVideo b = encode_video(frames, on_empty);
    // payloads identical; only the header flag byte differs
    CHECK(a.stream.size() == b.stream.size());
    CHECK(std::equal(a.stream.begin() + StreamHeader::kByteSize, a.stream.end(),
                     b.stream.begin() + StreamHeader::kByteSize));
    CHECK((a.block_bins[0] == b.block_bins[0]).all());
}

TEST_CASE("corrupting a payload byte never silently matches") {
    std::vector<PixelPlane> frames = synth::sequence(48, 32, 2, 99);
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = true;
    EncodedVideo enc = encode_video(frames, cfg);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> bad = enc.stream;
        size_t pos = StreamHeader::kByteSize +
                     rng() % (bad.size() - StreamHeader::kByteSize);
        bad[pos] ^= static_cast<uint8_t>(1 + rng() % 255);
        bool detected = false;
        try {
            DecodedVideo dec = decode_video(bad, cfg.table, cfg.descent);
            detected = dec.sync_proof != enc.sync_proof;
        } catch (const stream_error&) {
            detected = true;
        }
        CHECK(detected);
    }
}

TEST_CASE("decoding with a mismatched mask table is detected by the sync proof") {
    std::vector<PixelPlane> frames = synth::sequence(48, 32, 1, 100);
    VideoCodecConfig cfg;
    cfg.qp = 22;
    cfg.vcrespred = true;
    EncodedVideo enc = encode_video(frames, cfg);
    // a smaller mask changes every sequence length
    ModeMaskTable other = ModeMaskTable::defaults();
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            ModeMaskEntry& e = other.entry(n, mode);
            e.mask = CoeffMask(n, {{0, 1}});
            e.mask.sort_order_by(make_scan(e.scan, n));
        }
    bool detected = false;
    try {
        DecodedVideo dec = decode_video(enc.stream, other, cfg.descent);
        detected = dec.sync_proof != enc.sync_proof;
    } catch (const stream_error&) {
        detected = true;
    }
    CHECK(detected);
}

TEST_CASE("truncated video streams raise a positioned error") {
    std::vector<PixelPlane> frames = synth::sequence(48, 32, 2, 101);
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = false;
    EncodedVideo enc = encode_video(frames, cfg);
    std::vector<uint8_t> cut(enc.stream.begin(),
                             enc.stream.begin() + static_cast<long>(enc.stream.size() / 3));
    try {
        decode_video(cut, cfg.table, cfg.descent);
        FAIL("expected stream_error");
    } catch (const stream_error& e) {
        CHECK(std::string(e.what()).find("block") != std::string::npos);
    }
}

TEST_CASE("enabling the prediction stage changes no header or mode bins") {
    std::vector<PixelPlane> frames = synth::sequence(64, 48, 3, 5002);
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = false;
    EncodedVideo off = encode_video(frames, cfg);
    cfg.vcrespred = true;
    EncodedVideo on = encode_video(frames, cfg);
    CHECK(off.header_bits == on.header_bits);
    CHECK(off.mode_bins == on.mode_bins);
    for (size_t f = 0; f < frames.size(); ++f) CHECK((off.modes[f] == on.modes[f]).all());
    CHECK(off.stream != on.stream);
}

TEST_CASE("a tv-predictable coefficient codes a zero error level") {
    // single-position mask for every mode so the fixture does not depend on
    // the chosen mode
    ModeMaskTable tbl = ModeMaskTable::empty();
    const FreqPos target{0, 1};
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            tbl.entry(n, mode).mask = CoeffMask(n, {target});
            tbl.entry(n, mode).scan = ScanKind::ZIGZAG;
            tbl.entry(n, mode).mask.sort_order_by(make_scan(ScanKind::ZIGZAG, n));
        }
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = true;
    cfg.table = tbl;

    std::vector<PixelPlane> frames = {synth::image(32, 32, 4242)};
    EncodedVideo first = encode_video(frames, cfg);

    // Replicate the encoder's processing of the last block (3,3) to find the
    // predicted value, then rebuild that block so its residual hits it. Mode
    // choice depends on the block content, so iterate to a fixed point.
    const int n = 8, r0 = 24, c0 = 24;
    const QuantSpec q = make_qp_quant(cfg.qp, n);
    const double step = q.table(0, 0);
    DescentConfig descent = cfg.descent.resolved(0.01 * step);
    descent.couple_ring = true;  // mirror the codec's descent

    IntraNeighbors nb_orig = gather_neighbors(frames[0].samples, r0, c0, n);
    IntraNeighbors nb_rec = gather_neighbors(first.recon[0].samples, r0, c0, n);
    PatchContext ring = ring_from_plane(first.recon[0].samples, r0, c0, n, true);

    Mat block = frames[0].samples.block(r0, c0, n, n);
    int mode = choose_mode(block, nb_orig);
    bool settled = false;
    for (int round = 0; round < 8 && !settled; ++round) {
        Block pred = intra_predict(mode, nb_rec, n);
        Mat resid = forward_dct(block - pred.samples);
        Mat beta = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == target.first && j == target.second) continue;
                beta(i, j) = quantize_scalar(resid(i, j), step) * step;
            }
        RestoreResult rr = restore_block(ring, pred, CoeffBlock(beta),
                                         CoeffMask(n, {target}), descent);
        Mat resid2 = resid;
        resid2(target.first, target.second) = rr.coeffs.coeffs(target.first, target.second);
        block = pred.samples + inverse_dct(resid2);
        int next_mode = choose_mode(block, nb_orig);
        settled = next_mode == mode;
        mode = next_mode;
    }
    REQUIRE(settled);

    std::vector<PixelPlane> crafted = frames;
    crafted[0].samples.block(r0, c0, n, n) = block;
    EncodedVideo second = encode_video(crafted, cfg);
    REQUIRE(second.modes[0](3, 3) == mode);
    // a zero error level reproduces the crafted coefficient up to transform
    // round-trip noise (a nonzero level would be off by a full step)
    Mat diff = forward_dct(second.recon[0].samples.block(r0, c0, n, n) -
                           crafted[0].samples.block(r0, c0, n, n));
    CHECK(std::abs(diff(target.first, target.second)) < 1e-9);
    DecodedVideo dec = decode_video(second.stream, cfg.table, cfg.descent);
    CHECK(dec.sync_proof == second.sync_proof);
}

TEST_CASE("hierarchical prediction folds coded coefficients into the support") {
    // two-position mask; the test reproduces Algorithm-1 bookkeeping and the
    // encoder's reconstruction must match it exactly
    ModeMaskTable tbl = ModeMaskTable::empty();
    std::vector<FreqPos> mask_pos = {{0, 1}, {1, 0}};
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            tbl.entry(n, mode).mask = CoeffMask(n, mask_pos);
            tbl.entry(n, mode).scan = ScanKind::ZIGZAG;
            tbl.entry(n, mode).mask.sort_order_by(make_scan(ScanKind::ZIGZAG, n));
        }
    VideoCodecConfig cfg;
    cfg.qp = 22;
    cfg.vcrespred = true;
    cfg.table = tbl;
    std::vector<PixelPlane> frames = {synth::image(32, 32, 777)};
    EncodedVideo enc = encode_video(frames, cfg);

    const int n = 8, r0 = 24, c0 = 24;
    const QuantSpec q = make_qp_quant(cfg.qp, n);
    const double step = q.table(0, 0);
    DescentConfig descent = cfg.descent.resolved(0.01 * step);
    descent.couple_ring = true;
    Mat orig_block = frames[0].samples.block(r0, c0, n, n);
    int mode = enc.modes[0](3, 3);
    Block pred = intra_predict(mode, gather_neighbors(enc.recon[0].samples, r0, c0, n), n);
    Mat resid = forward_dct(orig_block - pred.samples);
    Mat beta = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!((i == 0 && j == 1) || (i == 1 && j == 0)))
                beta(i, j) = quantize_scalar(resid(i, j), step) * step;
    PatchContext ring = ring_from_plane(enc.recon[0].samples, r0, c0, n, true);
    bool have_support = false;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) have_support = have_support || beta(i, j) != 0.0;
    REQUIRE(have_support);  // fixture needs a live block
    for (const FreqPos& pos : tbl.entry(n, mode).mask.order) {
        RestoreResult rr = restore_block(ring, pred, CoeffBlock(beta), CoeffMask(n, {pos}), descent);
        beta = rr.coeffs.coeffs;
        double err = resid(pos.first, pos.second) - beta(pos.first, pos.second);
        beta(pos.first, pos.second) += quantize_scalar(err, step) * step;  // fold r_hat
    }
    Mat want = pred.samples + inverse_dct(beta);
    CHECK((enc.recon[0].samples.block(r0, c0, n, n) - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flat frames cost the same with and without prediction") {
    // 128 = the substituted neighbor value, so border blocks are flat too
    std::vector<PixelPlane> frames(2, PixelPlane(48, 48));
    for (auto& f : frames) f.samples.setConstant(128.0);
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = false;
    EncodedVideo off = encode_video(frames, cfg);
    cfg.vcrespred = true;
    EncodedVideo on = encode_video(frames, cfg);
    CHECK(off.residual_bins == on.residual_bins);
    for (size_t f = 0; f < frames.size(); ++f) CHECK((off.block_bins[f] == on.block_bins[f]).all());
}

TEST_CASE("prediction reduces bins on most nonflat blocks at qp 27") {
    std::vector<PixelPlane> frames = {synth::video_frame(176, 144, 0, 31415)};
    VideoCodecConfig cfg;
    cfg.qp = 27;
    cfg.vcrespred = false;
    EncodedVideo off = encode_video(frames, cfg);
    cfg.vcrespred = true;
    EncodedVideo on = encode_video(frames, cfg);
    const int n = block_size_for_width(176);
    int nonflat = 0, improved = 0;
    for (int br = 0; br < 144 / n; ++br)
        for (int bc = 0; bc < 176 / n; ++bc) {
            Mat b = frames[0].samples.block(br * n, bc * n, n, n);
            double var = (b.array() - b.mean()).matrix().squaredNorm() / (n * n);
            if (var < 4.0) continue;
            ++nonflat;
            if (on.block_bins[0](br, bc) <= off.block_bins[0](br, bc)) ++improved;
        }
    REQUIRE(nonflat > 20);
    INFO("improved ", improved, " of ", nonflat);
    CHECK(improved >= (6 * nonflat) / 10);
}

TEST_CASE("y4m io round-trips frames and rate") {
    std::vector<PixelPlane> frames = synth::sequence(32, 16, 3, 55);
    Y4mVideo v;
    v.width = 32;
    v.height = 16;
    v.fps_num = 30;
    v.fps_den = 1;
    v.frames = frames;
    auto path = std::filesystem::temp_directory_path() / "vcrp_test.y4m";
    write_y4m(v, path.string());
    Y4mVideo back = read_y4m(path.string());
    REQUIRE(back.frames.size() == 3);
    CHECK(back.fps_num == 30);
    for (size_t f = 0; f < 3; ++f)
        CHECK((back.frames[f].samples - frames[f].samples).cwiseAbs().maxCoeff() == 0.0);
    Y4mVideo two = read_y4m(path.string(), 2);
    CHECK(two.frames.size() == 2);
    std::filesystem::remove(path);
}

TEST_CASE("flat content ties break to the smallest mode id") {
    IntraNeighbors nb;
    nb.n = 4;
    nb.top.assign(8, 140);
    nb.left.assign(4, 140);
    nb.corner = 140;
    nb.top_avail = nb.left_avail = true;
    Mat flat = Mat::Constant(4, 4, 140.0);
    // vertical, horizontal and DC all predict the block exactly; id 0 wins
    CHECK(choose_mode(flat, nb) == kModeVertical);
}
