#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "vcrp/bitstream.hpp"
#include "vcrp/coeff_syntax.hpp"
#include "vcrp/container.hpp"
#include "vcrp/range_coder.hpp"

using namespace vcrp;

TEST_CASE("bitstream writes round-trip exactly") {
    BitstreamWriter bw;
    bw.write_bit(1);
    bw.write_bits(0x2A, 6);
    bw.write_u8(0xF0);
    bw.write_u16(0xBEEF);
    bw.write_bit(0);
    bw.align();
    std::vector<uint8_t> bytes = bw.take();
    BitstreamReader br(bytes);
    CHECK(br.read_bit() == 1);
    CHECK(br.read_bits(6) == 0x2A);
    CHECK(br.read_u8() == 0xF0);
    CHECK(br.read_u16() == 0xBEEF);
    CHECK(br.read_bit() == 0);
}

TEST_CASE("bitstream reader raises on truncation") {
    std::vector<uint8_t> one = {0xAB};
    BitstreamReader br(one);
    br.read_u8();
    CHECK_THROWS_AS(br.read_bit(), stream_error);
}

TEST_CASE("range coder identity over randomized context schedules") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 5; ++round) {
        const int nbins = 40000;
        const int nctx = 1 + static_cast<int>(rng() % 16);
        std::vector<int> bits(nbins), ctx_ids(nbins), bypass(nbins);
        std::vector<double> bias(static_cast<size_t>(nctx));
        for (auto& b : bias) b = 0.05 + 0.9 * (static_cast<double>(rng() % 1000) / 1000.0);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int k = 0; k < nbins; ++k) {
            ctx_ids[k] = static_cast<int>(rng() % static_cast<uint64_t>(nctx));
            bypass[k] = rng() % 5 == 0;
            bits[k] = uni(rng) < bias[static_cast<size_t>(ctx_ids[k])];
        }
        RangeEncoder enc;
        std::vector<ProbState> states(static_cast<size_t>(nctx));
        for (int k = 0; k < nbins; ++k) {
            if (bypass[k])
                enc.encode_bypass(bits[k]);
            else
                enc.encode(bits[k], states[static_cast<size_t>(ctx_ids[k])]);
        }
        std::vector<uint8_t> payload = enc.finish();
        RangeDecoder dec(payload);
        std::vector<ProbState> dstates(static_cast<size_t>(nctx));
        for (int k = 0; k < nbins; ++k) {
            int got = bypass[k] ? dec.decode_bypass() : dec.decode(dstates[static_cast<size_t>(ctx_ids[k])]);
            REQUIRE(got == bits[k]);
        }
    }
}

TEST_CASE("adaptive coder approaches the binary entropy bound") {
    // i.i.d. p(1) = 0.1; H = 0.469 bits/bin. Must land within 5%.
    const int nbins = 1000000;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    RangeEncoder enc;
    ProbState state;
    for (int k = 0; k < nbins; ++k) enc.encode(uni(rng) < 0.1 ? 1 : 0, state);
    double bits_per_bin = static_cast<double>(enc.finish().size()) * 8.0 / nbins;
    CHECK(bits_per_bin < 0.469 * 1.05);
    CHECK(bits_per_bin > 0.469 * 0.95);  // sanity: no fake compression
}

TEST_CASE("all-zero level block costs exactly one bin") {
    RangeEncoder enc;
    CoeffContexts ctx;
    CHECK(encode_levels(std::vector<int>(16, 0), enc, ctx) == 1);
}

TEST_CASE("front-loaded level costs fewer bits than rear-loaded under fresh contexts") {
    auto measure = [](const std::vector<int>& levels) {
        RangeEncoder enc;
        CoeffContexts ctx;
        encode_levels(levels, enc, ctx);
        return enc.finish().size();
    };
    std::vector<int> front(16, 0), rear(16, 0);
    front[0] = 5;
    rear[15] = 5;
    CHECK(measure(front) < measure(rear));
}

TEST_CASE("level coding round-trips random sparse blocks") {
    std::mt19937_64 rng(4242);
    RangeEncoder enc;
    CoeffContexts ectx;
    std::vector<std::vector<int>> blocks;
    for (int k = 0; k < 20000; ++k) {
        int len = (k % 2) ? 16 : 64;
        std::vector<int> lv(static_cast<size_t>(len), 0);
        int nsig = static_cast<int>(rng() % 6);
        for (int s = 0; s < nsig; ++s) {
            int pos = static_cast<int>(rng() % static_cast<uint64_t>(len));
            int mag = 1 + static_cast<int>(rng() % 40);
            if (rng() % 8 == 0) mag += 1 << (rng() % 12);  // exercise the EG0 tail
            lv[static_cast<size_t>(pos)] = (rng() % 2) ? mag : -mag;
        }
        encode_levels(lv, enc, ectx);
        blocks.push_back(std::move(lv));
    }
    std::vector<uint8_t> payload = enc.finish();
    RangeDecoder dec(payload);
    CoeffContexts dctx;
    for (const auto& want : blocks) {
        std::vector<int> got = decode_levels(static_cast<int>(want.size()), dec, dctx);
        REQUIRE(got == want);
    }
}

TEST_CASE("oversized magnitudes are rejected") {
    RangeEncoder enc;
    CoeffContexts ctx;
    std::vector<int> lv(16, 0);
    lv[3] = (1 << 15) + 1;
    CHECK_THROWS_AS(encode_levels(lv, enc, ctx), invalid_input);
    CHECK_THROWS_AS(encode_levels({}, enc, ctx), invalid_input);
}

TEST_CASE("decoding a truncated payload raises a stream error") {
    RangeEncoder enc;
    CoeffContexts ctx;
    std::vector<int> lv(64, 0);
    for (int k = 0; k < 64; k += 3) lv[static_cast<size_t>(k)] = 1000 + 37 * k;
    for (int r = 0; r < 50; ++r) encode_levels(lv, enc, ctx);
    std::vector<uint8_t> payload = enc.finish();
    payload.resize(payload.size() / 4);
    RangeDecoder dec(payload);
    CoeffContexts dctx;
    CHECK_THROWS_AS(
        [&] {
            for (int r = 0; r < 50; ++r) decode_levels(64, dec, dctx);
        }(),
        stream_error);
}

TEST_CASE("mode signalling bin counts") {
    RangeEncoder enc;
    ModeContexts ctx;
    CHECK(encode_mode(4, 4, enc, ctx) == 1);
    CHECK(encode_mode(7, 2, enc, ctx) == 4);
    CHECK_THROWS_AS(encode_mode(9, 0, enc, ctx), invalid_input);
}

TEST_CASE("mode field round-trips over a frame") {
    std::mt19937_64 rng(31);
    std::vector<int> modes(500), mpms(500);
    for (size_t k = 0; k < modes.size(); ++k) {
        modes[k] = static_cast<int>(rng() % 9);
        mpms[k] = static_cast<int>(rng() % 9);
    }
    RangeEncoder enc;
    ModeContexts ectx;
    for (size_t k = 0; k < modes.size(); ++k) encode_mode(modes[k], mpms[k], enc, ectx);
    std::vector<uint8_t> payload = enc.finish();
    RangeDecoder dec(payload);
    ModeContexts dctx;
    for (size_t k = 0; k < modes.size(); ++k) REQUIRE(decode_mode(mpms[k], dec, dctx) == modes[k]);
}

TEST_CASE("order-0 entropy closed forms") {
    CHECK(entropy_estimate(std::vector<int>(100, 7)) == 0.0);
    std::vector<int> uniform4;
    for (int k = 0; k < 400; ++k) uniform4.push_back(k % 4);
    CHECK(entropy_estimate(uniform4) == doctest::Approx(2.0).epsilon(1e-12));
    std::vector<int> mix;
    for (int k = 0; k < 2; ++k) mix.push_back(0);
    mix.push_back(1);
    mix.push_back(2);
    CHECK(entropy_estimate(mix) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(entropy_estimate({}), invalid_input);
}

TEST_CASE("stream header round-trips byte-exactly") {
    StreamHeader h;
    h.codec = kCodecIntraVideo;
    h.width = 352;
    h.height = 288;
    h.block_size = 4;
    h.quant_kind = QuantKind::QP_UNIFORM;
    h.quality_or_qp = 27;
    h.flags = kFlagPredictionEnabled | kFlagPerModeMasks;
    h.frame_count = 49;
    BitstreamWriter bw;
    h.write(bw);
    std::vector<uint8_t> bytes = bw.take();
    CHECK(bytes.size() == StreamHeader::kByteSize);
    BitstreamReader br(bytes);
    StreamHeader back = StreamHeader::read(br);
    CHECK(back.codec == h.codec);
    CHECK(back.width == h.width);
    CHECK(back.height == h.height);
    CHECK(back.block_size == h.block_size);
    CHECK(back.quant_kind == h.quant_kind);
    CHECK(back.quality_or_qp == h.quality_or_qp);
    CHECK(back.flags == h.flags);
    CHECK(back.frame_count == h.frame_count);

    bytes[0] = 'X';
    BitstreamReader bad(bytes);
    CHECK_THROWS_AS(StreamHeader::read(bad), stream_error);
}
