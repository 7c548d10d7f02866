#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "vcrp/dct.hpp"
#include "vcrp/mask.hpp"
#include "vcrp/pgm.hpp"
#include "vcrp/quant.hpp"
#include "vcrp/scan.hpp"

using namespace vcrp;

namespace {

Mat random_block(int n, uint64_t seed, double lo = 0.0, double hi = 255.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(lo, hi);
    Mat m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = uni(rng);
    return m;
}

}  // namespace

TEST_CASE("forward dct of a constant block is DC only") {
    Mat b = Mat::Constant(4, 4, 8.0);
    CoeffBlock cb = forward_bdct(Block(b));
    CHECK(cb.coeffs(0, 0) == doctest::Approx(32.0).epsilon(1e-12));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i || j) CHECK(std::abs(cb.coeffs(i, j)) < 1e-12);
}

TEST_CASE("forward dct matches the kernel-sum oracle") {
    for (int n : {4, 8}) {
        Mat b = random_block(n, 77 + static_cast<uint64_t>(n));
        Mat got = forward_bdct(Block(b)).coeffs;
        Mat want = oracle::kernel_sum_dct(b);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("inverse dct matches the kernel-sum oracle") {
    for (int n : {4, 8}) {
        Mat coeffs = random_block(n, 123 + static_cast<uint64_t>(n), -100.0, 100.0);
        Mat got = inverse_bdct(CoeffBlock(coeffs)).samples;
        Mat want = oracle::kernel_sum_idct(coeffs);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("inverse of zero coefficients is the zero block") {
    Block b = inverse_bdct(CoeffBlock(Mat::Zero(8, 8)));
    CHECK(b.samples.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single unit coefficient yields a unit-norm basis function") {
    Mat coeffs = Mat::Zero(4, 4);
    coeffs(0, 1) = 1.0;
    Block b = inverse_bdct(CoeffBlock(coeffs));
    CHECK(b.samples.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            CHECK(b.samples(r, c) == doctest::Approx(oracle::dct_kernel(r, c, 0, 1, 4)).epsilon(1e-12));
}

TEST_CASE("round-trip and Parseval over random blocks") {
    for (int n : {4, 8}) {
        for (int k = 0; k < 200; ++k) {
            Mat b = random_block(n, 9000 + static_cast<uint64_t>(100 * n + k));
            CoeffBlock cb = forward_bdct(Block(b));
            Mat back = inverse_bdct(cb).samples;
            CHECK((back - b).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(std::abs(cb.coeffs.norm() - b.norm()) / b.norm() < 1e-9);
        }
    }
}

TEST_CASE("non-finite samples are rejected") {
    Mat b = Mat::Zero(4, 4);
    b(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(forward_bdct(Block(b)), invalid_input);
    Mat c = Mat::Zero(8, 8);
    c(0, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(inverse_bdct(CoeffBlock(c)), invalid_input);
}

TEST_CASE("unsupported block sizes are rejected") {
    CHECK_THROWS_AS(forward_bdct(Block(Mat::Zero(5, 5))), invalid_input);
    CHECK_THROWS_AS(make_scan(ScanKind::ZIGZAG, 16), invalid_input);
}

TEST_CASE("scalar quantization arithmetic") {
    QuantSpec q;
    q.kind = QuantKind::QP_UNIFORM;
    q.table = Mat::Constant(4, 4, 4.0);
    Mat coeffs = Mat::Zero(4, 4);
    coeffs(0, 0) = 10.0;
    CoeffBlock lev = quantize(CoeffBlock(coeffs), q);
    CHECK(lev.coeffs(0, 0) == 3.0);
    CHECK(dequantize(lev, q).coeffs(0, 0) == 12.0);
}

TEST_CASE("unit step quantizer rounds half away from zero") {
    QuantSpec q;
    q.kind = QuantKind::QP_UNIFORM;
    q.table = Mat::Constant(4, 4, 1.0);
    Mat coeffs(4, 4);
    coeffs << 0.5, -0.5, 1.5, -1.5, 2.4, -2.4, 2.6, -2.6, 0.0, 10.49, -10.51, 3.5, -3.5, 7.0, -0.49,
        0.49;
    Mat rec = dequantize(quantize(CoeffBlock(coeffs), q), q).coeffs;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            double v = coeffs(r, c);
            double expect = std::copysign(std::floor(std::abs(v) + 0.5), v);
            CHECK(rec(r, c) == expect);
        }
}

TEST_CASE("jpeg table at quality 50 equals the Annex-K luminance table") {
    // transcription of the published table
    const int annex_k[64] = {16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
                             14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
                             18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
                             49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};
    QuantSpec q = make_jpeg_quant(50, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(q.table(i, j) == static_cast<double>(annex_k[8 * i + j]));
}

TEST_CASE("jpeg table scaling and clamping") {
    QuantSpec q25 = make_jpeg_quant(25, 8);  // scale 200
    CHECK(q25.table(0, 0) == 32.0);
    QuantSpec q100 = make_jpeg_quant(100, 8);  // scale 0 -> clamp to 1
    CHECK(q100.table.minCoeff() == 1.0);
    CHECK(q100.table.maxCoeff() == 1.0);
    QuantSpec q1 = make_jpeg_quant(1, 8);  // scale 5000 -> clamp to 255
    CHECK(q1.table.maxCoeff() == 255.0);
    QuantSpec q4 = make_jpeg_quant(50, 4);  // top-left 4x4 of the base
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(q4.table(i, j) == make_jpeg_quant(50, 8).table(i, j));
    CHECK_THROWS_AS(make_jpeg_quant(0, 8), invalid_input);
}

TEST_CASE("qp uniform step doubles every six qp") {
    for (int qp : {0, 7, 22, 27, 37, 45}) {
        QuantSpec a = make_qp_quant(qp, 4);
        QuantSpec b = make_qp_quant(qp + 6, 4);
        CHECK(b.table(0, 0) == doctest::Approx(2.0 * a.table(0, 0)).epsilon(1e-12));
        CHECK(a.table.minCoeff() == a.table.maxCoeff());
    }
    CHECK(make_qp_quant(0, 8).table(0, 0) == doctest::Approx(0.625));
    CHECK_THROWS_AS(make_qp_quant(52, 8), invalid_input);
}

TEST_CASE("quantizer idempotence") {
    QuantSpec q = make_jpeg_quant(25, 8);
    for (int k = 0; k < 50; ++k) {
        Mat c = random_block(8, 4242 + static_cast<uint64_t>(k), -500.0, 500.0);
        CoeffBlock q1 = quantize(CoeffBlock(c), q);
        CoeffBlock q2 = quantize(dequantize(q1, q), q);
        CHECK((q1.coeffs - q2.coeffs).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("zigzag 4x4 matches the hand enumeration") {
    // enumerated by hand on paper before the implementation existed
    const std::vector<FreqPos> want = {{0, 0}, {0, 1}, {1, 0}, {2, 0}, {1, 1}, {0, 2}, {0, 3}, {1, 2},
                                       {2, 1}, {3, 0}, {3, 1}, {2, 2}, {1, 3}, {2, 3}, {3, 2}, {3, 3}};
    ScanOrder s = make_scan(ScanKind::ZIGZAG, 4);
    REQUIRE(s.positions.size() == want.size());
    for (size_t k = 0; k < want.size(); ++k) CHECK(s.positions[k] == want[k]);
}

TEST_CASE("scan starts") {
    ScanOrder row = make_scan(ScanKind::ROW_FIRST, 4);
    CHECK(row.positions[0] == FreqPos{0, 0});
    CHECK(row.positions[1] == FreqPos{0, 1});
    CHECK(row.positions[2] == FreqPos{0, 2});
    CHECK(row.positions[3] == FreqPos{0, 3});
    ScanOrder col = make_scan(ScanKind::COLUMN_FIRST, 4);
    CHECK(col.positions[1] == FreqPos{1, 0});
    ScanOrder diag = make_scan(ScanKind::DIAG_DOWNLEFT, 4);
    CHECK(diag.positions[1] == FreqPos{0, 1});
    CHECK(diag.positions[2] == FreqPos{1, 0});
    CHECK(diag.positions[3] == FreqPos{0, 2});
}

TEST_CASE("every scan kind is a bijection") {
    for (int n : {4, 8})
        for (ScanKind k : {ScanKind::ZIGZAG, ScanKind::ROW_FIRST, ScanKind::COLUMN_FIRST,
                           ScanKind::DIAG_DOWNLEFT}) {
            ScanOrder s = make_scan(k, n);
            REQUIRE(static_cast<int>(s.positions.size()) == n * n);
            std::vector<FreqPos> sorted = s.positions;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    CHECK(sorted[static_cast<size_t>(i * n + j)] == FreqPos{i, j});
        }
}

TEST_CASE("pgm round-trips integer planes") {
    PixelPlane p(12, 7);
    std::mt19937_64 rng(5);
    for (int r = 0; r < 7; ++r)
        for (int c = 0; c < 12; ++c) p.samples(r, c) = static_cast<double>(rng() % 256);
    auto path = std::filesystem::temp_directory_path() / "vcrp_test_roundtrip.pgm";
    write_pgm(p, path.string());
    PixelPlane back = read_pgm(path.string());
    REQUIRE(back.width == 12);
    REQUIRE(back.height == 7);
    CHECK((back.samples - p.samples).cwiseAbs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
}

TEST_CASE("pgm write clamps out-of-range samples") {
    PixelPlane p(4, 4);
    p.samples.setConstant(300.0);
    p.samples(0, 0) = -5.0;
    auto path = std::filesystem::temp_directory_path() / "vcrp_test_clamp.pgm";
    write_pgm(p, path.string());
    PixelPlane back = read_pgm(path.string());
    CHECK(back.samples(0, 0) == 0.0);
    CHECK(back.samples(1, 1) == 255.0);
    std::filesystem::remove(path);
}

TEST_CASE("mask parsing") {
    CoeffMask m = parse_mask("c10,c01", 8);
    REQUIRE(m.i_dct.size() == 2);
    CHECK(m.contains(1, 0));
    CHECK(m.contains(0, 1));
    CHECK(!m.contains(0, 0));
    CHECK(m.i_o().size() == 62);
    CHECK(format_mask(m) == "c10,c01");
    CHECK_THROWS_AS(parse_mask("c00", 8), invalid_input);
    CHECK_THROWS_AS(parse_mask("x10", 8), invalid_input);
    CHECK_THROWS_AS(parse_mask("c55", 4), invalid_input);
}
