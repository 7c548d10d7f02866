#ifndef VCRP_TYPES_HPP
#define VCRP_TYPES_HPP

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <string>

namespace vcrp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Contract violations on the caller side (bad dimensions, unknown enum, ...).
struct invalid_input : std::runtime_error {
    explicit invalid_input(const std::string& msg) : std::runtime_error(msg) {}
};

// Truncated or corrupt bitstream detected while decoding.
struct stream_error : std::runtime_error {
    explicit stream_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Luma plane. Samples are kept as reals internally; clamping to [0,255]
// happens only when a plane leaves the pipeline (PGM/Y4M export, intra
// reference fetch).
struct PixelPlane {
    int width = 0;
    int height = 0;
    static constexpr int bit_depth = 8;
    Mat samples;  // height x width, indexed (row, col)

    PixelPlane() = default;
    PixelPlane(int w, int h) : width(w), height(h), samples(Mat::Zero(h, w)) {
        if (w <= 0 || h <= 0) throw invalid_input("PixelPlane: non-positive dimensions");
    }

    double& at(int row, int col) { return samples(row, col); }
    double at(int row, int col) const { return samples(row, col); }
};

inline double clamp8(double v) {
    double r = std::round(v);
    if (r < 0.0) return 0.0;
    if (r > 255.0) return 255.0;
    return r;
}

// N x N pixel block cut out of a plane. `row0`/`col0` are the block origin,
// aligned to the block size.
struct Block {
    int row0 = 0;
    int col0 = 0;
    Mat samples;  // N x N

    Block() = default;
    Block(int r0, int c0, Mat s) : row0(r0), col0(c0), samples(std::move(s)) {}
    explicit Block(Mat s) : samples(std::move(s)) {}

    int size() const { return static_cast<int>(samples.rows()); }
};

// Transformed block. Coefficients are indexed (i, j) = (vertical frequency,
// horizontal frequency); c10 is coeffs(1, 0). When `quantized` is set the
// entries are integer levels, otherwise real coefficient values.
struct CoeffBlock {
    Mat coeffs;  // N x N
    bool quantized = false;
    std::optional<double> qstep_used;  // set for uniform-step quantizers

    CoeffBlock() = default;
    explicit CoeffBlock(Mat c) : coeffs(std::move(c)) {}

    int size() const { return static_cast<int>(coeffs.rows()); }
};

}  // namespace vcrp

#endif
