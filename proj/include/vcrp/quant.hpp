#ifndef VCRP_QUANT_HPP
#define VCRP_QUANT_HPP

#include <cmath>

#include "vcrp/types.hpp"

namespace vcrp {

enum class QuantKind { JPEG_QUALITY, QP_UNIFORM };

// Annex-K luminance base table.
inline const Mat& jpeg_base_table() {
    static const Mat base = [] {
        Mat b(8, 8);
        b << 16, 11, 10, 16, 24, 40, 51, 61,
             12, 12, 14, 19, 26, 58, 60, 55,
             14, 13, 16, 24, 40, 57, 69, 56,
             14, 17, 22, 29, 51, 87, 80, 62,
             18, 22, 37, 56, 68, 109, 103, 77,
             24, 35, 55, 64, 81, 104, 113, 92,
             49, 64, 78, 87, 103, 121, 120, 101,
             72, 92, 95, 98, 112, 100, 103, 99;
        return b;
    }();
    return base;
}

inline double round_half_away(double v) {
    return std::round(v);  // std::round is half-away-from-zero
}

// Quantization step table. JPEG kind follows the IJG quality scaling; the
// QP kind is a uniform step doubling every 6 QP.
struct QuantSpec {
    QuantKind kind = QuantKind::JPEG_QUALITY;
    int quality = 50;  // 1..100, JPEG kind
    int qp = 27;       // 0..51, QP kind
    Mat table;         // N x N steps, every entry >= 1 for JPEG kind

    int size() const { return static_cast<int>(table.rows()); }
    double step(int i, int j) const { return table(i, j); }
    double mean_step() const { return table.mean(); }
};

inline QuantSpec make_jpeg_quant(int quality, int n = 8) {
    if (quality < 1 || quality > 100) throw invalid_input("make_jpeg_quant: quality must be 1..100");
    if (n != 4 && n != 8) throw invalid_input("make_jpeg_quant: block size must be 4 or 8");
    double scale = quality < 50 ? 5000.0 / quality : 200.0 - 2.0 * quality;
    QuantSpec q;
    q.kind = QuantKind::JPEG_QUALITY;
    q.quality = quality;
    q.table = Mat(n, n);
    const Mat& base = jpeg_base_table();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = round_half_away(base(i, j) * scale / 100.0);
            q.table(i, j) = std::min(255.0, std::max(1.0, v));
        }
    return q;
}

inline QuantSpec make_qp_quant(int qp, int n) {
    if (qp < 0 || qp > 51) throw invalid_input("make_qp_quant: qp must be 0..51");
    if (n != 4 && n != 8) throw invalid_input("make_qp_quant: block size must be 4 or 8");
    QuantSpec q;
    q.kind = QuantKind::QP_UNIFORM;
    q.qp = qp;
    q.table = Mat::Constant(n, n, 0.625 * std::pow(2.0, qp / 6.0));
    return q;
}

inline double quantize_scalar(double c, double step) { return round_half_away(c / step); }

inline CoeffBlock quantize(const CoeffBlock& cb, const QuantSpec& q) {
    if (cb.quantized) throw invalid_input("quantize: input already quantized");
    if (cb.size() != q.size()) throw invalid_input("quantize: size mismatch");
    CoeffBlock out;
    out.coeffs = (cb.coeffs.array() / q.table.array()).unaryExpr([](double v) { return round_half_away(v); });
    out.quantized = true;
    if (q.kind == QuantKind::QP_UNIFORM) out.qstep_used = q.table(0, 0);
    return out;
}

inline CoeffBlock dequantize(const CoeffBlock& cb, const QuantSpec& q) {
    if (!cb.quantized) throw invalid_input("dequantize: input not quantized");
    if (cb.size() != q.size()) throw invalid_input("dequantize: size mismatch");
    CoeffBlock out;
    out.coeffs = cb.coeffs.array() * q.table.array();
    out.quantized = false;
    return out;
}

}  // namespace vcrp

#endif
