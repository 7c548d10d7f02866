#ifndef VCRP_DCT_HPP
#define VCRP_DCT_HPP

#include <cmath>

#include "vcrp/types.hpp"

namespace vcrp {

// Orthonormal DCT-II basis matrix: T(i, x) = C(i) cos((2x+1) i pi / 2N),
// C(0) = sqrt(1/N), C(i) = sqrt(2/N). A block transforms as T * B * T^T.
inline const Mat& dct_matrix(int n) {
    static const Mat t4 = [] {
        Mat t(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int x = 0; x < 4; ++x)
                t(i, x) = (i == 0 ? std::sqrt(1.0 / 4) : std::sqrt(2.0 / 4)) *
                          std::cos((2 * x + 1) * i * M_PI / 8.0);
        return t;
    }();
    static const Mat t8 = [] {
        Mat t(8, 8);
        for (int i = 0; i < 8; ++i)
            for (int x = 0; x < 8; ++x)
                t(i, x) = (i == 0 ? std::sqrt(1.0 / 8) : std::sqrt(2.0 / 8)) *
                          std::cos((2 * x + 1) * i * M_PI / 16.0);
        return t;
    }();
    if (n == 4) return t4;
    if (n == 8) return t8;
    throw invalid_input("dct_matrix: block size must be 4 or 8");
}

inline Mat forward_dct(const Mat& samples) {
    const Mat& t = dct_matrix(static_cast<int>(samples.rows()));
    return t * samples * t.transpose();
}

inline Mat inverse_dct(const Mat& coeffs) {
    const Mat& t = dct_matrix(static_cast<int>(coeffs.rows()));
    return t.transpose() * coeffs * t;
}

inline CoeffBlock forward_bdct(const Block& block) {
    if (block.size() != 4 && block.size() != 8)
        throw invalid_input("forward_bdct: block size must be 4 or 8");
    if (!block.samples.allFinite())
        throw invalid_input("forward_bdct: non-finite input sample");
    return CoeffBlock(forward_dct(block.samples));
}

inline Block inverse_bdct(const CoeffBlock& cb) {
    if (cb.size() != 4 && cb.size() != 8)
        throw invalid_input("inverse_bdct: block size must be 4 or 8");
    if (cb.coeffs.rows() != cb.coeffs.cols())
        throw invalid_input("inverse_bdct: coefficient block not square");
    if (!cb.coeffs.allFinite())
        throw invalid_input("inverse_bdct: non-finite coefficient");
    return Block(inverse_dct(cb.coeffs));
}

}  // namespace vcrp

#endif
