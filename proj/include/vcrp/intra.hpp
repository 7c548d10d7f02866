#ifndef VCRP_INTRA_HPP
#define VCRP_INTRA_HPP

#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

// The nine 4x4/8x8 intra modes. 8x8 uses the same directional equations
// without reference smoothing.
enum IntraModeId {
    kModeVertical = 0,
    kModeHorizontal = 1,
    kModeDC = 2,
    kModeDiagDownLeft = 3,
    kModeDiagDownRight = 4,
    kModeVertRight = 5,
    kModeHorizDown = 6,
    kModeVertLeft = 7,
    kModeHorizUp = 8,
};

constexpr int kNumIntraModes = 9;

// Reference samples after substitution: missing top/left rows become 128,
// missing top-right samples replicate the last available top sample.
// Values are integers in [0,255] (reconstruction is clamped at this fetch).
struct IntraNeighbors {
    int n = 0;
    std::vector<int> top;   // 2N samples left-to-right
    std::vector<int> left;  // N samples top-to-bottom
    int corner = 128;
    bool top_avail = false;
    bool left_avail = false;
};

IntraNeighbors gather_neighbors(const Mat& plane, int row0, int col0, int n);

Block intra_predict(int mode, const IntraNeighbors& nb, int n);

// SAD argmin over the nine modes, ties to the smaller mode id.
int choose_mode(const Mat& original, const IntraNeighbors& nb);

inline int most_probable_mode(int left_mode, int top_mode) {
    int l = left_mode < 0 ? kModeDC : left_mode;
    int t = top_mode < 0 ? kModeDC : top_mode;
    return std::min(l, t);
}

}  // namespace vcrp

#endif
