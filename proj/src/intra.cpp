#include "vcrp/intra.hpp"

#include <cmath>

namespace vcrp {

IntraNeighbors gather_neighbors(const Mat& plane, int row0, int col0, int n) {
    const int w = static_cast<int>(plane.cols());
    IntraNeighbors nb;
    nb.n = n;
    nb.top.assign(static_cast<size_t>(2 * n), 128);
    nb.left.assign(static_cast<size_t>(n), 128);
    nb.top_avail = row0 > 0;
    nb.left_avail = col0 > 0;
    if (nb.top_avail) {
        int last = 128;
        for (int t = 0; t < 2 * n; ++t) {
            int pc = col0 + t;
            if (pc < w)
                last = static_cast<int>(clamp8(plane(row0 - 1, pc)));
            nb.top[static_cast<size_t>(t)] = last;  // replicate beyond the frame edge
        }
    }
    if (nb.left_avail)
        for (int l = 0; l < n; ++l)
            nb.left[static_cast<size_t>(l)] = static_cast<int>(clamp8(plane(row0 + l, col0 - 1)));
    nb.corner = (nb.top_avail && nb.left_avail)
                    ? static_cast<int>(clamp8(plane(row0 - 1, col0 - 1)))
                    : 128;
    return nb;
}

namespace {

struct Refs {
    const IntraNeighbors& nb;
    int t(int idx) const { return idx < 0 ? nb.corner : nb.top[static_cast<size_t>(idx)]; }
    int l(int idx) const { return idx < 0 ? nb.corner : nb.left[static_cast<size_t>(idx)]; }
};

}  // namespace

Block intra_predict(int mode, const IntraNeighbors& nb, int n) {
    if (mode < 0 || mode >= kNumIntraModes) throw invalid_input("intra_predict: invalid mode id");
    if (nb.n != n) throw invalid_input("intra_predict: neighbor size mismatch");
    Refs rf{nb};
    Mat out(n, n);
    const int log2n = n == 4 ? 2 : 3;
    switch (mode) {
        case kModeVertical:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) out(r, c) = rf.t(c);
            break;
        case kModeHorizontal:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) out(r, c) = rf.l(r);
            break;
        case kModeDC: {
            int sum = n;
            for (int k = 0; k < n; ++k) sum += rf.t(k) + rf.l(k);
            int dc = sum >> (log2n + 1);
            out.setConstant(dc);
            break;
        }
        case kModeDiagDownLeft:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    int d = r + c;
                    out(r, c) = (d == 2 * n - 2)
                                    ? (rf.t(2 * n - 2) + 3 * rf.t(2 * n - 1) + 2) >> 2
                                    : (rf.t(d) + 2 * rf.t(d + 1) + rf.t(d + 2) + 2) >> 2;
                }
            break;
        case kModeDiagDownRight:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    if (c > r)
                        out(r, c) = (rf.t(c - r - 2) + 2 * rf.t(c - r - 1) + rf.t(c - r) + 2) >> 2;
                    else if (c < r)
                        out(r, c) = (rf.l(r - c - 2) + 2 * rf.l(r - c - 1) + rf.l(r - c) + 2) >> 2;
                    else
                        out(r, c) = (rf.t(0) + 2 * nb.corner + rf.l(0) + 2) >> 2;
                }
            break;
        case kModeVertRight:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    int z = 2 * c - r;
                    if (z >= 0 && (z & 1) == 0)
                        out(r, c) = (rf.t(c - (r >> 1) - 1) + rf.t(c - (r >> 1)) + 1) >> 1;
                    else if (z >= 1)
                        out(r, c) = (rf.t(c - (r >> 1) - 2) + 2 * rf.t(c - (r >> 1) - 1) +
                                     rf.t(c - (r >> 1)) + 2) >> 2;
                    else if (z == -1)
                        out(r, c) = (rf.l(0) + 2 * nb.corner + rf.t(0) + 2) >> 2;
                    else
                        out(r, c) = (rf.l(r - 1) + 2 * rf.l(r - 2) + rf.l(r - 3) + 2) >> 2;
                }
            break;
        case kModeHorizDown:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    int z = 2 * r - c;
                    if (z >= 0 && (z & 1) == 0)
                        out(r, c) = (rf.l(r - (c >> 1) - 1) + rf.l(r - (c >> 1)) + 1) >> 1;
                    else if (z >= 1)
                        out(r, c) = (rf.l(r - (c >> 1) - 2) + 2 * rf.l(r - (c >> 1) - 1) +
                                     rf.l(r - (c >> 1)) + 2) >> 2;
                    else if (z == -1)
                        out(r, c) = (rf.l(0) + 2 * nb.corner + rf.t(0) + 2) >> 2;
                    else
                        out(r, c) = (rf.t(c - 1) + 2 * rf.t(c - 2) + rf.t(c - 3) + 2) >> 2;
                }
            break;
        case kModeVertLeft:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    int base = c + (r >> 1);
                    out(r, c) = (r & 1)
                                    ? (rf.t(base) + 2 * rf.t(base + 1) + rf.t(base + 2) + 2) >> 2
                                    : (rf.t(base) + rf.t(base + 1) + 1) >> 1;
                }
            break;
        case kModeHorizUp:
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    int z = c + 2 * r;
                    if (z > 2 * n - 3)
                        out(r, c) = rf.l(n - 1);
                    else if (z == 2 * n - 3)
                        out(r, c) = (rf.l(n - 2) + 3 * rf.l(n - 1) + 2) >> 2;
                    else if (z & 1)
                        out(r, c) = (rf.l(r + (c >> 1)) + 2 * rf.l(r + (c >> 1) + 1) +
                                     rf.l(r + (c >> 1) + 2) + 2) >> 2;
                    else
                        out(r, c) = (rf.l(r + (c >> 1)) + rf.l(r + (c >> 1) + 1) + 1) >> 1;
                }
            break;
        default:
            throw invalid_input("intra_predict: invalid mode id");
    }
    return Block(out);
}

int choose_mode(const Mat& original, const IntraNeighbors& nb) {
    const int n = static_cast<int>(original.rows());
    int best = 0;
    double best_sad = -1.0;
    for (int mode = 0; mode < kNumIntraModes; ++mode) {
        Block pred = intra_predict(mode, nb, n);
        double sad = (original - pred.samples).cwiseAbs().sum();
        if (best_sad < 0.0 || sad < best_sad) {
            best_sad = sad;
            best = mode;
        }
    }
    return best;
}

}  // namespace vcrp
