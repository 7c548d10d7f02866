#ifndef VCRP_SCAN_HPP
#define VCRP_SCAN_HPP

#include <array>
#include <utility>
#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

enum class ScanKind { ZIGZAG, ROW_FIRST, COLUMN_FIRST, DIAG_DOWNLEFT };

using FreqPos = std::pair<int, int>;  // (i, j) = (row freq, col freq)

struct ScanOrder {
    ScanKind kind = ScanKind::ZIGZAG;
    int n = 0;
    std::vector<FreqPos> positions;  // bijection on {0..N-1}^2

    int index_of(int i, int j) const {
        for (size_t p = 0; p < positions.size(); ++p)
            if (positions[p].first == i && positions[p].second == j) return static_cast<int>(p);
        return -1;
    }
};

inline ScanOrder make_scan(ScanKind kind, int n) {
    if (n != 4 && n != 8) throw invalid_input("make_scan: block size must be 4 or 8");
    ScanOrder s;
    s.kind = kind;
    s.n = n;
    s.positions.reserve(static_cast<size_t>(n) * n);
    switch (kind) {
        case ScanKind::ROW_FIRST:
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) s.positions.emplace_back(i, j);
            break;
        case ScanKind::COLUMN_FIRST:
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) s.positions.emplace_back(i, j);
            break;
        case ScanKind::DIAG_DOWNLEFT:
            // anti-diagonals, each walked top-right to bottom-left
            for (int d = 0; d <= 2 * (n - 1); ++d)
                for (int i = std::max(0, d - n + 1); i <= std::min(d, n - 1); ++i)
                    s.positions.emplace_back(i, d - i);
            break;
        case ScanKind::ZIGZAG:
            // classic JPEG order: direction alternates per anti-diagonal
            for (int d = 0; d <= 2 * (n - 1); ++d) {
                int lo = std::max(0, d - n + 1), hi = std::min(d, n - 1);
                if (d % 2) {
                    for (int i = lo; i <= hi; ++i) s.positions.emplace_back(i, d - i);
                } else {
                    for (int i = hi; i >= lo; --i) s.positions.emplace_back(i, d - i);
                }
            }
            break;
        default:
            throw invalid_input("make_scan: unknown scan kind");
    }
    return s;
}

}  // namespace vcrp

#endif
