#ifndef VCRP_COSTMAP_HPP
#define VCRP_COSTMAP_HPP

#include <string>

#include "vcrp/types.hpp"

namespace vcrp {

// Per-block residual bin counts of a baseline pass and a prediction pass.
struct SymbolCostMap {
    int block_size = 0;
    Eigen::ArrayXXi baseline;   // bh x bw
    Eigen::ArrayXXi predicted;  // bh x bw

    int bw() const { return static_cast<int>(baseline.cols()); }
    int bh() const { return static_cast<int>(baseline.rows()); }

    std::string to_csv() const;
    static SymbolCostMap from_csv(const std::string& text);
};

// Tri-state heatmap, one pixel per block: 128 = neutral, brighter = fewer
// bins with prediction, darker = more. Intensity scales with the difference.
PixelPlane costmap_render(const SymbolCostMap& map);

}  // namespace vcrp

#endif
