#include "vcrp/costmap.hpp"

#include <sstream>

namespace vcrp {

std::string SymbolCostMap::to_csv() const {
    std::ostringstream os;
    os << "block_size," << block_size << "\n";
    os << "block_row,block_col,baseline_bins,predicted_bins\n";
    for (int r = 0; r < bh(); ++r)
        for (int c = 0; c < bw(); ++c)
            os << r << ',' << c << ',' << baseline(r, c) << ',' << predicted(r, c) << '\n';
    return os.str();
}

SymbolCostMap SymbolCostMap::from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line.rfind("block_size,", 0) != 0)
        throw invalid_input("costmap csv: missing block_size line");
    SymbolCostMap m;
    m.block_size = std::stoi(line.substr(11));
    if (!std::getline(is, line)) throw invalid_input("costmap csv: missing header");
    struct Row {
        int r, c, base, pred;
    };
    std::vector<Row> rows;
    int max_r = -1, max_c = -1;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        Row row{};
        char comma;
        std::istringstream ls(line);
        if (!(ls >> row.r >> comma >> row.c >> comma >> row.base >> comma >> row.pred))
            throw invalid_input("costmap csv: bad row: " + line);
        max_r = std::max(max_r, row.r);
        max_c = std::max(max_c, row.c);
        rows.push_back(row);
    }
    if (rows.empty()) throw invalid_input("costmap csv: no rows");
    m.baseline = Eigen::ArrayXXi::Zero(max_r + 1, max_c + 1);
    m.predicted = Eigen::ArrayXXi::Zero(max_r + 1, max_c + 1);
    for (const Row& row : rows) {
        m.baseline(row.r, row.c) = row.base;
        m.predicted(row.r, row.c) = row.pred;
    }
    return m;
}

PixelPlane costmap_render(const SymbolCostMap& map) {
    PixelPlane img(map.bw(), map.bh());
    for (int r = 0; r < map.bh(); ++r)
        for (int c = 0; c < map.bw(); ++c) {
            int diff = map.baseline(r, c) - map.predicted(r, c);  // >0 = gain
            double v = 128.0 + 8.0 * diff;
            img.samples(r, c) = std::min(255.0, std::max(0.0, v));
        }
    return img;
}

}  // namespace vcrp
