#ifndef VCRP_MASK_HPP
#define VCRP_MASK_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "vcrp/scan.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

// Partition of the N x N frequency positions into the predicted set (i_dct)
// and the support set (i_o), plus the order in which i_dct is predicted.
struct CoeffMask {
    int n = 8;
    std::vector<FreqPos> i_dct;   // positions to delete/predict
    std::vector<FreqPos> order;   // prediction sequence over i_dct

    CoeffMask() = default;
    CoeffMask(int size, std::vector<FreqPos> dct_set) : n(size), i_dct(std::move(dct_set)) {
        order = i_dct;
    }

    bool contains(int i, int j) const {
        return std::find(i_dct.begin(), i_dct.end(), FreqPos{i, j}) != i_dct.end();
    }
    bool empty() const { return i_dct.empty(); }

    std::vector<FreqPos> i_o() const {
        std::vector<FreqPos> out;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (!contains(i, j)) out.emplace_back(i, j);
        return out;
    }

    // Order i_dct by position along a scan, lowest frequency first.
    void sort_order_by(const ScanOrder& scan) {
        order = i_dct;
        std::sort(order.begin(), order.end(), [&](const FreqPos& a, const FreqPos& b) {
            return scan.index_of(a.first, a.second) < scan.index_of(b.first, b.second);
        });
    }
};

// Parse "c10,c01" style coefficient lists. cIJ means position (i, j).
inline CoeffMask parse_mask(const std::string& text, int n) {
    CoeffMask m;
    m.n = n;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), ::isspace), tok.end());
        if (tok.empty()) continue;
        if (tok.size() != 3 || tok[0] != 'c' || !isdigit(tok[1]) || !isdigit(tok[2]))
            throw invalid_input("parse_mask: expected cIJ tokens, got '" + tok + "'");
        int i = tok[1] - '0', j = tok[2] - '0';
        if (i >= n || j >= n) throw invalid_input("parse_mask: position out of range: " + tok);
        if (i == 0 && j == 0) throw invalid_input("parse_mask: DC cannot be predicted in image mode");
        if (!m.contains(i, j)) m.i_dct.emplace_back(i, j);
    }
    m.order = m.i_dct;
    return m;
}

inline std::string format_mask(const CoeffMask& m) {
    std::string out;
    for (const auto& [i, j] : m.i_dct) {
        if (!out.empty()) out += ',';
        out += 'c';
        out += static_cast<char>('0' + i);
        out += static_cast<char>('0' + j);
    }
    return out;
}

}  // namespace vcrp

#endif
