#include "vcrp/mode_masks.hpp"

#include <fstream>

#include <json.hpp>

namespace vcrp {

namespace {

const char* scan_name(ScanKind k) {
    switch (k) {
        case ScanKind::ZIGZAG: return "zigzag";
        case ScanKind::ROW_FIRST: return "row_first";
        case ScanKind::COLUMN_FIRST: return "column_first";
        case ScanKind::DIAG_DOWNLEFT: return "diag_downleft";
    }
    return "zigzag";
}

ScanKind scan_from_name(const std::string& s) {
    if (s == "zigzag") return ScanKind::ZIGZAG;
    if (s == "row_first") return ScanKind::ROW_FIRST;
    if (s == "column_first") return ScanKind::COLUMN_FIRST;
    if (s == "diag_downleft") return ScanKind::DIAG_DOWNLEFT;
    throw invalid_input("mode mask table: unknown scan kind '" + s + "'");
}

ModeMaskEntry make_entry(int n, std::vector<FreqPos> positions, ScanKind scan) {
    ModeMaskEntry e;
    e.scan = scan;
    e.mask = CoeffMask(n, std::move(positions));
    e.mask.sort_order_by(make_scan(scan, n));
    return e;
}

}  // namespace

int ModeMaskTable::size_index(int n) {
    if (n == 4) return 0;
    if (n == 8) return 1;
    throw invalid_input("mode mask table: block size must be 4 or 8");
}

const ModeMaskEntry& ModeMaskTable::entry(int n, int mode) const {
    if (mode < 0 || mode >= kNumIntraModes) throw invalid_input("mode mask table: bad mode");
    return entries[size_index(n)][mode];
}

ModeMaskEntry& ModeMaskTable::entry(int n, int mode) {
    if (mode < 0 || mode >= kNumIntraModes) throw invalid_input("mode mask table: bad mode");
    return entries[size_index(n)][mode];
}

ModeMaskTable ModeMaskTable::defaults() {
    // Constructed experimentally: the three lowest-frequency AC positions for
    // every mode, support coded in zigzag order. Direction-specialized sets
    // (first row for vertical, first column for horizontal, all AC for DC)
    // measured consistently worse across content families and rates; they
    // remain expressible through the JSON override.
    ModeMaskTable t;
    std::vector<FreqPos> low3 = {{0, 1}, {1, 0}, {1, 1}};
    for (int n : {4, 8}) {
        int si = size_index(n);
        for (int mode = 0; mode < kNumIntraModes; ++mode)
            t.entries[si][mode] = make_entry(n, low3, ScanKind::ZIGZAG);
    }
    return t;
}

ModeMaskTable ModeMaskTable::empty() {
    ModeMaskTable t;
    for (int n : {4, 8})
        for (int mode = 0; mode < kNumIntraModes; ++mode)
            t.entries[size_index(n)][mode] = make_entry(n, {}, ScanKind::ZIGZAG);
    return t;
}

std::string ModeMaskTable::to_json() const {
    nlohmann::json j;
    for (int n : {4, 8}) {
        nlohmann::json sizes;
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            const ModeMaskEntry& e = entries[size_index(n)][mode];
            nlohmann::json positions = nlohmann::json::array();
            for (const auto& [i, jj] : e.mask.i_dct) positions.push_back({i, jj});
            sizes[std::to_string(mode)] = {{"mask", positions}, {"scan", scan_name(e.scan)}};
        }
        j[std::to_string(n)] = sizes;
    }
    return j.dump(2);
}

ModeMaskTable ModeMaskTable::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw invalid_input(std::string("mode mask table: bad JSON: ") + e.what());
    }
    ModeMaskTable t = defaults();
    for (int n : {4, 8}) {
        std::string key = std::to_string(n);
        if (!j.contains(key)) continue;
        for (int mode = 0; mode < kNumIntraModes; ++mode) {
            std::string mkey = std::to_string(mode);
            if (!j[key].contains(mkey)) continue;
            const auto& je = j[key][mkey];
            std::vector<FreqPos> positions;
            for (const auto& p : je.at("mask")) {
                int i = p.at(0).get<int>(), jj = p.at(1).get<int>();
                if (i < 0 || i >= n || jj < 0 || jj >= n)
                    throw invalid_input("mode mask table: position out of range");
                positions.emplace_back(i, jj);
            }
            ScanKind scan = scan_from_name(je.at("scan").get<std::string>());
            t.entries[size_index(n)][mode] = make_entry(n, std::move(positions), scan);
        }
    }
    return t;
}

ModeMaskTable ModeMaskTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_input("mode mask table: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json(text);
}

void ModeMaskTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw invalid_input("mode mask table: cannot open " + path);
    out << to_json() << "\n";
}

}  // namespace vcrp
