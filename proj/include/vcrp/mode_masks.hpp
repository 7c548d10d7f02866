#ifndef VCRP_MODE_MASKS_HPP
#define VCRP_MODE_MASKS_HPP

#include <string>

#include "vcrp/intra.hpp"
#include "vcrp/mask.hpp"
#include "vcrp/scan.hpp"

namespace vcrp {

struct ModeMaskEntry {
    CoeffMask mask;
    ScanKind scan = ScanKind::ZIGZAG;
};

// Predicted-coefficient sets and scan per (block size, intra mode). Shared
// static configuration: identical at encoder and decoder, never signalled.
struct ModeMaskTable {
    ModeMaskEntry entries[2][kNumIntraModes];  // [0] = 4x4, [1] = 8x8

    static int size_index(int n);
    const ModeMaskEntry& entry(int n, int mode) const;
    ModeMaskEntry& entry(int n, int mode);

    static ModeMaskTable defaults();
    static ModeMaskTable empty();  // all masks empty: degenerates to baseline

    std::string to_json() const;
    static ModeMaskTable from_json(const std::string& text);
    static ModeMaskTable load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace vcrp

#endif
