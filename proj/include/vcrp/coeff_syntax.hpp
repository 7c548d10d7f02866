#ifndef VCRP_COEFF_SYNTAX_HPP
#define VCRP_COEFF_SYNTAX_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "vcrp/range_coder.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

// Context set for the residual-level syntax: coded-block flag, significance
// map keyed by scan-position quartile, last-significant flag, two magnitude
// bins. Signs and Exp-Golomb suffixes go through bypass.
struct CoeffContexts {
    ProbState cbf;
    ProbState sig[4];
    ProbState last;
    ProbState gt[2];

    void reset() { *this = CoeffContexts{}; }
};

struct ModeContexts {
    ProbState mpm;

    void reset() { *this = ModeContexts{}; }
};

inline int sig_quartile(int pos, int len) { return std::min(3, 4 * pos / len); }

namespace detail {

inline void encode_eg0(RangeEncoder& enc, uint32_t v) {
    uint32_t x = v + 1;
    int nbits = 0;
    while ((x >> nbits) > 1) ++nbits;
    for (int i = 0; i < nbits; ++i) enc.encode_bypass(0);
    for (int i = nbits; i >= 0; --i) enc.encode_bypass((x >> i) & 1u);
}

inline uint32_t decode_eg0(RangeDecoder& dec) {
    int nbits = 0;
    while (dec.decode_bypass() == 0) {
        if (++nbits > 32) throw stream_error("coeff syntax: Exp-Golomb prefix overflow");
    }
    uint32_t x = 1;
    for (int i = 0; i < nbits; ++i) x = (x << 1) | static_cast<uint32_t>(dec.decode_bypass());
    return x - 1;
}

}  // namespace detail

// Level sequence in scan order, trailing zeros allowed. An all-zero block
// costs exactly one context-coded bin. Returns the number of context-coded
// bins spent (bypass bins included in the count).
inline int encode_levels(const std::vector<int>& levels, RangeEncoder& enc, CoeffContexts& ctx) {
    const int len = static_cast<int>(levels.size());
    if (len == 0) throw invalid_input("encode_levels: empty level sequence");
    int last_idx = -1;
    for (int p = 0; p < len; ++p) {
        if (std::abs(levels[p]) > (1 << 15)) throw invalid_input("encode_levels: magnitude overflow");
        if (levels[p] != 0) last_idx = p;
    }
    int bins = 0;
    if (last_idx < 0) {
        enc.encode(0, ctx.cbf);
        return 1;
    }
    enc.encode(1, ctx.cbf);
    ++bins;
    for (int p = 0; p <= last_idx; ++p) {
        int sig = levels[p] != 0;
        enc.encode(sig, ctx.sig[sig_quartile(p, len)]);
        ++bins;
        if (sig && p < len - 1) {
            enc.encode(p == last_idx, ctx.last);
            ++bins;
        }
    }
    for (int p = 0; p <= last_idx; ++p) {
        if (levels[p] == 0) continue;
        uint32_t m = static_cast<uint32_t>(std::abs(levels[p])) - 1;
        for (uint32_t t = 0; t < 4; ++t) {
            int more = m > t;
            enc.encode(more, ctx.gt[t == 0 ? 0 : 1]);
            ++bins;
            if (!more) break;
        }
        if (m >= 4) {
            detail::encode_eg0(enc, m - 4);
            uint32_t x = m - 4 + 1;
            while (x) {
                bins += 2;
                x >>= 1;
            }
            --bins;  // 2*floor(log2(x))+1 bypass bins
        }
        enc.encode_bypass(levels[p] < 0);
        ++bins;
    }
    return bins;
}

inline std::vector<int> decode_levels(int len, RangeDecoder& dec, CoeffContexts& ctx) {
    if (len <= 0) throw invalid_input("decode_levels: empty level sequence");
    std::vector<int> levels(static_cast<size_t>(len), 0);
    if (dec.decode(ctx.cbf) == 0) return levels;
    std::vector<int> sig_pos;
    for (int p = 0; p < len; ++p) {
        if (dec.decode(ctx.sig[sig_quartile(p, len)])) {
            sig_pos.push_back(p);
            if (p < len - 1 && dec.decode(ctx.last)) break;
        }
    }
    if (sig_pos.empty()) throw stream_error("coeff syntax: coded block without significant level");
    for (int p : sig_pos) {
        uint32_t m = 0;
        for (uint32_t t = 0; t < 4; ++t) {
            if (!dec.decode(ctx.gt[t == 0 ? 0 : 1])) break;
            m = t + 1;
        }
        if (m == 4) m += detail::decode_eg0(dec);
        int v = static_cast<int>(m) + 1;
        levels[static_cast<size_t>(p)] = dec.decode_bypass() ? -v : v;
    }
    return levels;
}

// Two-segment variant: one coded-block flag for the concatenation, with the
// second segment's significance/magnitude bins drawn from its own context
// set. An all-zero tail costs nothing once the last significant level has
// been passed.
inline int encode_levels2(const std::vector<int>& a, const std::vector<int>& b, RangeEncoder& enc,
                          CoeffContexts& ctx_a, CoeffContexts& ctx_b) {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    const int len = na + nb;
    if (len == 0) throw invalid_input("encode_levels2: empty level sequence");
    auto at = [&](int p) { return p < na ? a[static_cast<size_t>(p)] : b[static_cast<size_t>(p - na)]; };
    auto seg = [&](int p) -> CoeffContexts& { return p < na ? ctx_a : ctx_b; };
    auto quart = [&](int p) { return p < na ? sig_quartile(p, na) : sig_quartile(p - na, nb); };
    int last_idx = -1;
    for (int p = 0; p < len; ++p) {
        if (std::abs(at(p)) > (1 << 15)) throw invalid_input("encode_levels2: magnitude overflow");
        if (at(p) != 0) last_idx = p;
    }
    if (last_idx < 0) {
        enc.encode(0, ctx_a.cbf);
        return 1;
    }
    enc.encode(1, ctx_a.cbf);
    int bins = 1;
    for (int p = 0; p <= last_idx; ++p) {
        int sig = at(p) != 0;
        enc.encode(sig, seg(p).sig[quart(p)]);
        ++bins;
        if (sig && p < len - 1) {
            enc.encode(p == last_idx, seg(p).last);
            ++bins;
        }
    }
    for (int p = 0; p <= last_idx; ++p) {
        if (at(p) == 0) continue;
        uint32_t m = static_cast<uint32_t>(std::abs(at(p))) - 1;
        for (uint32_t t = 0; t < 4; ++t) {
            int more = m > t;
            enc.encode(more, seg(p).gt[t == 0 ? 0 : 1]);
            ++bins;
            if (!more) break;
        }
        if (m >= 4) {
            detail::encode_eg0(enc, m - 4);
            uint32_t x = m - 4 + 1;
            while (x) {
                bins += 2;
                x >>= 1;
            }
            --bins;
        }
        enc.encode_bypass(at(p) < 0);
        ++bins;
    }
    return bins;
}

inline std::pair<std::vector<int>, std::vector<int>> decode_levels2(int na, int nb,
                                                                    RangeDecoder& dec,
                                                                    CoeffContexts& ctx_a,
                                                                    CoeffContexts& ctx_b) {
    const int len = na + nb;
    if (len <= 0) throw invalid_input("decode_levels2: empty level sequence");
    std::vector<int> a(static_cast<size_t>(na), 0), b(static_cast<size_t>(nb), 0);
    auto seg = [&](int p) -> CoeffContexts& { return p < na ? ctx_a : ctx_b; };
    auto quart = [&](int p) { return p < na ? sig_quartile(p, na) : sig_quartile(p - na, nb); };
    auto set = [&](int p, int v) {
        if (p < na)
            a[static_cast<size_t>(p)] = v;
        else
            b[static_cast<size_t>(p - na)] = v;
    };
    if (dec.decode(ctx_a.cbf) == 0) return {a, b};
    std::vector<int> sig_pos;
    for (int p = 0; p < len; ++p) {
        if (dec.decode(seg(p).sig[quart(p)])) {
            sig_pos.push_back(p);
            if (p < len - 1 && dec.decode(seg(p).last)) break;
        }
    }
    if (sig_pos.empty()) throw stream_error("coeff syntax: coded block without significant level");
    for (int p : sig_pos) {
        uint32_t m = 0;
        for (uint32_t t = 0; t < 4; ++t) {
            if (!dec.decode(seg(p).gt[t == 0 ? 0 : 1])) break;
            m = t + 1;
        }
        if (m == 4) m += detail::decode_eg0(dec);
        int v = static_cast<int>(m) + 1;
        set(p, dec.decode_bypass() ? -v : v);
    }
    return {a, b};
}

// Intra mode signalling: one context bin for the most-probable-mode flag,
// three bypass bins otherwise.
inline int encode_mode(int mode, int mpm, RangeEncoder& enc, ModeContexts& ctx) {
    if (mode < 0 || mode > 8) throw invalid_input("encode_mode: mode out of range");
    if (mode == mpm) {
        enc.encode(1, ctx.mpm);
        return 1;
    }
    enc.encode(0, ctx.mpm);
    int rem = mode < mpm ? mode : mode - 1;
    for (int b = 2; b >= 0; --b) enc.encode_bypass((rem >> b) & 1);
    return 4;
}

inline int decode_mode(int mpm, RangeDecoder& dec, ModeContexts& ctx) {
    if (dec.decode(ctx.mpm)) return mpm;
    int rem = 0;
    for (int b = 0; b < 3; ++b) rem = (rem << 1) | dec.decode_bypass();
    return rem < mpm ? rem : rem + 1;
}

// Order-0 Shannon entropy of a symbol sequence, in bits per symbol.
inline double entropy_estimate(const std::vector<int>& symbols) {
    if (symbols.empty()) throw invalid_input("entropy_estimate: empty input");
    std::map<int, size_t> hist;
    for (int s : symbols) ++hist[s];
    double h = 0.0;
    const double total = static_cast<double>(symbols.size());
    for (const auto& [sym, count] : hist) {
        double p = static_cast<double>(count) / total;
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace vcrp

#endif
