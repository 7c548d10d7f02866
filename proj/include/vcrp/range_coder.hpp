#ifndef VCRP_RANGE_CODER_HPP
#define VCRP_RANGE_CODER_HPP

#include <cstdint>
#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

// Adaptive binary probability state: 12-bit probability of a '1' bin,
// exponential update with shift 5. Stays inside (0, 4096) by construction.
struct ProbState {
    uint16_t p1 = 2048;

    void update(int bit) {
        if (bit)
            p1 = static_cast<uint16_t>(p1 + ((4096 - p1) >> 5));
        else
            p1 = static_cast<uint16_t>(p1 - (p1 >> 5));
    }
};

// Carry-propagating byte-oriented range coder (LZMA-style registers).
class RangeEncoder {
 public:
    void encode(int bit, ProbState& p) {
        uint32_t bound = (range_ >> 12) * p.p1;
        if (bit) {
            range_ = bound;
        } else {
            low_ += bound;
            range_ -= bound;
        }
        p.update(bit);
        while (range_ < (1u << 24)) {
            shift_low();
            range_ <<= 8;
        }
    }

    void encode_bypass(int bit) {
        range_ >>= 1;
        if (bit) low_ += range_;
        while (range_ < (1u << 24)) {
            shift_low();
            range_ <<= 8;
        }
    }

    std::vector<uint8_t> finish() {
        for (int i = 0; i < 5; ++i) shift_low();
        return std::move(out_);
    }

    size_t byte_count() const { return out_.size(); }

 private:
    void shift_low() {
        if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
            uint8_t carry = static_cast<uint8_t>(low_ >> 32);
            do {
                out_.push_back(static_cast<uint8_t>(cache_ + carry));
                cache_ = 0xFF;
            } while (--cache_size_ != 0);
            cache_ = static_cast<uint8_t>(low_ >> 24);
        }
        ++cache_size_;
        low_ = (low_ & 0x00FFFFFFull) << 8;
    }

    std::vector<uint8_t> out_;
    uint64_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint8_t cache_ = 0;
    uint64_t cache_size_ = 1;
};

class RangeDecoder {
 public:
    RangeDecoder(const uint8_t* data, size_t size) : data_(data), size_(size) {
        for (int i = 0; i < 5; ++i) code_ = (code_ << 8) | next_byte();
    }
    explicit RangeDecoder(const std::vector<uint8_t>& bytes)
        : RangeDecoder(bytes.data(), bytes.size()) {}

    int decode(ProbState& p) {
        uint32_t bound = (range_ >> 12) * p.p1;
        int bit;
        if (code_ < bound) {
            bit = 1;
            range_ = bound;
        } else {
            bit = 0;
            code_ -= bound;
            range_ -= bound;
        }
        p.update(bit);
        normalize();
        return bit;
    }

    int decode_bypass() {
        range_ >>= 1;
        int bit = 0;
        if (code_ >= range_) {
            code_ -= range_;
            bit = 1;
        }
        normalize();
        return bit;
    }

    size_t consumed() const { return pos_; }

 private:
    uint8_t next_byte() {
        if (pos_ >= size_) throw stream_error("range coder: payload truncated");
        return data_[pos_++];
    }
    void normalize() {
        while (range_ < (1u << 24)) {
            code_ = (code_ << 8) | next_byte();
            range_ <<= 8;
        }
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint32_t code_ = 0;
};

}  // namespace vcrp

#endif
