#ifndef VCRP_BITSTREAM_HPP
#define VCRP_BITSTREAM_HPP

#include <cstdint>
#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

// MSB-first bit packing; multi-byte fields big-endian.
class BitstreamWriter {
 public:
    void write_bit(int bit) {
        if (bit_pos_ == 0) buf_.push_back(0);
        if (bit) buf_.back() |= static_cast<uint8_t>(1u << (7 - bit_pos_));
        bit_pos_ = (bit_pos_ + 1) & 7;
    }
    void write_bits(uint32_t v, int nbits) {
        for (int b = nbits - 1; b >= 0; --b) write_bit((v >> b) & 1u);
    }
    void write_u8(uint8_t v) { write_bits(v, 8); }
    void write_u16(uint16_t v) { write_bits(v, 16); }
    void write_byte_aligned(uint8_t v) {
        align();
        buf_.push_back(v);
    }
    void align() {
        while (bit_pos_ != 0) write_bit(0);
    }
    size_t bit_count() const { return buf_.size() * 8 - (bit_pos_ ? 8 - bit_pos_ : 0); }
    const std::vector<uint8_t>& bytes() const { return buf_; }
    std::vector<uint8_t> take() { return std::move(buf_); }

 private:
    std::vector<uint8_t> buf_;
    int bit_pos_ = 0;
};

class BitstreamReader {
 public:
    explicit BitstreamReader(const std::vector<uint8_t>& bytes) : buf_(bytes.data()), size_(bytes.size()) {}
    BitstreamReader(const uint8_t* data, size_t size) : buf_(data), size_(size) {}

    int read_bit() {
        if (byte_pos_ >= size_) throw stream_error("bitstream: read past end");
        int bit = (buf_[byte_pos_] >> (7 - bit_pos_)) & 1;
        if (++bit_pos_ == 8) {
            bit_pos_ = 0;
            ++byte_pos_;
        }
        return bit;
    }
    uint32_t read_bits(int nbits) {
        uint32_t v = 0;
        for (int b = 0; b < nbits; ++b) v = (v << 1) | static_cast<uint32_t>(read_bit());
        return v;
    }
    uint8_t read_u8() { return static_cast<uint8_t>(read_bits(8)); }
    uint16_t read_u16() { return static_cast<uint16_t>(read_bits(16)); }
    size_t byte_pos() const { return byte_pos_; }
    bool exhausted() const { return byte_pos_ >= size_; }

 private:
    const uint8_t* buf_;
    size_t size_;
    size_t byte_pos_ = 0;
    int bit_pos_ = 0;
};

}  // namespace vcrp

#endif
