#ifndef VCRP_CONTAINER_HPP
#define VCRP_CONTAINER_HPP

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "vcrp/bitstream.hpp"
#include "vcrp/quant.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

constexpr uint8_t kCodecImage = 0;
constexpr uint8_t kCodecIntraVideo = 1;

constexpr uint8_t kFlagPredictionEnabled = 0x01;  // bit0: VCResPred / restore stage on
constexpr uint8_t kFlagPerModeMasks = 0x02;       // bit1: per-mode mask table in use

// Byte-exact stream header: magic "VCRP", version, codec id, geometry,
// block size, quantizer, flags, frame count. Big-endian fields.
struct StreamHeader {
    uint8_t version = 1;
    uint8_t codec = kCodecImage;
    uint16_t width = 0;
    uint16_t height = 0;
    uint8_t block_size = 8;
    QuantKind quant_kind = QuantKind::JPEG_QUALITY;
    uint8_t quality_or_qp = 50;
    uint8_t flags = 0;
    uint16_t frame_count = 1;

    static constexpr size_t kByteSize = 16;

    void write(BitstreamWriter& bw) const {
        for (char c : {'V', 'C', 'R', 'P'}) bw.write_u8(static_cast<uint8_t>(c));
        bw.write_u8(version);
        bw.write_u8(codec);
        bw.write_u16(width);
        bw.write_u16(height);
        bw.write_u8(block_size);
        bw.write_u8(quant_kind == QuantKind::JPEG_QUALITY ? 0 : 1);
        bw.write_u8(quality_or_qp);
        bw.write_u8(flags);
        bw.write_u16(frame_count);
    }

    static StreamHeader read(BitstreamReader& br) {
        const char magic[4] = {'V', 'C', 'R', 'P'};
        for (char c : magic)
            if (br.read_u8() != static_cast<uint8_t>(c)) throw stream_error("container: bad magic");
        StreamHeader h;
        h.version = br.read_u8();
        if (h.version != 1) throw stream_error("container: unsupported version");
        h.codec = br.read_u8();
        h.width = br.read_u16();
        h.height = br.read_u16();
        h.block_size = br.read_u8();
        h.quant_kind = br.read_u8() == 0 ? QuantKind::JPEG_QUALITY : QuantKind::QP_UNIFORM;
        h.quality_or_qp = br.read_u8();
        h.flags = br.read_u8();
        h.frame_count = br.read_u16();
        return h;
    }
};

inline void write_stream_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("cannot open output stream: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

inline std::vector<uint8_t> read_stream_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("cannot open input stream: " + path);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace vcrp

#endif
