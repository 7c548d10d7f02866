#include "vcrp/y4m.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace vcrp {

namespace {

size_t chroma_bytes(const std::string& cs, int w, int h) {
    if (cs == "420" || cs == "420jpeg" || cs == "420mpeg2" || cs == "420paldv")
        return 2 * (static_cast<size_t>(w / 2) * (h / 2));
    if (cs == "422") return 2 * (static_cast<size_t>(w / 2) * h);
    if (cs == "444") return 2 * (static_cast<size_t>(w) * h);
    if (cs == "mono") return 0;
    throw invalid_input("read_y4m: unsupported colorspace C" + cs);  // 10-bit etc.
}

}  // namespace

Y4mVideo read_y4m(const std::string& path, int max_frames) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("read_y4m: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("YUV4MPEG2", 0) != 0)
        throw invalid_input("read_y4m: missing YUV4MPEG2 signature");

    Y4mVideo v;
    std::string colorspace = "420";
    std::istringstream hs(line.substr(9));
    std::string tok;
    while (hs >> tok) {
        switch (tok[0]) {
            case 'W': v.width = std::stoi(tok.substr(1)); break;
            case 'H': v.height = std::stoi(tok.substr(1)); break;
            case 'F': {
                size_t colon = tok.find(':');
                if (colon == std::string::npos) throw invalid_input("read_y4m: bad frame rate");
                v.fps_num = std::stoi(tok.substr(1, colon - 1));
                v.fps_den = std::stoi(tok.substr(colon + 1));
                break;
            }
            case 'C': colorspace = tok.substr(1); break;
            default: break;  // interlacing / aspect tags ignored
        }
    }
    if (v.width <= 0 || v.height <= 0) throw invalid_input("read_y4m: missing dimensions");
    const size_t luma = static_cast<size_t>(v.width) * v.height;
    const size_t skip = chroma_bytes(colorspace, v.width, v.height);

    std::vector<unsigned char> buf(luma);
    while (max_frames < 0 || static_cast<int>(v.frames.size()) < max_frames) {
        if (!std::getline(in, line)) break;
        if (line.rfind("FRAME", 0) != 0) throw invalid_input("read_y4m: expected FRAME marker");
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(luma));
        if (in.gcount() != static_cast<std::streamsize>(luma))
            throw invalid_input("read_y4m: truncated frame");
        in.ignore(static_cast<std::streamsize>(skip));
        PixelPlane plane(v.width, v.height);
        for (int r = 0; r < v.height; ++r)
            for (int c = 0; c < v.width; ++c)
                plane.samples(r, c) = buf[static_cast<size_t>(r) * v.width + c];
        v.frames.push_back(std::move(plane));
    }
    if (v.frames.empty()) throw invalid_input("read_y4m: no frames");
    return v;
}

void write_y4m(const Y4mVideo& video, const std::string& path) {
    if (video.frames.empty()) throw invalid_input("write_y4m: no frames");
    if (video.width % 2 || video.height % 2)
        throw invalid_input("write_y4m: 4:2:0 output needs even dimensions");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("write_y4m: cannot open " + path);
    out << "YUV4MPEG2 W" << video.width << " H" << video.height << " F" << video.fps_num << ":"
        << video.fps_den << " Ip A1:1 C420jpeg\n";
    const size_t luma = static_cast<size_t>(video.width) * video.height;
    std::vector<unsigned char> ybuf(luma);
    std::vector<unsigned char> cbuf(luma / 2, 128);
    for (const PixelPlane& plane : video.frames) {
        if (plane.width != video.width || plane.height != video.height)
            throw invalid_input("write_y4m: frame size mismatch");
        out << "FRAME\n";
        for (int r = 0; r < video.height; ++r)
            for (int c = 0; c < video.width; ++c)
                ybuf[static_cast<size_t>(r) * video.width + c] =
                    static_cast<unsigned char>(clamp8(plane.samples(r, c)));
        out.write(reinterpret_cast<const char*>(ybuf.data()), static_cast<std::streamsize>(luma));
        out.write(reinterpret_cast<const char*>(cbuf.data()), static_cast<std::streamsize>(luma / 2));
    }
}

}  // namespace vcrp
