#include "vcrp/pgm.hpp"

#include <fstream>
#include <vector>

namespace vcrp {

namespace {

int next_token(std::istream& in) {
    // skip whitespace and '#' comments between header fields
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!isspace(c)) {
            in.unget();
            int v;
            if (!(in >> v)) break;
            return v;
        }
    }
    throw invalid_input("read_pgm: malformed header");
}

}  // namespace

PixelPlane read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw invalid_input("read_pgm: cannot open " + path);
    char m0 = 0, m1 = 0;
    in.get(m0);
    in.get(m1);
    if (m0 != 'P' || m1 != '5') throw invalid_input("read_pgm: not a binary PGM (P5): " + path);
    int w = next_token(in);
    int h = next_token(in);
    int maxval = next_token(in);
    if (w <= 0 || h <= 0) throw invalid_input("read_pgm: bad dimensions");
    if (maxval != 255) throw invalid_input("read_pgm: only 8-bit PGM supported");
    in.get();  // single whitespace after maxval
    std::vector<unsigned char> buf(static_cast<size_t>(w) * h);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
        throw invalid_input("read_pgm: truncated sample data");
    PixelPlane plane(w, h);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c)
            plane.samples(r, c) = buf[static_cast<size_t>(r) * w + c];
    return plane;
}

void write_pgm(const PixelPlane& plane, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw invalid_input("write_pgm: cannot open " + path);
    out << "P5\n" << plane.width << " " << plane.height << "\n255\n";
    std::vector<unsigned char> buf(static_cast<size_t>(plane.width) * plane.height);
    for (int r = 0; r < plane.height; ++r)
        for (int c = 0; c < plane.width; ++c)
            buf[static_cast<size_t>(r) * plane.width + c] =
                static_cast<unsigned char>(clamp8(plane.samples(r, c)));
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace vcrp
