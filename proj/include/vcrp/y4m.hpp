#ifndef VCRP_Y4M_HPP
#define VCRP_Y4M_HPP

#include <string>
#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

// YUV4MPEG2 luma extraction: 420/422/444/mono accepted, chroma discarded.
struct Y4mVideo {
    int width = 0;
    int height = 0;
    int fps_num = 25;
    int fps_den = 1;
    std::vector<PixelPlane> frames;

    double fps() const { return static_cast<double>(fps_num) / fps_den; }
};

Y4mVideo read_y4m(const std::string& path, int max_frames = -1);

// Writes C420jpeg with neutral chroma.
void write_y4m(const Y4mVideo& video, const std::string& path);

}  // namespace vcrp

#endif
