#ifndef VCRP_METRICS_HPP
#define VCRP_METRICS_HPP

#include <string>
#include <vector>

#include "vcrp/types.hpp"

namespace vcrp {

struct PsnrResult {
    double db = 0.0;  // +inf when lossless
    bool lossless = false;

    std::string to_string() const;
};

PsnrResult psnr(const PixelPlane& a, const PixelPlane& b);

struct RDPoint {
    double bitrate = 0.0;  // kbps for video, bpp for images
    double psnr = 0.0;     // dB
};

struct RDCurve {
    std::string label;
    std::vector<RDPoint> points;  // sorted by strictly increasing bitrate

    void validate() const;
};

// Bjontegaard average rate difference in percent (negative = `test` saves
// rate): cubic fits of log10(rate) over PSNR, integrated over the common
// PSNR interval.
double bd_rate(const RDCurve& anchor, const RDCurve& test);

}  // namespace vcrp

#endif
