#include "vcrp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace vcrp {

std::string PsnrResult::to_string() const {
    if (lossless) return "lossless";
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << db << " dB";
    return os.str();
}

PsnrResult psnr(const PixelPlane& a, const PixelPlane& b) {
    if (a.width != b.width || a.height != b.height)
        throw invalid_input("psnr: dimension mismatch");
    double mse = (a.samples - b.samples).squaredNorm() /
                 (static_cast<double>(a.width) * a.height);
    PsnrResult r;
    if (mse == 0.0) {
        r.lossless = true;
        r.db = std::numeric_limits<double>::infinity();
        return r;
    }
    r.db = 10.0 * std::log10(255.0 * 255.0 / mse);
    return r;
}

void RDCurve::validate() const {
    if (points.size() < 4) throw invalid_input("RDCurve: need at least 4 points");
    for (size_t i = 0; i < points.size(); ++i) {
        if (points[i].bitrate <= 0.0 || !std::isfinite(points[i].psnr))
            throw invalid_input("RDCurve: bad point");
        if (i > 0 && points[i].bitrate <= points[i - 1].bitrate)
            throw invalid_input("RDCurve: bitrate not strictly increasing");
    }
}

namespace {

// Least-squares cubic coefficients of log10(rate) as a function of PSNR.
Eigen::Vector4d fit_log_rate(const RDCurve& c) {
    const int m = static_cast<int>(c.points.size());
    Eigen::MatrixXd a(m, 4);
    Eigen::VectorXd y(m);
    for (int i = 0; i < m; ++i) {
        double p = c.points[i].psnr;
        a(i, 0) = 1.0;
        a(i, 1) = p;
        a(i, 2) = p * p;
        a(i, 3) = p * p * p;
        y(i) = std::log10(c.points[i].bitrate);
    }
    return a.colPivHouseholderQr().solve(y);
}

double integrate_cubic(const Eigen::Vector4d& k, double lo, double hi) {
    auto antideriv = [&](double x) {
        return k(0) * x + k(1) * x * x / 2.0 + k(2) * x * x * x / 3.0 + k(3) * x * x * x * x / 4.0;
    };
    return antideriv(hi) - antideriv(lo);
}

}  // namespace

double bd_rate(const RDCurve& anchor, const RDCurve& test) {
    anchor.validate();
    test.validate();
    auto psnr_range = [](const RDCurve& c) {
        double lo = c.points.front().psnr, hi = c.points.front().psnr;
        for (const auto& p : c.points) {
            lo = std::min(lo, p.psnr);
            hi = std::max(hi, p.psnr);
        }
        return std::pair<double, double>{lo, hi};
    };
    auto [alo, ahi] = psnr_range(anchor);
    auto [tlo, thi] = psnr_range(test);
    double lo = std::max(alo, tlo), hi = std::min(ahi, thi);
    if (hi <= lo) throw invalid_input("bd_rate: PSNR ranges do not overlap");

    Eigen::Vector4d ka = fit_log_rate(anchor);
    Eigen::Vector4d kt = fit_log_rate(test);
    double avg_diff = (integrate_cubic(kt, lo, hi) - integrate_cubic(ka, lo, hi)) / (hi - lo);
    return (std::pow(10.0, avg_diff) - 1.0) * 100.0;
}

}  // namespace vcrp
