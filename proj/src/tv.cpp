#include "vcrp/tv.hpp"

#include <cmath>

namespace vcrp {

PatchContext ring_from_plane(const Mat& plane, int row0, int col0, int n, bool causal) {
    const int h = static_cast<int>(plane.rows());
    const int w = static_cast<int>(plane.cols());
    PatchContext ctx;
    ctx.n = n;
    const int m = n + 2 * Patch::RING;
    ctx.ring_vals = Mat::Zero(m, m);
    ctx.avail.setConstant(m, m, false);
    const int lo = Patch::RING, hi = Patch::RING + n - 1;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            if (r >= lo && r <= hi && c >= lo && c <= hi) continue;
            int pr = row0 + r - Patch::RING;
            int pc = col0 + c - Patch::RING;
            bool in = pr >= 0 && pr < h && pc >= 0 && pc < w;
            bool causal_ok = pr < row0 || (pr < row0 + n && pc < col0);
            if (in && (!causal || causal_ok)) {
                ctx.ring_vals(r, c) = plane(pr, pc);
                ctx.avail(r, c) = true;
            }
        }
    return ctx;
}

PatchContext free_ring(int n) {
    PatchContext ctx;
    ctx.n = n;
    const int m = n + 2 * Patch::RING;
    ctx.ring_vals = Mat::Zero(m, m);
    ctx.avail.setConstant(m, m, false);
    return ctx;
}

namespace {

// Normalized forward-difference gradient field at the core pixels.
void gradient_field(const Patch& p, double eps, Mat& fx, Mat& fy) {
    const int n = p.n;
    fx.resize(n, n);
    fy.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double gx = p.u(r + 1, c) - p.u(r, c);
            double gy = p.u(r, c + 1) - p.u(r, c);
            double w = std::sqrt(gx * gx + gy * gy + eps * eps);
            fx(r, c) = gx / w;
            fy(r, c) = gy / w;
        }
}

}  // namespace

double discrete_tv(const Patch& p, double eps) {
    double tv = 0.0;
    for (int r = 0; r < p.n; ++r)
        for (int c = 0; c < p.n; ++c) {
            double gx = p.u(r + 1, c) - p.u(r, c);
            double gy = p.u(r, c + 1) - p.u(r, c);
            tv += std::sqrt(gx * gx + gy * gy + eps * eps);
        }
    return tv;
}

Mat curvature(const Patch& p, double eps) {
    const int n = p.n;
    Mat fx, fy;
    gradient_field(p, eps, fx, fy);
    Mat curv(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            double div = fx(r, c) + fy(r, c);
            if (r > 0) div -= fx(r - 1, c);
            if (c > 0) div -= fy(r, c - 1);
            curv(r, c) = div;
        }
    return curv;
}

namespace {

// W term anchored at ring pixel (-1, c): forward differences into core row 0.
double top_term_w(const Patch& p, int c, double eps) {
    double gx = p.u(0, c) - p.u(-1, c);
    double gy = p.u(-1, c + 1) - p.u(-1, c);
    return std::sqrt(gx * gx + gy * gy + eps * eps);
}

double left_term_w(const Patch& p, int r, double eps) {
    double gx = p.u(r + 1, -1) - p.u(r, -1);
    double gy = p.u(r, 0) - p.u(r, -1);
    return std::sqrt(gx * gx + gy * gy + eps * eps);
}

}  // namespace

double descent_objective(const Patch& p, double eps, bool couple_ring) {
    double tv = discrete_tv(p, eps);
    if (!couple_ring) return tv;
    for (int c = 0; c < p.n; ++c)
        if (p.top_ring_ok(c)) tv += top_term_w(p, c, eps);
    for (int r = 0; r < p.n; ++r)
        if (p.left_ring_ok(r)) tv += left_term_w(p, r, eps);
    return tv;
}

Mat descent_field(const Patch& p, double eps, bool couple_ring) {
    Mat field = curvature(p, eps);
    if (!couple_ring) return field;
    for (int c = 0; c < p.n; ++c) {
        if (!p.top_ring_ok(c)) continue;
        double gx = p.u(0, c) - p.u(-1, c);
        field(0, c) -= gx / top_term_w(p, c, eps);
    }
    for (int r = 0; r < p.n; ++r) {
        if (!p.left_ring_ok(r)) continue;
        double gy = p.u(r, 0) - p.u(r, -1);
        field(r, 0) -= gy / left_term_w(p, r, eps);
    }
    return field;
}

double tv_gradient_dct(const PatchContext& ctx, const Block& predictor,
                       const CoeffBlock& residual, int ki, int kj, double eps) {
    Mat core = predictor.samples + inverse_dct(residual.coeffs);
    Patch p = ctx.assemble(core);
    Mat g = forward_dct(-curvature(p, eps));
    return g(ki, kj);
}

namespace {

void project_bins(Mat& coeffs, const CoeffMask& mask, const BinConstraint& bins) {
    for (const auto& [i, j] : mask.i_dct) {
        double step = (*bins.steps)(i, j);
        double lob = bins.centers(i, j) - 0.5 * step;
        double hib = bins.centers(i, j) + 0.5 * step;
        coeffs(i, j) = std::clamp(coeffs(i, j), lob, hib);
    }
}

}  // namespace

RestoreResult restore_block(const PatchContext& ctx, const Block& predictor,
                            const CoeffBlock& residual, const CoeffMask& mask,
                            const DescentConfig& cfg, const BinConstraint* bins) {
    RestoreResult res;
    res.coeffs = residual;
    if (mask.empty()) {
        res.converged = true;
        return res;
    }
    if (!cfg.gamma0 || *cfg.gamma0 <= 0.0)
        throw invalid_input("restore_block: descent step gamma0 not resolved");
    const int n = residual.size();
    const double delta = cfg.delta(n);
    for (int it = 0; it < cfg.max_iters; ++it) {
        Mat core = predictor.samples + inverse_dct(res.coeffs.coeffs);
        Patch p = ctx.assemble(core);
        Mat conv = forward_dct(descent_field(p, cfg.curv_eps, cfg.couple_ring));
        double g = cfg.gamma(it);
        Mat before = res.coeffs.coeffs;
        for (const auto& [i, j] : mask.i_dct) res.coeffs.coeffs(i, j) += g * conv(i, j);
        if (bins) project_bins(res.coeffs.coeffs, mask, *bins);
        double change2 = (res.coeffs.coeffs - before).squaredNorm();
        ++res.iters_run;
        Patch pafter = ctx.assemble(predictor.samples + inverse_dct(res.coeffs.coeffs));
        res.tv_trace.push_back(descent_objective(pafter, cfg.curv_eps, cfg.couple_ring));
        if (std::sqrt(change2) <= delta) {
            res.converged = true;
            break;
        }
    }
    return res;
}

QuantizedPlane quantize_plane(const PixelPlane& plane, const QuantSpec& q, int n) {
    if (plane.width % n || plane.height % n)
        throw invalid_input("quantize_plane: dimensions not divisible by block size");
    QuantizedPlane qp;
    qp.width = plane.width;
    qp.height = plane.height;
    qp.n = n;
    for (int r0 = 0; r0 < plane.height; r0 += n)
        for (int c0 = 0; c0 < plane.width; c0 += n) {
            CoeffBlock cb = forward_bdct(Block(r0, c0, plane.samples.block(r0, c0, n, n)));
            qp.levels.push_back(quantize(cb, q).coeffs);
        }
    return qp;
}

PixelPlane dequantize_plane(const QuantizedPlane& qp, const QuantSpec& q) {
    PixelPlane out(qp.width, qp.height);
    int bi = 0;
    for (int r0 = 0; r0 < qp.height; r0 += qp.n)
        for (int c0 = 0; c0 < qp.width; c0 += qp.n, ++bi) {
            Mat coeffs = qp.levels[bi].array() * q.table.array();
            out.samples.block(r0, c0, qp.n, qp.n) = inverse_dct(coeffs);
        }
    return out;
}

PixelPlane tv_restore_plane(int width, int height, int n, std::vector<Mat>& coeffs,
                            const std::vector<CoeffMask>& masks, const QuantSpec* bins,
                            const std::vector<Mat>* bin_centers, const DescentConfig& cfg,
                            const Mat* gamma_scale) {
    if (!cfg.gamma0 || *cfg.gamma0 <= 0.0)
        throw invalid_input("tv_restore_plane: descent step gamma0 not resolved");
    const int bw = width / n, bh = height / n;
    PixelPlane plane(width, height);
    int bi = 0;
    for (int br = 0; br < bh; ++br)
        for (int bc = 0; bc < bw; ++bc, ++bi)
            plane.samples.block(br * n, bc * n, n, n) = inverse_dct(coeffs[bi]);

    const double sweep_delta = cfg.delta(n) * std::sqrt(static_cast<double>(bw) * bh);
    for (int it = 0; it < cfg.max_iters; ++it) {
        double g = cfg.gamma(it);
        double change2 = 0.0;
        bi = 0;
        for (int br = 0; br < bh; ++br)
            for (int bc = 0; bc < bw; ++bc, ++bi) {
                if (masks[bi].empty()) continue;
                int r0 = br * n, c0 = bc * n;
                PatchContext ctx = ring_from_plane(plane.samples, r0, c0, n, false);
                Patch p = ctx.assemble(plane.samples.block(r0, c0, n, n));
                Mat conv = forward_dct(descent_field(p, cfg.curv_eps, cfg.couple_ring));
                for (const auto& [i, j] : masks[bi].i_dct) {
                    double before = coeffs[bi](i, j);
                    double gs = gamma_scale ? (*gamma_scale)(i, j) : 1.0;
                    double v = before + g * gs * conv(i, j);
                    if (bins) {
                        double step = bins->table(i, j);
                        double center = (*bin_centers)[bi](i, j);
                        v = std::clamp(v, center - 0.5 * step, center + 0.5 * step);
                    }
                    coeffs[bi](i, j) = v;
                    change2 += (v - before) * (v - before);
                }
                plane.samples.block(r0, c0, n, n) = inverse_dct(coeffs[bi]);
            }
        if (std::sqrt(change2) <= sweep_delta) break;
    }
    return plane;
}

PixelPlane optimal_reconstruct(const QuantizedPlane& qp, const QuantSpec& q,
                               const DescentConfig& cfg) {
    const int n = qp.n;
    std::vector<Mat> coeffs(qp.levels.size());
    std::vector<Mat> centers(qp.levels.size());
    for (size_t b = 0; b < qp.levels.size(); ++b) {
        centers[b] = qp.levels[b].array() * q.table.array();
        coeffs[b] = centers[b];
    }
    CoeffMask all_ac(n, {});
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i || j) all_ac.i_dct.emplace_back(i, j);
    all_ac.order = all_ac.i_dct;
    std::vector<CoeffMask> masks(qp.levels.size(), all_ac);
    // Per-coefficient steps sized to traverse half a quantization bin over
    // the iteration budget; annealed unless the caller pinned a step.
    Mat scale = q.table / (2.0 * cfg.max_iters);
    DescentConfig d = cfg;
    if (!d.gamma0) {
        d.gamma0 = 1.0;
        d.schedule = DescentConfig::Schedule::HARMONIC;
    }
    return tv_restore_plane(qp.width, qp.height, n, coeffs, masks, &q, &centers, d, &scale);
}

}  // namespace vcrp
