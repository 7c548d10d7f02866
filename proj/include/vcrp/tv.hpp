#ifndef VCRP_TV_HPP
#define VCRP_TV_HPP

#include <optional>
#include <vector>

#include "vcrp/dct.hpp"
#include "vcrp/mask.hpp"
#include "vcrp/quant.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

// Block under regularization plus a 2-pixel border of neighbor samples.
// Core lives at padded(RING..RING+n, RING..RING+n). top_ring_ok / left_ring_ok
// mark where the immediate ring row/column holds real decoded data, so the
// boundary-coupled objective knows which cross-border terms exist.
struct Patch {
    static constexpr int RING = 2;
    int n = 0;
    Mat padded;  // (n+4) x (n+4)
    Eigen::Array<bool, Eigen::Dynamic, 1> top_ring_ok;   // per core column
    Eigen::Array<bool, Eigen::Dynamic, 1> left_ring_ok;  // per core row

    double u(int r, int c) const { return padded(r + RING, c + RING); }
    Eigen::Block<const Mat> core() const { return padded.block(RING, RING, n, n); }
};

// Captured ring data for one block position. Unavailable ring entries are
// re-synthesized from the current core on every assemble(), so the border
// tracks the core as the descent moves it.
struct PatchContext {
    int n = 0;
    Mat ring_vals;                                           // (n+4) x (n+4)
    Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> avail;  // ring availability

    Patch assemble(const Mat& core) const {
        Patch p;
        p.n = n;
        p.padded.resize(n + 2 * Patch::RING, n + 2 * Patch::RING);
        p.padded.block(Patch::RING, Patch::RING, n, n) = core;
        const int lo = Patch::RING, hi = Patch::RING + n - 1;
        for (int r = 0; r < n + 2 * Patch::RING; ++r)
            for (int c = 0; c < n + 2 * Patch::RING; ++c) {
                if (r >= lo && r <= hi && c >= lo && c <= hi) continue;
                p.padded(r, c) = avail(r, c)
                                     ? ring_vals(r, c)
                                     : core(std::clamp(r, lo, hi) - lo, std::clamp(c, lo, hi) - lo);
            }
        p.top_ring_ok.resize(n);
        p.left_ring_ok.resize(n);
        for (int c = 0; c < n; ++c)
            p.top_ring_ok(c) = avail(lo - 1, lo + c) && avail(lo - 1, lo + c + 1);
        for (int r = 0; r < n; ++r)
            p.left_ring_ok(r) = avail(lo + r, lo - 1) && avail(lo + r + 1, lo - 1);
        return p;
    }
};

// Ring sampled from a plane. With `causal` set, only raster-causal samples
// (rows above the block, or left of it within the block rows) are available;
// everything else is replicated from the core.
PatchContext ring_from_plane(const Mat& plane, int row0, int col0, int n, bool causal);

// No neighbor data at all: every side replicated.
PatchContext free_ring(int n);

struct DescentConfig {
    enum class Schedule { FIXED, HARMONIC };

    std::optional<double> gamma0;               // unset: codecs use 0.05 * mean quant step
    Schedule schedule = Schedule::FIXED;
    int max_iters = 100;                        // L
    std::optional<double> stationarity_eps;     // delta; defaults to 1e-4 * N
    double curv_eps = 1e-3;                     // epsilon in sqrt(|grad u|^2 + eps^2)
    // Couple the objective across the top/left boundary where decoded ring
    // data exists. The causal video path needs this: without it the block's
    // decoded neighbors never influence the descent.
    bool couple_ring = false;

    DescentConfig resolved(double default_gamma) const {
        DescentConfig d = *this;
        if (!d.gamma0) d.gamma0 = default_gamma;
        return d;
    }
    double gamma(int iter) const {
        double g0 = gamma0.value();
        return schedule == Schedule::FIXED ? g0 : g0 / (1.0 + iter / 20.0);
    }
    double delta(int n) const { return stationarity_eps.value_or(1e-4 * n); }
};

struct RestoreResult {
    CoeffBlock coeffs;
    int iters_run = 0;
    std::vector<double> tv_trace;  // TV after each update; length == iters_run
    bool converged = false;
};

// Total variation of the core: sum over core pixels of
// sqrt(ux^2 + uy^2 + eps^2) with forward differences reaching into the ring
// at the bottom/right edges.
double discrete_tv(const Patch& patch, double eps);

// Backward-difference divergence of grad(u)/sqrt(|grad u|^2 + eps^2) at each
// core pixel. Equals -d(discrete_tv)/d(core sample) exactly, including the
// replicated-ring case where edge differences vanish identically.
Mat curvature(const Patch& patch, double eps);

// Descent objective: discrete_tv plus, when coupling is on, the gradient
// terms anchored in the available top/left ring (the cross-boundary jumps).
double descent_objective(const Patch& patch, double eps, bool couple_ring);

// Exact negative gradient of descent_objective with respect to core samples.
// With coupling this is the full backward-difference divergence, ring inflow
// included.
Mat descent_field(const Patch& patch, double eps, bool couple_ring);

// d(discrete_tv)/d(r_k) for the reconstruction predictor + IDCT(residual):
// the (ki, kj) coefficient of forward_dct(-curvature).
double tv_gradient_dct(const PatchContext& ctx, const Block& predictor,
                       const CoeffBlock& residual, int ki, int kj, double eps);

// Gradient descent on TV over the masked coefficients; i_o entries are never
// touched. Optional bin projection clamps each updated coefficient back into
// [center - step/2, center + step/2] after every update.
struct BinConstraint {
    Mat centers;       // dequantized levels
    const Mat* steps;  // quant table
};
RestoreResult restore_block(const PatchContext& ctx, const Block& predictor,
                            const CoeffBlock& residual, const CoeffMask& mask,
                            const DescentConfig& cfg,
                            const BinConstraint* bins = nullptr);

// Whole-plane restoration: Gauss-Seidel sweeps over the blocks, one gradient
// step per block per sweep, rings re-read from the evolving plane.
struct QuantizedPlane {
    int width = 0;
    int height = 0;
    int n = 8;
    std::vector<Mat> levels;  // raster order, integer levels
};

QuantizedPlane quantize_plane(const PixelPlane& plane, const QuantSpec& q, int n);
PixelPlane dequantize_plane(const QuantizedPlane& qp, const QuantSpec& q);

// `gamma_scale`, when given, multiplies the step per coefficient position
// (used to match each step to its quantization bin width).
PixelPlane tv_restore_plane(int width, int height, int n, std::vector<Mat>& coeffs,
                            const std::vector<CoeffMask>& masks, const QuantSpec* bins,
                            const std::vector<Mat>* bin_centers, const DescentConfig& cfg,
                            const Mat* gamma_scale = nullptr);

// Decoder-side optimal reconstruction: TV descent over all AC coefficients,
// each kept inside its quantization bin; DC is held fixed. When the caller
// leaves gamma0 unset, the op uses its own schedule: annealed steps scaled so
// each coefficient can traverse half its bin over the iteration budget.
PixelPlane optimal_reconstruct(const QuantizedPlane& qp, const QuantSpec& q,
                               const DescentConfig& cfg);

}  // namespace vcrp

#endif
