#ifndef VCRP_IMAGE_CODEC_HPP
#define VCRP_IMAGE_CODEC_HPP

#include <cstdint>
#include <vector>

#include "vcrp/container.hpp"
#include "vcrp/mask.hpp"
#include "vcrp/quant.hpp"
#include "vcrp/tv.hpp"
#include "vcrp/types.hpp"

namespace vcrp {

// Still-image coder: block DCT + quantization, with an optional
// cancel-and-restore prediction stage over a static coefficient mask.
// The mask is shared configuration, never signalled in the stream.
struct ImageCodecConfig {
    QuantSpec quant = make_jpeg_quant(50, 8);
    CoeffMask mask;  // empty = baseline
    DescentConfig descent;
    bool restore_enabled = true;

    bool prediction_active() const { return restore_enabled && !mask.empty(); }
};

struct EncodeReport {
    size_t total_bits = 0;
    size_t header_bits = 0;
    double bpp = 0.0;
    Mat position_entropy;  // bits/symbol of the coded levels at each position
};

struct EncodedImage {
    std::vector<uint8_t> stream;
    EncodeReport report;
    PixelPlane local_recon;  // encoder-side reconstruction, must match the decoder
};

struct DecodedImage {
    PixelPlane recon;   // final (= stage3)
    PixelPlane stage1;  // support coefficients only
    PixelPlane stage2;  // + predicted coefficients
    PixelPlane stage3;  // + coded prediction errors
};

EncodedImage encode_image(const PixelPlane& plane, const ImageCodecConfig& cfg);
DecodedImage decode_image(const std::vector<uint8_t>& stream, const ImageCodecConfig& cfg);

// Random cancellation experiment: zero a random fraction of the AC
// coefficients of the unquantized DCT image, then restore them by TV descent.
struct CancellationResult {
    double psnr_before = 0.0;  // zero-filled vs original
    double psnr_after = 0.0;   // restored vs original
    size_t cancelled = 0;
};
CancellationResult random_cancellation_experiment(const PixelPlane& plane, double pct,
                                                  const DescentConfig& cfg, uint64_t seed);

// Per-position cancellation/restoration study over a corpus: for each AC
// position, the order-0 entropy of its quantized levels (the coding cost
// removed when the position is deleted) and the PSNR drop after restoration.
struct PositionStudyRow {
    int quality = 0;
    int i = 0;
    int j = 0;
    double entropy_bits = 0.0;  // mean over corpus
    double psnr_drop_db = 0.0;  // mean over corpus
};
std::vector<PositionStudyRow> position_study(const std::vector<PixelPlane>& corpus,
                                             const std::vector<int>& qualities,
                                             const DescentConfig& cfg);

std::string position_study_csv(const std::vector<PositionStudyRow>& rows);

}  // namespace vcrp

#endif
