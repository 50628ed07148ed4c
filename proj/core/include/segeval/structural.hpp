#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "segeval/raster.hpp"

namespace segeval {

/// Parameters of the SSIM family. Defaults are the established five-scale
/// configuration: exponent weights (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
/// normalized to sum to 1, an 11x11 Gaussian window with sigma 1.5, and
/// stabilizers C1=(0.01*L)^2, C2=(0.03*L)^2, C3=C2/2 for dynamic range L=1.
struct SsimConfig {
    int scales = 5;
    std::vector<double> weights; // one exponent per scale, sums to 1
    int window = 11;
    double window_sigma = 1.5;
    double c1 = 1e-4;
    double c2 = 9e-4;
    double c3 = 4.5e-4;
    double dynamic_range = 1.0;

    static SsimConfig defaults();

    /// Defaults with stabilizers derived from k1/k2 and the dynamic range.
    static SsimConfig with_range(double k1, double k2, double range);

    void validate() const; // throws InvalidArgument
};

/// Single-scale SSIM: mean over the quality map plus the map itself. The
/// map has the input dimensions (replicate-border windowing) and is clamped
/// to [0,1] for storage.
struct SsimMapResult {
    double mean = 0.0;
    GrayImage map;
    std::int64_t structure_clamps = 0; // negative structure values clamped to 0
};

SsimMapResult ssim_map(const GrayImage& a, const GrayImage& b,
                       const SsimConfig& cfg = SsimConfig::defaults());

/// Multi-scale SSIM over `scales` dyadic scales. scale_values holds the
/// composition components: mean contrast*structure for scales below the
/// coarsest, full SSIM at the coarsest; msssim is the weighted product of
/// scale_values. scale_ssim and maps report the full SSIM per scale for
/// inspection; map j has the dimensions of the j-times-downsampled input.
struct SsimResult {
    double msssim = 0.0;
    std::vector<double> scale_values;
    std::vector<double> scale_ssim;
    std::vector<GrayImage> maps;
    std::int64_t structure_clamps = 0;
};

/// Requires min(width, height) >= window * 2^(scales-1); throws
/// InvalidArgument naming the largest scale count that would fit.
SsimResult msssim(const GrayImage& a, const GrayImage& b,
                  const SsimConfig& cfg = SsimConfig::defaults());

/// Largest scale count msssim accepts for these dimensions.
int max_scales_for(int width, int height, int window = 11);

/// Jet colormap sample for v in [0,1]: 0 maps to the dark blue end, 1 to
/// the dark red end. Components are
///   r = clamp(1.5 - |4v - 3|), g = clamp(1.5 - |4v - 2|),
///   b = clamp(1.5 - |4v - 1|), each to [0,1], encoded as round(x*255).
std::array<std::uint8_t, 3> jet_rgb(double v);

/// Write one quality map (1-based scale index) as a Jet-colormapped RGB PNG.
void quality_map_png(const SsimResult& result, int scale,
                     const std::filesystem::path& path);

enum class HashKind { AHash, DHash, PHash, WHash };

const char* hash_kind_name(HashKind kind);

/// 64-bit perceptual hash. Bits are indexed row-major (index i = row*8+col
/// of the 8x8 comparison grid) and packed MSB-first, so the hex rendering
/// reads in raster order. Deterministic for a given input and kind.
struct HashCode {
    std::uint64_t bits = 0;
    HashKind kind = HashKind::AHash;

    std::string hex() const;
};

/// Compute one of the four hashes:
///  - aHash: bilinear resize to 8x8, bit = pixel > mean
///  - dHash: bilinear resize to 9x8, bit = left < right along each row
///  - pHash: bilinear resize to 32x32, orthonormal DCT, the 8x8
///    low-frequency block scanned row-major with DC dropped and coefficient
///    (0,8) appended as the 64th value, bit = coefficient > median
///  - wHash: bilinear resize to 8x8, 3-level Haar, coefficients flattened
///    (approx first, then coarse-to-fine detail_x/detail_y/detail_xy),
///    median over the 63 non-DC values, bit = coefficient > median; the DC
///    slot always emits 0
/// All comparisons are strict; equality maps to bit 0. The median of an
/// even count is the mean of the two middle order statistics. The Haar
/// scaling is pinned as multiplication by the double nearest 1/sqrt(2):
/// binary inputs produce frequent exact coefficient/median ties, so the
/// bit pattern is only reproducible across implementations if the
/// coefficient arithmetic is reproduced exactly.
HashCode hash_image(const GrayImage& img, HashKind kind);
HashCode hash_image(const BinaryMask& mask, HashKind kind);

int hamming_distance(const HashCode& a, const HashCode& b);

/// Per-kind Hamming distances between the hashes of two masks, and their
/// mean. `ahs` is in [0,64] (the scale of the reported values); normalized
/// divides by 64.
struct HashScores {
    int ahash = 0;
    int dhash = 0;
    int phash = 0;
    int whash = 0;
    double ahs = 0.0;
    double ahs_normalized = 0.0;
};

/// Throws InvalidArgument when dimensions differ (hashing itself resizes,
/// but a mismatched pair indicates an upstream alignment bug).
HashScores ahs(const BinaryMask& gt, const BinaryMask& pred);

} // namespace segeval
