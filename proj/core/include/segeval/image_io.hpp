#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "segeval/raster.hpp"

namespace segeval {

enum class ImageKind { Gray, Mask };

/// Load an 8-bit grayscale PNG or PGM (P2/P5) as a gray image. Pixel value
/// p in 0..255 maps to p/255. Color, palette, or 16-bit inputs are rejected
/// with the path and reason. The format is detected from the file magic,
/// not the extension.
GrayImage load_gray(const std::filesystem::path& path);

/// Load a mask: as load_gray, then binarize at `threshold` (>= rule).
BinaryMask load_mask(const std::filesystem::path& path, double threshold = 0.5);

/// 8-bit grayscale PNG; value v encodes as round(v * 255).
void write_png(const GrayImage& img, const std::filesystem::path& path);

/// Mask as an 8-bit grayscale PNG with foreground = 255. write then
/// load_mask round-trips exactly.
void write_png(const BinaryMask& mask, const std::filesystem::path& path);

/// Interleaved 8-bit RGB rows (3 * width bytes per row), used for
/// colormapped quality maps.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // size == 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h);

    std::uint8_t* pixel(int row, int col) {
        return data.data() + 3 * (static_cast<size_t>(row) * width + col);
    }
    const std::uint8_t* pixel(int row, int col) const {
        return data.data() + 3 * (static_cast<size_t>(row) * width + col);
    }
};

/// 24-bit RGB PNG.
void write_png(const RgbImage& img, const std::filesystem::path& path);

/// PGM writer; P5 (binary) by default, P2 (ASCII) when `ascii` is set.
void write_pgm(const GrayImage& img, const std::filesystem::path& path,
               bool ascii = false);
void write_pgm(const BinaryMask& mask, const std::filesystem::path& path,
               bool ascii = false);

} // namespace segeval
