#pragma once

#include <cstdint>
#include <vector>

#include "segeval/error.hpp"

namespace segeval {

/// 2-D raster of real values in [0,1], row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // size == width * height

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
    double at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    size_t size() const { return data.size(); }

    /// Throws InvalidArgument if dimensions and data disagree or a value
    /// falls outside [0,1].
    void validate() const;
};

/// 2-D raster of {0,1} pixels, row-major. 1 marks foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // values 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, std::uint8_t fill = 0);

    std::uint8_t& at(int row, int col) { return data[static_cast<size_t>(row) * width + col]; }
    std::uint8_t at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    size_t size() const { return data.size(); }

    std::int64_t foreground_count() const;

    void validate() const;
};

enum class ResizeMode { Bilinear, Nearest };

/// Resample to target dimensions. Sample positions use half-pixel centers:
/// src = (dst + 0.5) * (src_dim / dst_dim) - 0.5, clamped to the source.
/// Resizing to the source size is the identity under both modes.
GrayImage resize(const GrayImage& img, int target_width, int target_height,
                 ResizeMode mode);

/// Nearest-neighbor resize of a mask; binarity is preserved by construction.
BinaryMask resize(const BinaryMask& mask, int target_width, int target_height);

/// Threshold a gray image: pixel >= threshold -> 1, else 0. Ties go to
/// foreground.
BinaryMask binarize(const GrayImage& img, double threshold = 0.5);

/// View a mask as a gray image (0 -> 0.0, 1 -> 1.0).
GrayImage to_gray(const BinaryMask& mask);

} // namespace segeval
