#pragma once

#include <utility>
#include <vector>

#include "segeval/raster.hpp"

namespace segeval {

/// Pixel coordinates of a contour, sorted row-major with no duplicates.
struct ContourSet {
    int width = 0;  // dimensions of the source raster
    int height = 0;
    std::vector<std::pair<int, int>> points; // (row, col)

    bool empty() const { return points.empty(); }
    size_t size() const { return points.size(); }
};

/// Row-major raster of Euclidean distances to the nearest seed pixel.
/// Zero exactly at the seeds, 1-Lipschitz under the pixel metric.
struct DistanceMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    double at(int row, int col) const { return data[static_cast<size_t>(row) * width + col]; }
    double at(const std::pair<int, int>& p) const { return at(p.first, p.second); }
};

/// Foreground pixels with at least one background 4-neighbor. The image
/// border counts as background, so a mask touching the frame has a contour
/// there.
ContourSet morph_boundary(const BinaryMask& mask);

/// Canny edges: Gaussian smooth, Sobel gradients, non-maximum suppression,
/// hysteresis on gradient magnitude normalized by its maximum. An all-0 or
/// all-1 mask has no interior gradient and yields an empty set. On binary
/// input the result lies within a 1-pixel dilation of morph_boundary.
ContourSet canny_contour(const BinaryMask& mask, double sigma = 0.5,
                         double low = 0.1, double high = 0.3);

/// Dilate a point set by a square structuring element of the given radius
/// (8-connected for radius 1). Test/oracle helper for contour containment.
std::vector<std::uint8_t> dilate_points(const ContourSet& contour, int radius);

/// Exact Euclidean distance transform (two-pass lower-envelope method over
/// squared distances). Throws InvalidArgument on an empty seed set.
DistanceMap distance_transform(const ContourSet& seeds, int width, int height);

/// Low-pass with the separable binomial kernel [1,4,6,4,1]/16 (replicate
/// borders), then keep every second pixel starting at index 0. Output
/// dimensions are floor(input/2); input must be at least 2x2.
GrayImage gaussian_downsample2x(const GrayImage& img);

/// Square matrix of real values, row-major; holds transform coefficients.
struct RealMatrix {
    int n = 0;
    std::vector<double> data;

    RealMatrix() = default;
    explicit RealMatrix(int size, double fill = 0.0)
        : n(size), data(static_cast<size_t>(size) * size, fill) {}

    double& at(int row, int col) { return data[static_cast<size_t>(row) * n + col]; }
    double at(int row, int col) const { return data[static_cast<size_t>(row) * n + col]; }
};

/// Orthonormal 2-D DCT-II of a square block. A constant block c maps to a
/// single DC coefficient of value c*N.
RealMatrix dct2(const GrayImage& block);
RealMatrix dct2(const RealMatrix& block);

/// Inverse of dct2 (orthonormal convention, exact round-trip).
RealMatrix idct2(const RealMatrix& coeffs);

/// One level of detail coefficients from the 2-D Haar decomposition.
/// detail_x carries horizontal detail (row-pass high band), detail_y
/// vertical, detail_xy diagonal.
struct HaarLevel {
    RealMatrix detail_x;
    RealMatrix detail_y;
    RealMatrix detail_xy;
};

/// Orthonormal 2-D Haar pyramid: levels[0] is the finest scale, `approx`
/// the final low-pass band. A constant image c at L levels carries c*2^L in
/// approx and zero everywhere else.
struct HaarPyramid {
    std::vector<HaarLevel> levels;
    RealMatrix approx;
};

/// Square input with dimensions divisible by 2^levels.
HaarPyramid haar_dwt2(const GrayImage& img, int levels);
HaarPyramid haar_dwt2(const RealMatrix& img, int levels);

/// Inverse Haar reconstruction (exact round-trip).
RealMatrix haar_idwt2(const HaarPyramid& pyramid);

} // namespace segeval
