#include "segeval/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace segeval {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InvalidArgument("GrayImage: non-positive dimensions");
}

void GrayImage::validate() const {
    if (data.size() != static_cast<size_t>(width) * height)
        throw InvalidArgument("GrayImage: data length != width * height");
    for (double v : data)
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidArgument("GrayImage: value outside [0,1]");
}

BinaryMask::BinaryMask(int w, int h, std::uint8_t fill)
    : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {
    if (w <= 0 || h <= 0) throw InvalidArgument("BinaryMask: non-positive dimensions");
    if (fill > 1) throw InvalidArgument("BinaryMask: fill value not in {0,1}");
}

std::int64_t BinaryMask::foreground_count() const {
    std::int64_t n = 0;
    for (std::uint8_t v : data) n += v;
    return n;
}

void BinaryMask::validate() const {
    if (data.size() != static_cast<size_t>(width) * height)
        throw InvalidArgument("BinaryMask: data length != width * height");
    for (std::uint8_t v : data)
        if (v > 1) throw InvalidArgument("BinaryMask: value not in {0,1}");
}

namespace {

// Continuous source coordinate of a destination pixel center.
inline double src_coord(int dst, double scale) {
    return (dst + 0.5) * scale - 0.5;
}

} // namespace

GrayImage resize(const GrayImage& img, int target_width, int target_height,
                 ResizeMode mode) {
    if (target_width < 1 || target_height < 1)
        throw InvalidArgument("resize: zero-sized target");
    if (img.width == target_width && img.height == target_height) return img;

    GrayImage out(target_width, target_height);
    const double sx = static_cast<double>(img.width) / target_width;
    const double sy = static_cast<double>(img.height) / target_height;

    if (mode == ResizeMode::Nearest) {
        for (int y = 0; y < target_height; ++y) {
            int srow = std::clamp(static_cast<int>(std::floor((y + 0.5) * sy)), 0, img.height - 1);
            for (int x = 0; x < target_width; ++x) {
                int scol = std::clamp(static_cast<int>(std::floor((x + 0.5) * sx)), 0, img.width - 1);
                out.at(y, x) = img.at(srow, scol);
            }
        }
        return out;
    }

    for (int y = 0; y < target_height; ++y) {
        double fy = std::clamp(src_coord(y, sy), 0.0, static_cast<double>(img.height - 1));
        int y0 = static_cast<int>(std::floor(fy));
        int y1 = std::min(y0 + 1, img.height - 1);
        double wy = fy - y0;
        for (int x = 0; x < target_width; ++x) {
            double fx = std::clamp(src_coord(x, sx), 0.0, static_cast<double>(img.width - 1));
            int x0 = static_cast<int>(std::floor(fx));
            int x1 = std::min(x0 + 1, img.width - 1);
            double wx = fx - x0;
            double top = (1.0 - wx) * img.at(y0, x0) + wx * img.at(y0, x1);
            double bot = (1.0 - wx) * img.at(y1, x0) + wx * img.at(y1, x1);
            out.at(y, x) = (1.0 - wy) * top + wy * bot;
        }
    }
    return out;
}

BinaryMask resize(const BinaryMask& mask, int target_width, int target_height) {
    if (target_width < 1 || target_height < 1)
        throw InvalidArgument("resize: zero-sized target");
    if (mask.width == target_width && mask.height == target_height) return mask;

    BinaryMask out(target_width, target_height);
    const double sx = static_cast<double>(mask.width) / target_width;
    const double sy = static_cast<double>(mask.height) / target_height;
    for (int y = 0; y < target_height; ++y) {
        int srow = std::clamp(static_cast<int>(std::floor((y + 0.5) * sy)), 0, mask.height - 1);
        for (int x = 0; x < target_width; ++x) {
            int scol = std::clamp(static_cast<int>(std::floor((x + 0.5) * sx)), 0, mask.width - 1);
            out.at(y, x) = mask.at(srow, scol);
        }
    }
    return out;
}

BinaryMask binarize(const GrayImage& img, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw InvalidArgument("binarize: threshold must lie in (0,1)");
    BinaryMask out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] >= threshold ? 1 : 0;
    return out;
}

GrayImage to_gray(const BinaryMask& mask) {
    GrayImage out(mask.width, mask.height);
    for (size_t i = 0; i < mask.data.size(); ++i)
        out.data[i] = mask.data[i] ? 1.0 : 0.0;
    return out;
}

} // namespace segeval
