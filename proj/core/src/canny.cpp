#include "segeval/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace segeval {

namespace {

// Separable convolution with replicate borders.
std::vector<double> convolve_separable(const std::vector<double>& src, int width,
                                       int height, const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(src.size()), out(src.size());

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                int xx = std::clamp(x + k, 0, width - 1);
                acc += kernel[k + radius] * src[static_cast<size_t>(y) * width + xx];
            }
            tmp[static_cast<size_t>(y) * width + x] = acc;
        }
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k) {
                int yy = std::clamp(y + k, 0, height - 1);
                acc += kernel[k + radius] * tmp[static_cast<size_t>(yy) * width + x];
            }
            out[static_cast<size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

} // namespace

ContourSet canny_contour(const BinaryMask& mask, double sigma, double low, double high) {
    if (mask.width < 1 || mask.height < 1)
        throw InvalidArgument("canny_contour: degenerate mask dimensions");
    if (!(sigma > 0.0) || !(low >= 0.0) || !(high >= low) || !(high <= 1.0))
        throw InvalidArgument("canny_contour: require sigma > 0 and 0 <= low <= high <= 1");

    const int w = mask.width, h = mask.height;
    ContourSet out;
    out.width = w;
    out.height = h;

    std::vector<double> img(mask.data.begin(), mask.data.end());
    std::vector<double> smooth = convolve_separable(img, w, h, gaussian_kernel(sigma));

    auto px = [&smooth, w, h](int y, int x) {
        y = std::clamp(y, 0, h - 1);
        x = std::clamp(x, 0, w - 1);
        return smooth[static_cast<size_t>(y) * w + x];
    };

    std::vector<double> gx(img.size()), gy(img.size()), mag(img.size());
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double dx = (px(y - 1, x + 1) + 2.0 * px(y, x + 1) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y, x - 1) + px(y + 1, x - 1));
            double dy = (px(y + 1, x - 1) + 2.0 * px(y + 1, x) + px(y + 1, x + 1)) -
                        (px(y - 1, x - 1) + 2.0 * px(y - 1, x) + px(y - 1, x + 1));
            size_t i = static_cast<size_t>(y) * w + x;
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = std::hypot(dx, dy);
            max_mag = std::max(max_mag, mag[i]);
        }
    }
    if (max_mag <= 0.0) return out; // constant mask, no interior gradient

    for (double& m : mag) m /= max_mag;

    // Non-maximum suppression along the quantized gradient direction.
    std::vector<std::uint8_t> ridge(img.size(), 0);
    auto mag_at = [&mag, w, h](int y, int x) {
        if (y < 0 || y >= h || x < 0 || x >= w) return 0.0;
        return mag[static_cast<size_t>(y) * w + x];
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            size_t i = static_cast<size_t>(y) * w + x;
            if (mag[i] <= 0.0) continue;
            double angle = std::atan2(gy[i], gx[i]) * 180.0 / std::numbers::pi;
            if (angle < 0) angle += 180.0;
            double n1, n2;
            if (angle < 22.5 || angle >= 157.5) { // horizontal gradient
                n1 = mag_at(y, x - 1);
                n2 = mag_at(y, x + 1);
            } else if (angle < 67.5) { // diagonal
                n1 = mag_at(y - 1, x - 1);
                n2 = mag_at(y + 1, x + 1);
            } else if (angle < 112.5) { // vertical gradient
                n1 = mag_at(y - 1, x);
                n2 = mag_at(y + 1, x);
            } else {
                n1 = mag_at(y - 1, x + 1);
                n2 = mag_at(y + 1, x - 1);
            }
            if (mag[i] >= n1 && mag[i] >= n2) ridge[i] = 1;
        }
    }

    // Hysteresis: grow strong edges through weak ones, 8-connected.
    std::vector<std::uint8_t> state(img.size(), 0); // 1 = weak, 2 = accepted
    std::vector<size_t> stack;
    for (size_t i = 0; i < img.size(); ++i) {
        if (!ridge[i]) continue;
        if (mag[i] >= high) {
            state[i] = 2;
            stack.push_back(i);
        } else if (mag[i] >= low) {
            state[i] = 1;
        }
    }
    while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        int y = static_cast<int>(i) / w, x = static_cast<int>(i) % w;
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                int yy = y + dy, xx = x + dx;
                if (yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
                size_t j = static_cast<size_t>(yy) * w + xx;
                if (state[j] == 1) {
                    state[j] = 2;
                    stack.push_back(j);
                }
            }
        }
    }

    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (state[static_cast<size_t>(y) * w + x] == 2) out.points.emplace_back(y, x);
    return out;
}

} // namespace segeval
