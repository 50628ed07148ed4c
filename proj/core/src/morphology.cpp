#include "segeval/imgproc.hpp"

#include <algorithm>

namespace segeval {

ContourSet morph_boundary(const BinaryMask& mask) {
    ContourSet out;
    out.width = mask.width;
    out.height = mask.height;

    auto background = [&mask](int r, int c) {
        if (r < 0 || r >= mask.height || c < 0 || c >= mask.width) return true;
        return mask.at(r, c) == 0;
    };

    for (int r = 0; r < mask.height; ++r) {
        for (int c = 0; c < mask.width; ++c) {
            if (!mask.at(r, c)) continue;
            if (background(r - 1, c) || background(r + 1, c) ||
                background(r, c - 1) || background(r, c + 1)) {
                out.points.emplace_back(r, c);
            }
        }
    }
    // Row-major scan order is already sorted and duplicate-free.
    return out;
}

std::vector<std::uint8_t> dilate_points(const ContourSet& contour, int radius) {
    std::vector<std::uint8_t> out(static_cast<size_t>(contour.width) * contour.height, 0);
    for (const auto& [r, c] : contour.points) {
        for (int dr = -radius; dr <= radius; ++dr) {
            for (int dc = -radius; dc <= radius; ++dc) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= contour.height || cc < 0 || cc >= contour.width) continue;
                out[static_cast<size_t>(rr) * contour.width + cc] = 1;
            }
        }
    }
    return out;
}

} // namespace segeval
