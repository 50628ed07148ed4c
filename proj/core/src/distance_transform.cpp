#include "segeval/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace segeval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D squared-distance transform by the lower envelope of parabolas.
// Sites with infinite value never contribute and are skipped, so slices
// without any seed stay infinite until a later pass fills them in.
void dt1d(const std::vector<double>& f, std::vector<double>& d, int n,
          std::vector<int>& v, std::vector<double>& z) {
    auto intersect = [&f](int q, int p) {
        return ((f[q] + static_cast<double>(q) * q) -
                (f[p] + static_cast<double>(p) * p)) /
               (2.0 * q - 2.0 * p);
    };

    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        double s = intersect(q, v[k]);
        while (s <= z[k]) {
            --k;
            s = intersect(q, v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.begin() + n, kInf);
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

} // namespace

DistanceMap distance_transform(const ContourSet& seeds, int width, int height) {
    if (seeds.empty()) throw InvalidArgument("distance_transform: empty seed set");
    if (width < 1 || height < 1)
        throw InvalidArgument("distance_transform: degenerate dimensions");

    std::vector<double> sq(static_cast<size_t>(width) * height, kInf);
    for (const auto& [r, c] : seeds.points) {
        if (r < 0 || r >= height || c < 0 || c >= width)
            throw InvalidArgument("distance_transform: seed outside the raster");
        sq[static_cast<size_t>(r) * width + c] = 0.0;
    }

    const int n_max = std::max(width, height);
    std::vector<double> f(n_max), d(n_max), z(n_max + 1);
    std::vector<int> v(n_max);

    // Columns first, then rows; squared distances stay integral so the
    // result matches brute force exactly.
    for (int x = 0; x < width; ++x) {
        for (int y = 0; y < height; ++y) f[y] = sq[static_cast<size_t>(y) * width + x];
        dt1d(f, d, height, v, z);
        for (int y = 0; y < height; ++y) sq[static_cast<size_t>(y) * width + x] = d[y];
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) f[x] = sq[static_cast<size_t>(y) * width + x];
        dt1d(f, d, width, v, z);
        for (int x = 0; x < width; ++x) sq[static_cast<size_t>(y) * width + x] = d[x];
    }

    DistanceMap map;
    map.width = width;
    map.height = height;
    map.data.resize(sq.size());
    for (size_t i = 0; i < sq.size(); ++i) map.data[i] = std::sqrt(sq[i]);
    return map;
}

} // namespace segeval
