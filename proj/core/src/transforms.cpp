#include "segeval/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace segeval {

namespace {

constexpr double kBinomial5[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

inline int reflect_clamp(int i, int n) { return std::clamp(i, 0, n - 1); }

} // namespace

GrayImage gaussian_downsample2x(const GrayImage& img) {
    if (img.width < 2 || img.height < 2)
        throw InvalidArgument("gaussian_downsample2x: image smaller than 2x2");

    const int w = img.width, h = img.height;
    std::vector<double> tmp(img.data.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k)
                acc += kBinomial5[k + 2] * img.at(y, reflect_clamp(x + k, w));
            tmp[static_cast<size_t>(y) * w + x] = acc;
        }
    }
    const int ow = w / 2, oh = h / 2;
    GrayImage out(ow, oh);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k)
                acc += kBinomial5[k + 2] * tmp[static_cast<size_t>(reflect_clamp(2 * y + k, h)) * w + 2 * x];
            out.at(y, x) = std::clamp(acc, 0.0, 1.0);
        }
    }
    return out;
}

namespace {

// Basis C[u][i] = a(u) cos(pi (2i+1) u / 2N), a(0) = sqrt(1/N), else sqrt(2/N).
std::vector<double> dct_basis(int n) {
    std::vector<double> c(static_cast<size_t>(n) * n);
    const double a0 = std::sqrt(1.0 / n), au = std::sqrt(2.0 / n);
    for (int u = 0; u < n; ++u)
        for (int i = 0; i < n; ++i)
            c[static_cast<size_t>(u) * n + i] =
                (u == 0 ? a0 : au) *
                std::cos(std::numbers::pi * (2.0 * i + 1.0) * u / (2.0 * n));
    return c;
}

// rows: out = basis * m; cols: out = m * basis^T, applied as two passes.
RealMatrix apply_dct(const RealMatrix& m, bool inverse) {
    const int n = m.n;
    const std::vector<double> c = dct_basis(n);
    auto basis = [&c, n, inverse](int u, int i) {
        return inverse ? c[static_cast<size_t>(i) * n + u] : c[static_cast<size_t>(u) * n + i];
    };

    RealMatrix tmp(n), out(n);
    for (int u = 0; u < n; ++u)
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += basis(u, i) * m.at(i, j);
            tmp.at(u, j) = acc;
        }
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += basis(v, j) * tmp.at(u, j);
            out.at(u, v) = acc;
        }
    return out;
}

} // namespace

RealMatrix dct2(const RealMatrix& block) {
    if (block.n < 2) throw InvalidArgument("dct2: require N >= 2");
    return apply_dct(block, false);
}

RealMatrix dct2(const GrayImage& block) {
    if (block.width != block.height) throw InvalidArgument("dct2: non-square input");
    RealMatrix m(block.width);
    std::copy(block.data.begin(), block.data.end(), m.data.begin());
    return dct2(m);
}

RealMatrix idct2(const RealMatrix& coeffs) {
    if (coeffs.n < 2) throw InvalidArgument("idct2: require N >= 2");
    return apply_dct(coeffs, true);
}

namespace {

// One analysis level on the leading size x size block, in place.
void haar_level(RealMatrix& m, int size) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    std::vector<double> row(size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size / 2; ++x) {
            double a = m.at(y, 2 * x), b = m.at(y, 2 * x + 1);
            row[x] = (a + b) * inv_sqrt2;
            row[size / 2 + x] = (a - b) * inv_sqrt2;
        }
        for (int x = 0; x < size; ++x) m.at(y, x) = row[x];
    }
    std::vector<double> col(size);
    for (int x = 0; x < size; ++x) {
        for (int y = 0; y < size / 2; ++y) {
            double a = m.at(2 * y, x), b = m.at(2 * y + 1, x);
            col[y] = (a + b) * inv_sqrt2;
            col[size / 2 + y] = (a - b) * inv_sqrt2;
        }
        for (int y = 0; y < size; ++y) m.at(y, x) = col[y];
    }
}

void haar_level_inverse(RealMatrix& m, int size) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    std::vector<double> col(size);
    for (int x = 0; x < size; ++x) {
        for (int y = 0; y < size / 2; ++y) {
            double s = m.at(y, x), d = m.at(size / 2 + y, x);
            col[2 * y] = (s + d) * inv_sqrt2;
            col[2 * y + 1] = (s - d) * inv_sqrt2;
        }
        for (int y = 0; y < size; ++y) m.at(y, x) = col[y];
    }
    std::vector<double> row(size);
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size / 2; ++x) {
            double s = m.at(y, x), d = m.at(y, size / 2 + x);
            row[2 * x] = (s + d) * inv_sqrt2;
            row[2 * x + 1] = (s - d) * inv_sqrt2;
        }
        for (int x = 0; x < size; ++x) m.at(y, x) = row[x];
    }
}

RealMatrix subblock(const RealMatrix& m, int row0, int col0, int size) {
    RealMatrix out(size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) out.at(y, x) = m.at(row0 + y, col0 + x);
    return out;
}

} // namespace

HaarPyramid haar_dwt2(const RealMatrix& img, int levels) {
    if (levels < 1) throw InvalidArgument("haar_dwt2: levels must be >= 1");
    const int n = img.n;
    if (n % (1 << levels) != 0)
        throw InvalidArgument("haar_dwt2: dimensions not divisible by 2^levels");

    RealMatrix work = img;
    HaarPyramid pyr;
    int size = n;
    for (int level = 0; level < levels; ++level) {
        haar_level(work, size);
        const int half = size / 2;
        HaarLevel hl;
        hl.detail_x = subblock(work, 0, half, half);
        hl.detail_y = subblock(work, half, 0, half);
        hl.detail_xy = subblock(work, half, half, half);
        pyr.levels.push_back(std::move(hl));
        size = half;
    }
    pyr.approx = subblock(work, 0, 0, size);
    return pyr;
}

HaarPyramid haar_dwt2(const GrayImage& img, int levels) {
    if (img.width != img.height) throw InvalidArgument("haar_dwt2: non-square input");
    RealMatrix m(img.width);
    std::copy(img.data.begin(), img.data.end(), m.data.begin());
    return haar_dwt2(m, levels);
}

RealMatrix haar_idwt2(const HaarPyramid& pyramid) {
    if (pyramid.levels.empty()) throw InvalidArgument("haar_idwt2: empty pyramid");
    const int levels = static_cast<int>(pyramid.levels.size());
    const int n = pyramid.levels.front().detail_x.n * 2;

    RealMatrix work(n);
    int size = pyramid.approx.n;
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) work.at(y, x) = pyramid.approx.at(y, x);

    for (int level = levels - 1; level >= 0; --level) {
        const HaarLevel& hl = pyramid.levels[static_cast<size_t>(level)];
        const int half = hl.detail_x.n;
        for (int y = 0; y < half; ++y) {
            for (int x = 0; x < half; ++x) {
                work.at(y, half + x) = hl.detail_x.at(y, x);
                work.at(half + y, x) = hl.detail_y.at(y, x);
                work.at(half + y, half + x) = hl.detail_xy.at(y, x);
            }
        }
        haar_level_inverse(work, half * 2);
        size = half * 2;
    }
    return work;
}

} // namespace segeval
