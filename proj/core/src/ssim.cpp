#include "segeval/structural.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "segeval/image_io.hpp"
#include "segeval/imgproc.hpp"

namespace segeval {

SsimConfig SsimConfig::defaults() {
    SsimConfig cfg;
    // Established five-scale exponents, normalized so they sum to 1.
    const double raw[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
    const double sum = raw[0] + raw[1] + raw[2] + raw[3] + raw[4];
    cfg.weights.assign(raw, raw + 5);
    for (double& w : cfg.weights) w /= sum;
    return cfg;
}

SsimConfig SsimConfig::with_range(double k1, double k2, double range) {
    SsimConfig cfg = defaults();
    cfg.dynamic_range = range;
    cfg.c1 = (k1 * range) * (k1 * range);
    cfg.c2 = (k2 * range) * (k2 * range);
    cfg.c3 = cfg.c2 / 2.0;
    return cfg;
}

void SsimConfig::validate() const {
    if (scales < 1) throw InvalidArgument("SsimConfig: scales must be >= 1");
    if (static_cast<int>(weights.size()) != scales)
        throw InvalidArgument("SsimConfig: weights length must equal scales");
    const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
        throw InvalidArgument("SsimConfig: weights must sum to 1");
    if (window < 3 || window % 2 == 0)
        throw InvalidArgument("SsimConfig: window must be odd and >= 3");
    if (!(window_sigma > 0.0)) throw InvalidArgument("SsimConfig: window_sigma must be > 0");
    if (!(c1 > 0.0 && c2 > 0.0 && c3 > 0.0))
        throw InvalidArgument("SsimConfig: stabilizers must be > 0");
    if (!(dynamic_range > 0.0))
        throw InvalidArgument("SsimConfig: dynamic range must be > 0");
}

namespace {

std::vector<double> window_kernel(int size, double sigma) {
    const int radius = size / 2;
    std::vector<double> k(size);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

// Same-size separable filtering with replicate borders.
std::vector<double> filter_same(const std::vector<double>& src, int w, int h,
                                const std::vector<double>& kernel) {
    const int radius = static_cast<int>(kernel.size()) / 2;
    std::vector<double> tmp(src.size()), out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * src[static_cast<size_t>(y) * w + std::clamp(x + k, 0, w - 1)];
            tmp[static_cast<size_t>(y) * w + x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp[static_cast<size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
            out[static_cast<size_t>(y) * w + x] = acc;
        }
    }
    return out;
}

struct ScaleStats {
    GrayImage map;          // full l*c*s, clamped to [0,1] for storage
    double mean_full = 0.0; // mean of the stored map
    double mean_cs = 0.0;   // mean contrast*structure (structure clamped at 0)
    std::int64_t clamps = 0;
};

ScaleStats ssim_scale(const GrayImage& a, const GrayImage& b, const SsimConfig& cfg) {
    const int w = a.width, h = a.height;
    const size_t n = a.data.size();
    const std::vector<double> kernel = window_kernel(cfg.window, cfg.window_sigma);

    std::vector<double> aa(n), bb(n), ab(n);
    for (size_t i = 0; i < n; ++i) {
        aa[i] = a.data[i] * a.data[i];
        bb[i] = b.data[i] * b.data[i];
        ab[i] = a.data[i] * b.data[i];
    }
    const std::vector<double> mu_a = filter_same(a.data, w, h, kernel);
    const std::vector<double> mu_b = filter_same(b.data, w, h, kernel);
    const std::vector<double> e_aa = filter_same(aa, w, h, kernel);
    const std::vector<double> e_bb = filter_same(bb, w, h, kernel);
    const std::vector<double> e_ab = filter_same(ab, w, h, kernel);

    ScaleStats out;
    out.map = GrayImage(w, h);
    double sum_full = 0.0, sum_cs = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double ma = mu_a[i], mb = mu_b[i];
        const double va = std::max(0.0, e_aa[i] - ma * ma);
        const double vb = std::max(0.0, e_bb[i] - mb * mb);
        const double cov = e_ab[i] - ma * mb;
        const double sa = std::sqrt(va), sb = std::sqrt(vb);

        const double lum = (2.0 * ma * mb + cfg.c1) / (ma * ma + mb * mb + cfg.c1);
        const double con = (2.0 * sa * sb + cfg.c2) / (va + vb + cfg.c2);
        double str = (cov + cfg.c3) / (sa * sb + cfg.c3);
        if (str < 0.0) {
            str = 0.0;
            ++out.clamps;
        }
        const double cs = con * str;
        const double full = lum * cs;
        out.map.data[i] = std::clamp(full, 0.0, 1.0);
        sum_full += out.map.data[i];
        sum_cs += cs;
    }
    out.mean_full = sum_full / static_cast<double>(n);
    out.mean_cs = sum_cs / static_cast<double>(n);
    return out;
}

void check_pair(const GrayImage& a, const GrayImage& b, const SsimConfig& cfg) {
    cfg.validate();
    if (a.width != b.width || a.height != b.height)
        throw InvalidArgument("ssim: dimension mismatch");
    if (a.width < cfg.window || a.height < cfg.window)
        throw InvalidArgument("ssim: image smaller than the window");
}

} // namespace

SsimMapResult ssim_map(const GrayImage& a, const GrayImage& b, const SsimConfig& cfg) {
    check_pair(a, b, cfg);
    ScaleStats s = ssim_scale(a, b, cfg);
    return {s.mean_full, std::move(s.map), s.clamps};
}

int max_scales_for(int width, int height, int window) {
    const int dim = std::min(width, height);
    int m = 0;
    while (dim >= window * (1 << m)) ++m;
    return m;
}

SsimResult msssim(const GrayImage& a, const GrayImage& b, const SsimConfig& cfg) {
    check_pair(a, b, cfg);
    const int needed = cfg.window * (1 << (cfg.scales - 1));
    if (std::min(a.width, a.height) < needed) {
        throw InvalidArgument(
            "msssim: image too small for " + std::to_string(cfg.scales) +
            " scales; the largest valid scale count for " + std::to_string(a.width) +
            "x" + std::to_string(a.height) + " is " +
            std::to_string(max_scales_for(a.width, a.height, cfg.window)));
    }

    SsimResult result;
    GrayImage ca = a, cb = b;
    for (int j = 0; j < cfg.scales; ++j) {
        ScaleStats s = ssim_scale(ca, cb, cfg);
        const bool last = j + 1 == cfg.scales;
        // Contrast*structure below the coarsest scale; the coarsest scale
        // contributes the full term including luminance.
        result.scale_values.push_back(last ? s.mean_full : s.mean_cs);
        result.scale_ssim.push_back(s.mean_full);
        result.maps.push_back(std::move(s.map));
        result.structure_clamps += s.clamps;
        if (!last) {
            ca = gaussian_downsample2x(ca);
            cb = gaussian_downsample2x(cb);
        }
    }

    double product = 1.0;
    for (int j = 0; j < cfg.scales; ++j)
        product *= std::pow(std::max(0.0, result.scale_values[static_cast<size_t>(j)]),
                            cfg.weights[static_cast<size_t>(j)]);
    result.msssim = product;
    return result;
}

std::array<std::uint8_t, 3> jet_rgb(double v) {
    const double x = std::clamp(v, 0.0, 1.0);
    auto channel = [](double c) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0));
    };
    return {channel(1.5 - std::abs(4.0 * x - 3.0)),
            channel(1.5 - std::abs(4.0 * x - 2.0)),
            channel(1.5 - std::abs(4.0 * x - 1.0))};
}

void quality_map_png(const SsimResult& result, int scale,
                     const std::filesystem::path& path) {
    if (scale < 1 || scale > static_cast<int>(result.maps.size()))
        throw InvalidArgument("quality_map_png: scale index out of range");
    const GrayImage& map = result.maps[static_cast<size_t>(scale - 1)];
    RgbImage rgb(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const auto color = jet_rgb(map.at(y, x));
            std::uint8_t* px = rgb.pixel(y, x);
            px[0] = color[0];
            px[1] = color[1];
            px[2] = color[2];
        }
    }
    write_png(rgb, path);
}

} // namespace segeval
