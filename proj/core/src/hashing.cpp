#include "segeval/structural.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>

#include "segeval/imgproc.hpp"

namespace segeval {

namespace {

std::uint64_t pack_bits(const std::vector<bool>& bits) {
    std::uint64_t out = 0;
    for (size_t i = 0; i < 64; ++i)
        if (bits[i]) out |= std::uint64_t{1} << (63 - i);
    return out;
}

// Middle order statistic; mean of the two middle values for even counts.
double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::uint64_t ahash_bits(const GrayImage& img) {
    const GrayImage r = resize(img, 8, 8, ResizeMode::Bilinear);
    double mean = 0.0;
    for (double v : r.data) mean += v;
    mean /= 64.0;
    std::vector<bool> bits(64);
    for (size_t i = 0; i < 64; ++i) bits[i] = r.data[i] > mean;
    return pack_bits(bits);
}

std::uint64_t dhash_bits(const GrayImage& img) {
    const GrayImage r = resize(img, 9, 8, ResizeMode::Bilinear);
    std::vector<bool> bits(64);
    for (int row = 0; row < 8; ++row)
        for (int col = 0; col < 8; ++col)
            bits[static_cast<size_t>(row) * 8 + col] = r.at(row, col) < r.at(row, col + 1);
    return pack_bits(bits);
}

std::uint64_t phash_bits(const GrayImage& img) {
    const GrayImage r = resize(img, 32, 32, ResizeMode::Bilinear);
    const RealMatrix d = dct2(r);
    // Row-major scan of the 8x8 low-frequency block with DC dropped;
    // coefficient (0,8) completes the 64.
    std::vector<double> coeffs;
    coeffs.reserve(64);
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v)
            if (u != 0 || v != 0) coeffs.push_back(d.at(u, v));
    coeffs.push_back(d.at(0, 8));

    const double med = median_of(coeffs);
    std::vector<bool> bits(64);
    for (size_t i = 0; i < 64; ++i) bits[i] = coeffs[i] > med;
    return pack_bits(bits);
}

std::uint64_t whash_bits(const GrayImage& img) {
    const GrayImage r = resize(img, 8, 8, ResizeMode::Bilinear);
    const HaarPyramid pyr = haar_dwt2(r, 3);

    // Fixed layout: approx (the DC slot, index 0), then detail bands from
    // coarsest to finest, each row-major detail_x/detail_y/detail_xy.
    std::vector<double> coeffs;
    coeffs.reserve(64);
    coeffs.push_back(pyr.approx.at(0, 0));
    for (int level = 2; level >= 0; --level) {
        const HaarLevel& hl = pyr.levels[static_cast<size_t>(level)];
        for (const RealMatrix* band : {&hl.detail_x, &hl.detail_y, &hl.detail_xy})
            coeffs.insert(coeffs.end(), band->data.begin(), band->data.end());
    }

    // Median over the 63 non-DC coefficients; the DC slot always emits 0.
    const double med = median_of({coeffs.begin() + 1, coeffs.end()});
    std::vector<bool> bits(64);
    bits[0] = false;
    for (size_t i = 1; i < 64; ++i) bits[i] = coeffs[i] > med;
    return pack_bits(bits);
}

} // namespace

const char* hash_kind_name(HashKind kind) {
    switch (kind) {
        case HashKind::AHash: return "aHash";
        case HashKind::DHash: return "dHash";
        case HashKind::PHash: return "pHash";
        case HashKind::WHash: return "wHash";
    }
    return "?";
}

std::string HashCode::hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(bits));
    return buf;
}

HashCode hash_image(const GrayImage& img, HashKind kind) {
    switch (kind) {
        case HashKind::AHash: return {ahash_bits(img), kind};
        case HashKind::DHash: return {dhash_bits(img), kind};
        case HashKind::PHash: return {phash_bits(img), kind};
        case HashKind::WHash: return {whash_bits(img), kind};
    }
    throw InvalidArgument("hash_image: unknown kind");
}

HashCode hash_image(const BinaryMask& mask, HashKind kind) {
    return hash_image(to_gray(mask), kind);
}

int hamming_distance(const HashCode& a, const HashCode& b) {
    return std::popcount(a.bits ^ b.bits);
}

HashScores ahs(const BinaryMask& gt, const BinaryMask& pred) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw InvalidArgument("ahs: dimension mismatch");
    const GrayImage g = to_gray(gt), p = to_gray(pred);

    HashScores s;
    s.ahash = hamming_distance(hash_image(g, HashKind::AHash), hash_image(p, HashKind::AHash));
    s.dhash = hamming_distance(hash_image(g, HashKind::DHash), hash_image(p, HashKind::DHash));
    s.phash = hamming_distance(hash_image(g, HashKind::PHash), hash_image(p, HashKind::PHash));
    s.whash = hamming_distance(hash_image(g, HashKind::WHash), hash_image(p, HashKind::WHash));
    s.ahs = (s.ahash + s.dhash + s.phash + s.whash) / 4.0;
    s.ahs_normalized = s.ahs / 64.0;
    return s;
}

} // namespace segeval
