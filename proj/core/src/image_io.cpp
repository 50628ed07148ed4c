#include "segeval/image_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace segeval {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& reason) {
    throw IoError(path.string() + ": " + reason);
}

GrayImage load_png_gray(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) fail(path, "unreadable file");

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "corrupt or truncated PNG");
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported color format (expected 8-bit grayscale)");
    }
    if (bit_depth != 8) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "unsupported bit depth " + std::to_string(bit_depth) +
                       " (expected 8)");
    }

    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    if (width < 1 || height < 1) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(path, "degenerate dimensions");
    }

    std::vector<std::uint8_t> raw(static_cast<size_t>(width) * height);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = raw.data() + static_cast<size_t>(y) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(width, height);
    for (size_t i = 0; i < raw.size(); ++i)
        img.data[i] = raw[i] / 255.0;
    return img;
}

// P2 (ASCII) or P5 (binary), maxval 255.
GrayImage load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "unreadable file");

    auto next_token = [&in]() {
        std::string tok;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') { // comment to end of line
                while ((c = in.get()) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) break;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };

    const std::string magic = next_token();
    const bool ascii = magic == "P2";
    if (!ascii && magic != "P5") fail(path, "not a P2/P5 PGM");

    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token());
        height = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        fail(path, "malformed PGM header");
    }
    if (width < 1 || height < 1) fail(path, "degenerate dimensions");
    if (maxval != 255)
        fail(path, "unsupported bit depth (maxval " + std::to_string(maxval) +
                       ", expected 255)");

    GrayImage img(width, height);
    const size_t n = img.data.size();
    if (ascii) {
        for (size_t i = 0; i < n; ++i) {
            int v;
            if (!(in >> v)) fail(path, "truncated P2 data");
            if (v < 0 || v > 255) fail(path, "P2 sample out of range");
            img.data[i] = v / 255.0;
        }
    } else {
        std::vector<std::uint8_t> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
        if (static_cast<size_t>(in.gcount()) != n) fail(path, "truncated P5 data");
        for (size_t i = 0; i < n; ++i) img.data[i] = raw[i] / 255.0;
    }
    return img;
}

void write_png_bytes(const std::filesystem::path& path, int width, int height,
                     int color_type, const std::uint8_t* bytes, size_t row_bytes) {
    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) fail(path, "cannot open for writing");

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail(path, "libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail(path, "libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail(path, "PNG write failed");
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
                 8, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(bytes + static_cast<size_t>(y) * row_bytes);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

bool has_png_magic(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "unreadable file");
    std::array<unsigned char, 8> magic{};
    in.read(reinterpret_cast<char*>(magic.data()), 8);
    static const std::array<unsigned char, 8> png_sig = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    return in.gcount() == 8 && magic == png_sig;
}

} // namespace

GrayImage load_gray(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) fail(path, "unreadable file");
    if (has_png_magic(path)) return load_png_gray(path);
    return load_pgm(path);
}

BinaryMask load_mask(const std::filesystem::path& path, double threshold) {
    return binarize(load_gray(path), threshold);
}

RgbImage::RgbImage(int w, int h)
    : width(w), height(h), data(3 * static_cast<size_t>(w) * h, 0) {
    if (w <= 0 || h <= 0) throw InvalidArgument("RgbImage: non-positive dimensions");
}

void write_png(const GrayImage& img, const std::filesystem::path& path) {
    std::vector<std::uint8_t> raw(img.data.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(img.data[i]);
    write_png_bytes(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, raw.data(),
                    static_cast<size_t>(img.width));
}

void write_png(const BinaryMask& mask, const std::filesystem::path& path) {
    std::vector<std::uint8_t> raw(mask.data.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = mask.data[i] ? 255 : 0;
    write_png_bytes(path, mask.width, mask.height, PNG_COLOR_TYPE_GRAY, raw.data(),
                    static_cast<size_t>(mask.width));
}

void write_png(const RgbImage& img, const std::filesystem::path& path) {
    write_png_bytes(path, img.width, img.height, PNG_COLOR_TYPE_RGB, img.data.data(),
                    3 * static_cast<size_t>(img.width));
}

namespace {

void write_pgm_impl(const std::filesystem::path& path, int width, int height,
                    const std::vector<std::uint8_t>& raw, bool ascii) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << (ascii ? "P2" : "P5") << "\n" << width << " " << height << "\n255\n";
    if (ascii) {
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                out << static_cast<int>(raw[static_cast<size_t>(y) * width + x]);
                out << (x + 1 == width ? '\n' : ' ');
            }
        }
    } else {
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    }
    if (!out) fail(path, "write failed");
}

} // namespace

void write_pgm(const GrayImage& img, const std::filesystem::path& path, bool ascii) {
    std::vector<std::uint8_t> raw(img.data.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = quantize(img.data[i]);
    write_pgm_impl(path, img.width, img.height, raw, ascii);
}

void write_pgm(const BinaryMask& mask, const std::filesystem::path& path, bool ascii) {
    std::vector<std::uint8_t> raw(mask.data.size());
    for (size_t i = 0; i < raw.size(); ++i) raw[i] = mask.data[i] ? 255 : 0;
    write_pgm_impl(path, mask.width, mask.height, raw, ascii);
}

} // namespace segeval
