#include "sortforge/imgcore/io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace sortforge::imgcore {

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    std::string tail = s.substr(s.size() - suffix.size());
    for (auto& c : tail) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return tail == suffix;
}

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw std::runtime_error("cannot open file: " + path);
    return f;
}

struct PngData {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (gray8), 2 (gray16 stored big-endian), 3, 4
    int bit_depth = 8;
    std::vector<std::uint8_t> bytes;  // row-major packed
};

PngData read_png(const std::string& path, bool keep_gray16) {
    FilePtr f = open_file(path, "rb");
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw std::runtime_error("png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw std::runtime_error("png: failed to read " + path);
    }
    png_init_io(png, f.get());
    png_read_info(png, info);

    png_byte color = png_get_color_type(png, info);
    png_byte depth = png_get_bit_depth(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);

    const bool gray16 = keep_gray16 && color == PNG_COLOR_TYPE_GRAY && depth == 16;
    if (depth == 16 && !gray16) png_set_strip_16(png);

    png_read_update_info(png, info);

    PngData out;
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = gray16 ? 16 : 8;
    out.channels = static_cast<int>(png_get_channels(png, info));

    const std::size_t stride = png_get_rowbytes(png, info);
    out.bytes.resize(stride * out.height);
    std::vector<png_bytep> rows(out.height);
    for (int y = 0; y < out.height; ++y) rows[y] = out.bytes.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void write_png(const std::string& path, int width, int height, int color_type, int bit_depth,
               const std::uint8_t* bytes, std::size_t stride) {
    FilePtr f = open_file(path, "wb");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw std::runtime_error("png: out of memory");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw std::runtime_error("png: out of memory");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw std::runtime_error("png: failed to write " + path);
    }
    png_init_io(png, f.get());
    png_set_IHDR(png, info, width, height, bit_depth, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(height);
    for (int y = 0; y < height; ++y)
        rows[y] = const_cast<png_bytep>(bytes + stride * y);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

int ppm_next_int(std::istream& in) {
    // Skips whitespace and '#' comments.
    while (true) {
        const int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v = -1;
    in >> v;
    if (!in) throw std::runtime_error("ppm: malformed header");
    return v;
}

RasterImage read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '6')
        throw std::runtime_error("ppm: not a binary P6 file: " + path);
    const int w = ppm_next_int(in);
    const int h = ppm_next_int(in);
    const int maxval = ppm_next_int(in);
    if (maxval != 255) throw std::runtime_error("ppm: only maxval 255 is supported");
    in.get();  // single whitespace after maxval
    RasterImage img(w, h, 3);
    in.read(reinterpret_cast<char*>(img.data().data()),
            static_cast<std::streamsize>(img.data().size()));
    if (!in) throw std::runtime_error("ppm: truncated pixel data: " + path);
    return img;
}

void write_ppm(const std::string& path, const RasterImage& img) {
    if (img.channels() != 3)
        throw std::invalid_argument("ppm: only 3-channel images can be written as P6");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for write: " + path);
    out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data().data()),
              static_cast<std::streamsize>(img.data().size()));
    if (!out) throw std::runtime_error("ppm: write failed: " + path);
}

} // namespace

RasterImage read_image(const std::string& path) {
    if (has_suffix(path, ".ppm")) return read_ppm(path);
    PngData png = read_png(path, false);
    if (png.channels == 3 || png.channels == 4) {
        RasterImage img(png.width, png.height, png.channels);
        std::memcpy(img.data().data(), png.bytes.data(), img.data().size());
        return img;
    }
    if (png.channels == 1) {
        RasterImage img(png.width, png.height, 3);
        for (int y = 0; y < png.height; ++y)
            for (int x = 0; x < png.width; ++x) {
                const std::uint8_t g = png.bytes[static_cast<std::size_t>(y) * png.width + x];
                img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = g;
            }
        return img;
    }
    if (png.channels == 2) {
        // gray + alpha: drop alpha
        RasterImage img(png.width, png.height, 3);
        for (int y = 0; y < png.height; ++y)
            for (int x = 0; x < png.width; ++x) {
                const std::uint8_t g = png.bytes[(static_cast<std::size_t>(y) * png.width + x) * 2];
                img.at(x, y, 0) = img.at(x, y, 1) = img.at(x, y, 2) = g;
            }
        return img;
    }
    throw std::runtime_error("png: unsupported channel layout in " + path);
}

void write_image(const std::string& path, const RasterImage& img) {
    if (has_suffix(path, ".ppm")) {
        write_ppm(path, img);
        return;
    }
    const int color = img.channels() == 4 ? PNG_COLOR_TYPE_RGBA : PNG_COLOR_TYPE_RGB;
    write_png(path, img.width(), img.height(), color, 8, img.data().data(),
              static_cast<std::size_t>(img.width()) * img.channels());
}

BinaryMask read_mask(const std::string& path) {
    PngData png = read_png(path, false);
    if (png.channels != 1)
        throw std::runtime_error("mask png must be single-channel: " + path);
    BinaryMask mask(png.width, png.height);
    for (int y = 0; y < png.height; ++y)
        for (int x = 0; x < png.width; ++x)
            mask.set(x, y, png.bytes[static_cast<std::size_t>(y) * png.width + x] >= 128);
    return mask;
}

void write_mask(const std::string& path, const BinaryMask& mask) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(mask.width()) * mask.height());
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            bytes[static_cast<std::size_t>(y) * mask.width() + x] = mask.get(x, y) ? 255 : 0;
    write_png(path, mask.width(), mask.height(), PNG_COLOR_TYPE_GRAY, 8, bytes.data(),
              static_cast<std::size_t>(mask.width()));
}

Gray16 read_gray16(const std::string& path) {
    PngData png = read_png(path, true);
    if (png.channels != 1 || png.bit_depth != 16)
        throw std::runtime_error("expected 16-bit single-channel png: " + path);
    Gray16 out;
    out.width = png.width;
    out.height = png.height;
    out.samples.resize(static_cast<std::size_t>(png.width) * png.height);
    // PNG stores 16-bit samples big-endian.
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = static_cast<std::uint16_t>((png.bytes[2 * i] << 8) | png.bytes[2 * i + 1]);
    return out;
}

void write_gray16(const std::string& path, const Gray16& img) {
    if (img.samples.size() != static_cast<std::size_t>(img.width) * img.height)
        throw std::invalid_argument("gray16: sample count does not match dimensions");
    std::vector<std::uint8_t> bytes(img.samples.size() * 2);
    for (std::size_t i = 0; i < img.samples.size(); ++i) {
        bytes[2 * i] = static_cast<std::uint8_t>(img.samples[i] >> 8);
        bytes[2 * i + 1] = static_cast<std::uint8_t>(img.samples[i] & 0xff);
    }
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 16, bytes.data(),
              static_cast<std::size_t>(img.width) * 2);
}

} // namespace sortforge::imgcore
