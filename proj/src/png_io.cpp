#include "snapcube/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <nlohmann/json.hpp>

namespace snapcube {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.string().c_str(), "rb"));
    if (!fp) throw IoError("cannot open PNG for reading: " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("PNG decode failed: " + path.string());
    }

    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_uint_32 w = png_get_image_width(png, info);
    png_uint_32 h = png_get_image_height(png, info);
    int bit_depth = png_get_bit_depth(png, info);
    int color_type = png_get_color_type(png, info);

    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (bit_depth == 16) png_set_swap(png);  // wire is big-endian
    png_read_update_info(png, info);

    bit_depth = png_get_bit_depth(png, info);
    int channels = png_get_channels(png, info);
    if (channels != 1 && channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG channel count in " + path.string());
    }

    Image img(static_cast<int>(w), static_cast<int>(h), channels);
    size_t rowbytes = png_get_rowbytes(png, info);
    std::vector<unsigned char> row(rowbytes);
    const float scale8 = 1.0f / 255.0f;
    const float scale16 = 1.0f / 65535.0f;
    for (png_uint_32 y = 0; y < h; ++y) {
        png_read_row(png, row.data(), nullptr);
        if (bit_depth == 16) {
            const uint16_t* p = reinterpret_cast<const uint16_t*>(row.data());
            for (png_uint_32 x = 0; x < w * static_cast<png_uint_32>(channels); ++x) {
                img.pixels[static_cast<size_t>(y) * w * channels + x] = p[x] * scale16;
            }
        } else {
            for (png_uint_32 x = 0; x < w * static_cast<png_uint_32>(channels); ++x) {
                img.pixels[static_cast<size_t>(y) * w * channels + x] = row[x] * scale8;
            }
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png(const Image& img, const std::filesystem::path& path, int bit_depth) {
    if (bit_depth != 8 && bit_depth != 16) throw ConfigError("PNG bit depth must be 8 or 16");
    if (img.channels != 1 && img.channels != 3) throw ConfigError("PNG write supports 1 or 3 channels");

    FilePtr fp(std::fopen(path.string().c_str(), "wb"));
    if (!fp) throw IoError("cannot open PNG for writing: " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng info init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encode failed: " + path.string());
    }

    png_init_io(png, fp.get());
    int color_type = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width, img.height, bit_depth, color_type,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    if (bit_depth == 16) png_set_swap(png);

    auto quantize8 = [](float v) -> unsigned char {
        float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        return static_cast<unsigned char>(c * 255.0f + 0.5f);
    };
    auto quantize16 = [](float v) -> uint16_t {
        float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
        return static_cast<uint16_t>(c * 65535.0f + 0.5f);
    };

    size_t row_values = static_cast<size_t>(img.width) * img.channels;
    if (bit_depth == 8) {
        std::vector<unsigned char> row(row_values);
        for (int y = 0; y < img.height; ++y) {
            for (size_t x = 0; x < row_values; ++x) {
                row[x] = quantize8(img.pixels[static_cast<size_t>(y) * row_values + x]);
            }
            png_write_row(png, row.data());
        }
    } else {
        std::vector<uint16_t> row(row_values);
        for (int y = 0; y < img.height; ++y) {
            for (size_t x = 0; x < row_values; ++x) {
                row[x] = quantize16(img.pixels[static_cast<size_t>(y) * row_values + x]);
            }
            png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
        }
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Image read_mask_png(const std::filesystem::path& path) {
    Image img = read_png(path);
    Image mask(img.width, img.height, 1);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            mask.at(x, y) = img.at(x, y, 0) >= 0.5f ? 1.0f : 0.0f;
        }
    }
    return mask;
}

Image read_raw_float(const std::filesystem::path& path) {
    std::filesystem::path sidecar = path;
    sidecar += ".json";
    std::ifstream meta(sidecar);
    if (!meta) throw IoError("missing raw sidecar: " + sidecar.string());
    nlohmann::json j;
    meta >> j;
    int w = j.at("width").get<int>();
    int h = j.at("height").get<int>();

    Image img(w, h, 1);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open raw float file: " + path.string());
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size() * sizeof(float))) {
        throw IoError("raw float file truncated: " + path.string());
    }
    return img;
}

void write_raw_float(const Image& img, const std::filesystem::path& path) {
    if (img.channels != 1) throw ConfigError("raw float write supports single channel only");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open raw float file for writing: " + path.string());
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size() * sizeof(float)));
    nlohmann::json j{{"width", img.width}, {"height", img.height}};
    std::filesystem::path sidecar = path;
    sidecar += ".json";
    std::ofstream meta(sidecar);
    meta << j.dump() << "\n";
}

}  // namespace snapcube
