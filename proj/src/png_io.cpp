// SPDX-License-Identifier: Apache-2.0

#include <png.h>

#include <cstdio>
#include <memory>
#include <stdexcept>

#include "msp/image.hpp"

namespace msp {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw std::runtime_error(what + ": " + path);
}

}  // namespace

void write_png_rgb(const std::string& path, const RgbImage& img) {
    if (img.width <= 0 || img.height <= 0 ||
        img.pixels.size() != size_t(img.width) * size_t(img.height) * 3)
        throw std::invalid_argument("write_png_rgb: bad image buffer");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("write_png_rgb: cannot open", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail("write_png_rgb: libpng init failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("write_png_rgb: libpng error", path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_bytep> rows(size_t(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[size_t(y)] = const_cast<png_bytep>(&img.pixels[size_t(y) * size_t(img.width) * 3]);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

RgbImage read_png_rgb(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("read_png_rgb: cannot open", path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_rgb: libpng init failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_rgb: libpng error", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    // Normalize any color type to 8-bit RGB.
    png_set_expand(png);
    if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
    if (png_get_color_type(png, info) & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(png, info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    RgbImage img;
    img.width = int(png_get_image_width(png, info));
    img.height = int(png_get_image_height(png, info));
    if (png_get_rowbytes(png, info) != size_t(img.width) * 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_rgb: unexpected row size", path);
    }
    img.pixels.resize(size_t(img.width) * size_t(img.height) * 3);
    std::vector<png_bytep> rows(size_t(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[size_t(y)] = &img.pixels[size_t(y) * size_t(img.width) * 3];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

void write_png_indexed(const std::string& path, const IndexedImage& img) {
    if (img.width <= 0 || img.height <= 0 ||
        img.indices.size() != size_t(img.width) * size_t(img.height))
        throw std::invalid_argument("write_png_indexed: bad index buffer");
    if (img.palette.empty() || img.palette.size() > 256)
        throw std::invalid_argument("write_png_indexed: palette size must be 1..256");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("write_png_indexed: cannot open", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        fail("write_png_indexed: libpng init failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("write_png_indexed: libpng error", path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, png_uint_32(img.width), png_uint_32(img.height), 8,
                 PNG_COLOR_TYPE_PALETTE, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_color> pal(img.palette.size());
    for (size_t i = 0; i < pal.size(); ++i)
        pal[i] = {img.palette[i].r, img.palette[i].g, img.palette[i].b};
    png_set_PLTE(png, info, pal.data(), int(pal.size()));
    png_write_info(png, info);
    std::vector<png_bytep> rows(size_t(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[size_t(y)] = const_cast<png_bytep>(&img.indices[size_t(y) * size_t(img.width)]);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

IndexedImage read_png_indexed(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("read_png_indexed: cannot open", path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_indexed: libpng init failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_indexed: libpng error", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);
    const png_byte color_type = png_get_color_type(png, info);
    IndexedImage img;
    img.width = int(png_get_image_width(png, info));
    img.height = int(png_get_image_height(png, info));

    if (color_type == PNG_COLOR_TYPE_PALETTE) {
        if (png_get_bit_depth(png, info) < 8) png_set_packing(png);
        png_read_update_info(png, info);
        png_colorp pal = nullptr;
        int npal = 0;
        png_get_PLTE(png, info, &pal, &npal);
        img.palette.resize(size_t(npal));
        for (int i = 0; i < npal; ++i) img.palette[size_t(i)] = {pal[i].red, pal[i].green, pal[i].blue};
    } else if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) == 8) {
        // Grayscale labels: value is the index.
        png_read_update_info(png, info);
        img.palette.resize(256);
        for (int i = 0; i < 256; ++i)
            img.palette[size_t(i)] = {uint8_t(i), uint8_t(i), uint8_t(i)};
    } else {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_indexed: not a palette or 8-bit gray PNG", path);
    }

    if (png_get_rowbytes(png, info) != size_t(img.width)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("read_png_indexed: unexpected row size", path);
    }
    img.indices.resize(size_t(img.width) * size_t(img.height));
    std::vector<png_bytep> rows(size_t(img.height));
    for (int y = 0; y < img.height; ++y)
        rows[size_t(y)] = &img.indices[size_t(y) * size_t(img.width)];
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return img;
}

TensorF rgb_to_tensor(const RgbImage& img) {
    TensorF t({3, img.height, img.width});
    const int64_t hw = int64_t(img.height) * img.width;
    for (int64_t p = 0; p < hw; ++p)
        for (int64_t c = 0; c < 3; ++c) t[c * hw + p] = u8_to_unit(img.pixels[size_t(p * 3 + c)]);
    return t;
}

RgbImage tensor_to_rgb(const TensorF& t) {
    if (t.ndim() != 3 || t.dim(0) != 3) throw std::invalid_argument("tensor_to_rgb: want 3xHxW");
    RgbImage img;
    img.height = int(t.dim(1));
    img.width = int(t.dim(2));
    img.pixels.resize(size_t(img.width) * size_t(img.height) * 3);
    const int64_t hw = int64_t(img.height) * img.width;
    for (int64_t p = 0; p < hw; ++p)
        for (int64_t c = 0; c < 3; ++c) img.pixels[size_t(p * 3 + c)] = unit_to_u8(t[c * hw + p]);
    return img;
}

}  // namespace msp
