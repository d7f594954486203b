// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "msp/tensor.hpp"

namespace msp {

// Pixel convention: float images are CHW in [-1, 1]; 0xFF maps to +1.

struct Rgb8 {
    uint8_t r = 0, g = 0, b = 0;
};

struct IndexedImage {
    int width = 0, height = 0;
    std::vector<uint8_t> indices;      // height * width
    std::vector<Rgb8> palette;
};

struct RgbImage {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;       // height * width * 3
};

void write_png_rgb(const std::string& path, const RgbImage& img);
RgbImage read_png_rgb(const std::string& path);

void write_png_indexed(const std::string& path, const IndexedImage& img);
IndexedImage read_png_indexed(const std::string& path);

TensorF rgb_to_tensor(const RgbImage& img);            // 3 x H x W in [-1, 1]
RgbImage tensor_to_rgb(const TensorF& t);              // clamps to [-1, 1]

inline float u8_to_unit(uint8_t v) { return static_cast<float>(v) / 127.5f - 1.0f; }
inline uint8_t unit_to_u8(float v) {
    float x = (v < -1.0f ? -1.0f : (v > 1.0f ? 1.0f : v));
    const int q = static_cast<int>((x + 1.0f) * 127.5f + 0.5f);
    return static_cast<uint8_t>(q < 0 ? 0 : (q > 255 ? 255 : q));
}

}  // namespace msp
