#pragma once

#include <string>

#include "pricetag/image.hpp"

namespace pricetag {

// Binary PGM (P5, maxval 255) and PPM (P6). BinaryImage serializes as PGM
// with foreground = 0 (ink) and background = 255.

void save_pgm(const GrayImage& img, const std::string& path);
void save_pgm(const BinaryImage& img, const std::string& path);
void save_ppm(const ColorImage& img, const std::string& path);

GrayImage load_pgm(const std::string& path);
ColorImage load_ppm(const std::string& path);

// Loads either P5 or P6 by magic, promoting gray to color.
ColorImage load_image(const std::string& path);

}  // namespace pricetag
