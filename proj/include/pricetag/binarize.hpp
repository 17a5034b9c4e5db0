#pragma once

#include "pricetag/image.hpp"

namespace pricetag {

enum class Polarity { DarkText, LightText };

struct NiblackParams {
    double k = -0.2;
    int win_w = 25;  // odd, >= 3
    int win_h = 25;  // odd, >= 3
    Polarity polarity = Polarity::DarkText;
};

// Expected glyph size in the working image, used to shape the Niblack
// window and downstream clustering thresholds.
struct DigitSizeEstimate {
    int digit_h = 0;
    int digit_w = 0;
};

// Window shape from the expected digit size: height a little more than one
// digit, width several digits. Results forced odd (n -> n+1 when even).
std::pair<int, int> derive_window(const DigitSizeEstimate& est);  // (win_w, win_h)

// Niblack local threshold T = mean + k*stddev over the window centered at
// each pixel, window clamped to image bounds. Dark-text: foreground iff
// pixel < T (strict, so flat regions go to background).
BinaryImage niblack(const GrayImage& img, const NiblackParams& p);

}  // namespace pricetag
