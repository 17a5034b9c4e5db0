#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pricetag/binarize.hpp"

using namespace pricetag;

namespace {

// Direct nested-loop Niblack with identical border clamping.
BinaryImage niblack_oracle(const GrayImage& img, const NiblackParams& p) {
    BinaryImage out(img.width, img.height);
    int hw = p.win_w / 2, hh = p.win_h / 2;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            int x0 = std::max(0, x - hw), x1 = std::min(img.width, x + hw + 1);
            int y0 = std::max(0, y - hh), y1 = std::min(img.height, y + hh + 1);
            double sum = 0, sq = 0;
            int n = 0;
            for (int yy = y0; yy < y1; ++yy)
                for (int xx = x0; xx < x1; ++xx) {
                    double v = img.at(xx, yy);
                    sum += v;
                    sq += v * v;
                    n++;
                }
            double mean = sum / n;
            double sd = std::sqrt(std::max(0.0, sq / n - mean * mean));
            double t = mean + p.k * sd;
            bool fg = p.polarity == Polarity::DarkText ? img.at(x, y) < t : img.at(x, y) > t;
            out.set(x, y, fg);
        }
    return out;
}

GrayImage random_image(int w, int h, uint32_t seed) {
    std::mt19937 rng(seed);
    GrayImage img(w, h);
    for (uint8_t& p : img.pixels) p = static_cast<uint8_t>(rng());
    return img;
}

}  // namespace

TEST_CASE("derive_window") {
    auto [w1, h1] = derive_window({40, 24});
    CHECK(h1 == 49);
    CHECK(w1 == 73);
    auto [w2, h2] = derive_window({10, 6});
    CHECK(h2 == 13);
    CHECK(w2 == 19);
    // 1.2*41 = 49.2 -> 49 (odd), 3*25 = 75 (odd)
    auto [w3, h3] = derive_window({41, 25});
    CHECK(h3 == 49);
    CHECK(w3 == 75);
}

TEST_CASE("constant image binarizes to background") {
    GrayImage img(12, 9, 128);
    for (double k : {-0.5, -0.2, 0.0, 0.3}) {
        BinaryImage out = niblack(img, {k, 5, 5, Polarity::DarkText});
        CHECK(out.count_foreground() == 0);
    }
}

TEST_CASE("black square on white becomes foreground") {
    GrayImage img(9, 9, 255);
    for (int y = 3; y < 6; ++y)
        for (int x = 3; x < 6; ++x) img.at(x, y) = 0;
    NiblackParams p{-0.2, 5, 5, Polarity::DarkText};
    BinaryImage out = niblack(img, p);
    BinaryImage ref = niblack_oracle(img, p);
    CHECK(out.pixels == ref.pixels);
    for (int y = 3; y < 6; ++y)
        for (int x = 3; x < 6; ++x) CHECK(out.at(x, y));
}

TEST_CASE("matches brute-force oracle across windows and polarities") {
    for (uint32_t seed = 0; seed < 8; ++seed) {
        GrayImage img = random_image(64, 64, seed);
        for (int win : {3, 5, 9, 15}) {
            for (Polarity pol : {Polarity::DarkText, Polarity::LightText}) {
                NiblackParams p{-0.2, win, win, pol};
                CHECK(niblack(img, p).pixels == niblack_oracle(img, p).pixels);
            }
        }
        // rectangular window
        NiblackParams p{-0.3, 15, 5, Polarity::DarkText};
        CHECK(niblack(img, p).pixels == niblack_oracle(img, p).pixels);
    }
}

TEST_CASE("polarity duality") {
    for (uint32_t seed = 100; seed < 104; ++seed) {
        GrayImage img = random_image(40, 32, seed);
        GrayImage inv = invert(img);
        BinaryImage dark = niblack(img, {-0.2, 7, 5, Polarity::DarkText});
        BinaryImage light = niblack(inv, {0.2, 7, 5, Polarity::LightText});
        CHECK(dark.pixels == light.pixels);
    }
}

TEST_CASE("output is local to the clamped window") {
    GrayImage img = random_image(32, 32, 5);
    NiblackParams p{-0.2, 5, 5, Polarity::DarkText};
    BinaryImage base = niblack(img, p);
    GrayImage far = img;
    far.at(30, 30) = static_cast<uint8_t>(far.at(30, 30) ^ 0xff);
    BinaryImage changed = niblack(far, p);
    // pixel (5,5) is far outside the 5x5 window around (30,30)
    CHECK(base.at(5, 5) == changed.at(5, 5));
    CHECK(base.at(10, 10) == changed.at(10, 10));
}
