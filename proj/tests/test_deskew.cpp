#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pricetag/deskew.hpp"

using namespace pricetag;

namespace {

// Walk the dyadic pattern directly: independent of the butterfly recursion
// inside fht_horizontal, pixels outside the image count as background.
int32_t pattern_sum_oracle(const BinaryImage& img, int n, int y, int s) {
    int32_t sum = 0;
    for (int x = 0; x < n && x < img.width; ++x) {
        int yy = y + fht_pattern_offset(n, s, x);
        if (yy >= 0 && yy < img.height && img.at(x, yy)) sum++;
    }
    return sum;
}

BinaryImage stripes_with_slope(int w, int h, double slope, int period = 14,
                               int thickness = 4) {
    BinaryImage img(w, h);
    for (int x = 0; x < w; ++x) {
        int shift = static_cast<int>(std::lround(slope * x));
        for (int y0 = period; y0 < h - period; y0 += period)
            for (int t = 0; t < thickness; ++t) {
                int y = y0 + t + shift;
                if (y >= 0 && y < h) img.set(x, y, true);
            }
    }
    return img;
}

}  // namespace

TEST_CASE("fht_pattern_offset endpoints, monotonicity, dyadic bound") {
    for (int n : {8, 16, 64, 512}) {
        int bound = static_cast<int>(std::ceil(std::log2(n)));
        for (int s : {0, 1, n / 4, n / 2, n - 1}) {
            CHECK(fht_pattern_offset(n, s, 0) == 0);
            CHECK(fht_pattern_offset(n, s, n - 1) == s);
            int prev = 0;
            for (int x = 0; x < n; ++x) {
                int off = fht_pattern_offset(n, s, x);
                CHECK(off >= prev);  // nondecreasing
                prev = off;
                // stays near the ideal line within the dyadic deviation bound
                double ideal = n > 1 ? static_cast<double>(s) * x / (n - 1) : 0.0;
                CHECK(std::abs(off - ideal) <= bound + 1);
            }
        }
    }
}

TEST_CASE("accumulator matches the pattern-walk oracle exactly") {
    std::vector<std::pair<int, int>> sizes = {{16, 12}, {13, 10}};  // pow2 and padded
    for (auto [w, h] : sizes) {
        BinaryImage img(w, h);
        uint32_t lcg = 12345;
        for (uint8_t& p : img.pixels) {
            lcg = lcg * 1664525u + 1013904223u;
            p = (lcg >> 28) < 6 ? 1 : 0;
        }
        FhtAccumulator acc = fht_horizontal(img);
        CHECK(acc.orig_width == w);
        CHECK((acc.width & (acc.width - 1)) == 0);
        CHECK(acc.width >= w);
        CHECK(acc.height == h);
        for (int s = 0; s < acc.width; ++s)
            for (int y = 0; y < acc.rows; ++y) {
                // rows above the image only ever see the pattern climb out
                int ry = y - (acc.rows - acc.height);
                (void)ry;
                CHECK(acc.at(y, s) == pattern_sum_oracle(img, acc.width, y, s));
            }
    }
}

TEST_CASE("full-width row peaks at shear zero") {
    BinaryImage img(32, 20);
    for (int x = 0; x < 32; ++x) img.set(x, 9, true);
    FhtAccumulator acc = fht_horizontal(img);
    CHECK(acc.at(9, 0) == 32);
    for (int s = 1; s < acc.width; ++s)
        for (int y = 0; y < acc.rows; ++y) CHECK(acc.at(y, s) <= 32);
}

TEST_CASE("line painted along the pattern is fully collected") {
    int w = 512, h = 64;
    BinaryImage img(w, h);
    int s = 16, y0 = 8;
    for (int x = 0; x < w; ++x) img.set(x, y0 + fht_pattern_offset(w, s, x), true);
    FhtAccumulator acc = fht_horizontal(img);
    REQUIRE(acc.width == w);
    CHECK(acc.at(y0, s) == w);
}

TEST_CASE("mirror_vertical flips rows") {
    BinaryImage img(5, 4);
    img.set(1, 0, true);
    img.set(4, 3, true);
    BinaryImage m = mirror_vertical(img);
    CHECK(m.at(1, 3));
    CHECK(m.at(4, 0));
    CHECK(m.count_foreground() == 2);
    CHECK(mirror_vertical(m).pixels == img.pixels);
}

TEST_CASE("estimate_skew on horizontal text rows is zero") {
    BinaryImage img = stripes_with_slope(400, 160, 0.0);
    Angle a = estimate_skew(img, Rect{0, 0, 400, 160}, 15.0);
    CHECK(a.degrees == 0.0);
}

TEST_CASE("estimate_skew on empty crop is zero") {
    BinaryImage img(200, 100);
    CHECK(estimate_skew(img, Rect{0, 0, 200, 100}, 15.0).degrees == 0.0);
}

TEST_CASE("estimate_skew recovers sheared stripes with correct sign") {
    // y grows with x -> the content falls to the right -> clockwise ->
    // negative angle in the CCW-positive screen convention
    for (double deg : {2.0, 5.0, 10.0}) {
        double slope = std::tan(deg * M_PI / 180.0);
        BinaryImage down = stripes_with_slope(480, 200, slope);
        Angle a = estimate_skew(down, Rect{0, 0, 480, 200}, 15.0);
        CHECK(std::abs(a.degrees + deg) <= 0.7);

        BinaryImage up = stripes_with_slope(480, 200, -slope);
        Angle b = estimate_skew(up, Rect{0, 0, 480, 200}, 15.0);
        CHECK(std::abs(b.degrees - deg) <= 0.7);
    }
}

TEST_CASE("estimate_skew respects the zone crop") {
    // skewed stripes inside the zone, heavy horizontal clutter outside
    BinaryImage img(600, 300);
    double slope = std::tan(5.0 * M_PI / 180.0);
    Rect zone{150, 80, 320, 140};
    for (int x = 0; x < zone.w; ++x) {
        int shift = static_cast<int>(std::lround(slope * x));
        for (int y0 = 20; y0 < zone.h - 30; y0 += 16)
            for (int t = 0; t < 4; ++t) {
                int y = zone.y + y0 + t + shift;
                if (y < img.height) img.set(zone.x + x, y, true);
            }
    }
    for (int x = 0; x < 600; ++x)
        for (int y : {10, 20, 280}) img.set(x, y, true);
    Angle a = estimate_skew(img, zone, 15.0);
    CHECK(std::abs(a.degrees + 5.0) <= 0.7);
}

TEST_CASE("estimate_skew validates arguments") {
    BinaryImage img(100, 80);
    CHECK_THROWS_AS(estimate_skew(img, Rect{50, 50, 80, 40}, 15.0), ImageError);
    CHECK_THROWS_AS(estimate_skew(img, Rect{0, 0, 100, 80}, 25.0), ImageError);
}

TEST_CASE("compensate passes the rect through at small angles") {
    Rect r{40, 60, 120, 50};
    for (double deg : {0.0, 0.8, 1.5, -1.2}) {
        Quad q = compensate(r, Angle{deg}, 1.5, 640, 480);
        Quad ref = Quad::from_rect(r);
        for (int i = 0; i < 4; ++i) {
            CHECK(q.corners[i].x == doctest::Approx(ref.corners[i].x));
            CHECK(q.corners[i].y == doctest::Approx(ref.corners[i].y));
        }
    }
}

TEST_CASE("compensate rotates corners about the rect center above threshold") {
    Rect r{200, 200, 100, 40};
    Angle a{5.0};
    Quad q = compensate(r, a, 1.5, 640, 480);
    Point center{250.0, 220.0};
    Quad ref = Quad::from_rect(r);
    for (int i = 0; i < 4; ++i) {
        Point exp = rotate_point(ref.corners[i], center, a.degrees);
        CHECK(q.corners[i].x == doctest::Approx(exp.x).epsilon(1e-9));
        CHECK(q.corners[i].y == doctest::Approx(exp.y).epsilon(1e-9));
    }
    CHECK(q.is_simple_positive());

    // near the border the corners clamp into the image
    Rect edge{0, 0, 120, 40};
    Quad qc = compensate(edge, Angle{8.0}, 1.5, 640, 480);
    for (const Point& p : qc.corners) {
        CHECK(p.x >= 0.0);
        CHECK(p.y >= 0.0);
        CHECK(p.x <= 640.0);
        CHECK(p.y <= 480.0);
    }
}
