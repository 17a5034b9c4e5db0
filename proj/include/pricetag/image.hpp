#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pricetag {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Axis-aligned rectangle, top-left inclusive, w/h in pixels.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }   // exclusive
    int bottom() const { return y + h; }  // exclusive

    bool contains(int px, int py) const {
        return px >= x && px < right() && py >= y && py < bottom();
    }
    bool inside(int img_w, int img_h) const {
        return x >= 0 && y >= 0 && w >= 1 && h >= 1 && right() <= img_w && bottom() <= img_h;
    }
    long long area() const { return static_cast<long long>(w) * h; }
};

Rect intersect(const Rect& a, const Rect& b);
Rect union_rect(const Rect& a, const Rect& b);

// Corners ordered top-left, top-right, bottom-right, bottom-left.
// Coordinates are sub-pixel; a Rect(x,y,w,h) maps to corners
// (x,y),(x+w,y),(x+w,y+h),(x,y+h).
struct Quad {
    std::array<Point, 4> corners;

    static Quad from_rect(const Rect& r);
    double area() const;  // signed shoelace magnitude
    bool is_simple_positive() const;
};

// Area of intersection of two convex quads (Sutherland-Hodgman).
double convex_intersection_area(const Quad& a, const Quad& b);
double quad_iou(const Quad& a, const Quad& b);

// Rotate point about center; positive degrees rotates counter-clockwise
// on screen (y axis points down, so the math-direction is negated).
Point rotate_point(const Point& p, const Point& center, double degrees);

struct ImageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // row-major

    GrayImage() = default;
    GrayImage(int w, int h, uint8_t fill = 0);
    uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
};

struct ColorImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // row-major RGB triples

    ColorImage() = default;
    ColorImage(int w, int h, uint8_t r = 0, uint8_t g = 0, uint8_t b = 0);
    const uint8_t* at(int x, int y) const {
        return &pixels[(static_cast<size_t>(y) * width + x) * 3];
    }
    uint8_t* at(int x, int y) { return &pixels[(static_cast<size_t>(y) * width + x) * 3]; }
    void set(int x, int y, uint8_t r, uint8_t g, uint8_t b) {
        uint8_t* p = at(x, y);
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }
};

struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // 1 = foreground (ink), 0 = background

    BinaryImage() = default;
    BinaryImage(int w, int h, bool fill = false);
    bool at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { pixels[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
    size_t count_foreground() const;
};

// Summed-area tables of intensities and squared intensities,
// (width+1) x (height+1), first row/column zero.
struct IntegralImage {
    int width = 0;
    int height = 0;
    std::vector<uint64_t> sum;
    std::vector<uint64_t> sq;

    uint64_t sum_at(int x, int y) const { return sum[static_cast<size_t>(y) * (width + 1) + x]; }
    uint64_t sq_at(int x, int y) const { return sq[static_cast<size_t>(y) * (width + 1) + x]; }
    uint64_t rect_sum(const Rect& r) const;
    uint64_t rect_sq(const Rect& r) const;
};

struct WindowStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
};

GrayImage to_gray(const ColorImage& img);

// Downscale by a single uniform factor so both dimensions fit the limit;
// images already within the limit pass through unchanged. Area averaging,
// output size rounded half up.
ColorImage scale_to_limit(const ColorImage& img, int max_w, int max_h);

IntegralImage build_integral(const GrayImage& img);
WindowStats window_stats(const IntegralImage& ii, const Rect& r);

ColorImage crop(const ColorImage& img, const Rect& r);
GrayImage crop(const GrayImage& img, const Rect& r);
BinaryImage crop(const BinaryImage& img, const Rect& r);

// Inverse bilinear map of the quad onto an out_w x out_h grid with bilinear
// pixel sampling. An axis-aligned quad of the output size degenerates to an
// exact crop. Throws ImageError for corners outside the image or a
// degenerate quad.
ColorImage warp_quad_to_rect(const ColorImage& img, const Quad& q, int out_w, int out_h);

GrayImage invert(const GrayImage& img);

}  // namespace pricetag
