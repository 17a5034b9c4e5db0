#include "pricetag/image.hpp"

#include <algorithm>
#include <cmath>

namespace pricetag {

Rect intersect(const Rect& a, const Rect& b) {
    int x0 = std::max(a.x, b.x);
    int y0 = std::max(a.y, b.y);
    int x1 = std::min(a.right(), b.right());
    int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return Rect{x0, y0, 0, 0};
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

Rect union_rect(const Rect& a, const Rect& b) {
    if (a.w == 0 || a.h == 0) return b;
    if (b.w == 0 || b.h == 0) return a;
    int x0 = std::min(a.x, b.x);
    int y0 = std::min(a.y, b.y);
    int x1 = std::max(a.right(), b.right());
    int y1 = std::max(a.bottom(), b.bottom());
    return Rect{x0, y0, x1 - x0, y1 - y0};
}

Quad Quad::from_rect(const Rect& r) {
    Quad q;
    q.corners[0] = {static_cast<double>(r.x), static_cast<double>(r.y)};
    q.corners[1] = {static_cast<double>(r.right()), static_cast<double>(r.y)};
    q.corners[2] = {static_cast<double>(r.right()), static_cast<double>(r.bottom())};
    q.corners[3] = {static_cast<double>(r.x), static_cast<double>(r.bottom())};
    return q;
}

static double shoelace(const std::vector<Point>& pts) {
    double s = 0.0;
    size_t n = pts.size();
    for (size_t i = 0; i < n; ++i) {
        const Point& a = pts[i];
        const Point& b = pts[(i + 1) % n];
        s += a.x * b.y - b.x * a.y;
    }
    return s / 2.0;
}

double Quad::area() const {
    std::vector<Point> pts(corners.begin(), corners.end());
    return std::abs(shoelace(pts));
}

bool Quad::is_simple_positive() const {
    // Convex with consistent winding implies simple; the quads produced in
    // this pipeline are rects or rotated rects, always convex.
    double sign = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point& a = corners[i];
        const Point& b = corners[(i + 1) % 4];
        const Point& c = corners[(i + 2) % 4];
        double cross = (b.x - a.x) * (c.y - b.y) - (b.y - a.y) * (c.x - b.x);
        if (cross == 0.0) continue;
        if (sign == 0.0)
            sign = cross;
        else if (sign * cross < 0.0)
            return false;
    }
    return area() > 0.0;
}

// Clip polygon by half-plane to the left of edge a->b (for clockwise quads
// in y-down coordinates this is the interior side).
static std::vector<Point> clip_edge(const std::vector<Point>& poly, const Point& a,
                                    const Point& b) {
    std::vector<Point> out;
    size_t n = poly.size();
    auto side = [&](const Point& p) {
        return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    };
    for (size_t i = 0; i < n; ++i) {
        const Point& cur = poly[i];
        const Point& nxt = poly[(i + 1) % n];
        double sc = side(cur);
        double sn = side(nxt);
        if (sc >= 0) out.push_back(cur);
        if ((sc > 0 && sn < 0) || (sc < 0 && sn > 0)) {
            double t = sc / (sc - sn);
            out.push_back({cur.x + t * (nxt.x - cur.x), cur.y + t * (nxt.y - cur.y)});
        }
    }
    return out;
}

static std::vector<Point> oriented(const Quad& q) {
    std::vector<Point> pts(q.corners.begin(), q.corners.end());
    if (shoelace(pts) < 0) std::reverse(pts.begin(), pts.end());
    return pts;
}

double convex_intersection_area(const Quad& a, const Quad& b) {
    std::vector<Point> poly = oriented(a);
    std::vector<Point> clip = oriented(b);
    for (size_t i = 0; i < clip.size() && !poly.empty(); ++i) {
        poly = clip_edge(poly, clip[i], clip[(i + 1) % clip.size()]);
    }
    if (poly.size() < 3) return 0.0;
    return std::abs(shoelace(poly));
}

double quad_iou(const Quad& a, const Quad& b) {
    double inter = convex_intersection_area(a, b);
    double uni = a.area() + b.area() - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

Point rotate_point(const Point& p, const Point& center, double degrees) {
    // Positive = counter-clockwise on screen; y grows downward, so negate.
    double rad = -degrees * M_PI / 180.0;
    double c = std::cos(rad), s = std::sin(rad);
    double dx = p.x - center.x, dy = p.y - center.y;
    return {center.x + dx * c - dy * s, center.y + dx * s + dy * c};
}

GrayImage::GrayImage(int w, int h, uint8_t fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ImageError("GrayImage: dimensions must be >= 1");
    pixels.assign(static_cast<size_t>(w) * h, fill);
}

ColorImage::ColorImage(int w, int h, uint8_t r, uint8_t g, uint8_t b) : width(w), height(h) {
    if (w < 1 || h < 1) throw ImageError("ColorImage: dimensions must be >= 1");
    pixels.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < pixels.size(); i += 3) {
        pixels[i] = r;
        pixels[i + 1] = g;
        pixels[i + 2] = b;
    }
}

BinaryImage::BinaryImage(int w, int h, bool fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ImageError("BinaryImage: dimensions must be >= 1");
    pixels.assign(static_cast<size_t>(w) * h, fill ? 1 : 0);
}

size_t BinaryImage::count_foreground() const {
    size_t n = 0;
    for (uint8_t p : pixels) n += p;
    return n;
}

uint64_t IntegralImage::rect_sum(const Rect& r) const {
    return sum_at(r.right(), r.bottom()) - sum_at(r.x, r.bottom()) - sum_at(r.right(), r.y) +
           sum_at(r.x, r.y);
}

uint64_t IntegralImage::rect_sq(const Rect& r) const {
    return sq_at(r.right(), r.bottom()) - sq_at(r.x, r.bottom()) - sq_at(r.right(), r.y) +
           sq_at(r.x, r.y);
}

GrayImage to_gray(const ColorImage& img) {
    GrayImage out(img.width, img.height);
    const uint8_t* src = img.pixels.data();
    for (size_t i = 0, n = static_cast<size_t>(img.width) * img.height; i < n; ++i) {
        double g = 0.299 * src[3 * i] + 0.587 * src[3 * i + 1] + 0.114 * src[3 * i + 2];
        long v = std::lround(g);
        out.pixels[i] = static_cast<uint8_t>(std::clamp(v, 0L, 255L));
    }
    return out;
}

ColorImage scale_to_limit(const ColorImage& img, int max_w, int max_h) {
    if (max_w < 1 || max_h < 1) throw ImageError("scale_to_limit: limit must be >= 1");
    if (img.width <= max_w && img.height <= max_h) return img;
    double f = std::min(static_cast<double>(max_w) / img.width,
                        static_cast<double>(max_h) / img.height);
    // round half up
    int out_w = static_cast<int>(std::floor(img.width * f + 0.5));
    int out_h = static_cast<int>(std::floor(img.height * f + 0.5));
    out_w = std::clamp(out_w, 1, max_w);
    out_h = std::clamp(out_h, 1, max_h);

    ColorImage out(out_w, out_h);
    double sx = static_cast<double>(img.width) / out_w;
    double sy = static_cast<double>(img.height) / out_h;
    for (int oy = 0; oy < out_h; ++oy) {
        double y0 = oy * sy, y1 = (oy + 1) * sy;
        int iy0 = static_cast<int>(std::floor(y0));
        int iy1 = std::min(static_cast<int>(std::ceil(y1)), img.height);
        for (int ox = 0; ox < out_w; ++ox) {
            double x0 = ox * sx, x1 = (ox + 1) * sx;
            int ix0 = static_cast<int>(std::floor(x0));
            int ix1 = std::min(static_cast<int>(std::ceil(x1)), img.width);
            double acc[3] = {0, 0, 0};
            double wsum = 0.0;
            for (int iy = iy0; iy < iy1; ++iy) {
                double wy = std::min(y1, iy + 1.0) - std::max(y0, static_cast<double>(iy));
                for (int ix = ix0; ix < ix1; ++ix) {
                    double wx = std::min(x1, ix + 1.0) - std::max(x0, static_cast<double>(ix));
                    double w = wx * wy;
                    const uint8_t* p = img.at(ix, iy);
                    acc[0] += w * p[0];
                    acc[1] += w * p[1];
                    acc[2] += w * p[2];
                    wsum += w;
                }
            }
            uint8_t* q = out.at(ox, oy);
            for (int c = 0; c < 3; ++c) {
                long v = std::lround(acc[c] / wsum);
                q[c] = static_cast<uint8_t>(std::clamp(v, 0L, 255L));
            }
        }
    }
    return out;
}

IntegralImage build_integral(const GrayImage& img) {
    IntegralImage ii;
    ii.width = img.width;
    ii.height = img.height;
    size_t stride = img.width + 1;
    ii.sum.assign(stride * (img.height + 1), 0);
    ii.sq.assign(stride * (img.height + 1), 0);
    for (int y = 0; y < img.height; ++y) {
        uint64_t row = 0, row_sq = 0;
        for (int x = 0; x < img.width; ++x) {
            uint64_t v = img.at(x, y);
            row += v;
            row_sq += v * v;
            size_t idx = (y + 1) * stride + (x + 1);
            ii.sum[idx] = ii.sum[idx - stride] + row;
            ii.sq[idx] = ii.sq[idx - stride] + row_sq;
        }
    }
    return ii;
}

WindowStats window_stats(const IntegralImage& ii, const Rect& r) {
    double n = static_cast<double>(r.w) * r.h;
    double s = static_cast<double>(ii.rect_sum(r));
    double q = static_cast<double>(ii.rect_sq(r));
    WindowStats ws;
    ws.mean = s / n;
    double var = q / n - ws.mean * ws.mean;
    ws.stddev = std::sqrt(std::max(0.0, var));
    return ws;
}

template <typename Img>
static Img crop_impl(const Img& img, const Rect& r) {
    if (!r.inside(img.width, img.height)) throw ImageError("crop: rect outside image");
    Img out(r.w, r.h);
    for (int y = 0; y < r.h; ++y)
        for (int x = 0; x < r.w; ++x) {
            if constexpr (std::is_same_v<Img, ColorImage>) {
                const uint8_t* p = img.at(r.x + x, r.y + y);
                out.set(x, y, p[0], p[1], p[2]);
            } else if constexpr (std::is_same_v<Img, BinaryImage>) {
                out.set(x, y, img.at(r.x + x, r.y + y));
            } else {
                out.at(x, y) = img.at(r.x + x, r.y + y);
            }
        }
    return out;
}

ColorImage crop(const ColorImage& img, const Rect& r) { return crop_impl(img, r); }
GrayImage crop(const GrayImage& img, const Rect& r) { return crop_impl(img, r); }
BinaryImage crop(const BinaryImage& img, const Rect& r) { return crop_impl(img, r); }

// Bilinear sample at sub-pixel location given in corner coordinates
// (pixel (i,j) has its center at (i+0.5, j+0.5)).
static void sample_bilinear(const ColorImage& img, double x, double y, uint8_t* out) {
    double fx = x - 0.5, fy = y - 0.5;
    int x0 = static_cast<int>(std::floor(fx));
    int y0 = static_cast<int>(std::floor(fy));
    double ax = fx - x0, ay = fy - y0;
    int x1 = x0 + 1, y1 = y0 + 1;
    auto cl = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
    const uint8_t* p00 = img.at(cl(x0, img.width), cl(y0, img.height));
    const uint8_t* p10 = img.at(cl(x1, img.width), cl(y0, img.height));
    const uint8_t* p01 = img.at(cl(x0, img.width), cl(y1, img.height));
    const uint8_t* p11 = img.at(cl(x1, img.width), cl(y1, img.height));
    for (int c = 0; c < 3; ++c) {
        double v = (1 - ax) * (1 - ay) * p00[c] + ax * (1 - ay) * p10[c] +
                   (1 - ax) * ay * p01[c] + ax * ay * p11[c];
        out[c] = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
}

ColorImage warp_quad_to_rect(const ColorImage& img, const Quad& q, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1) throw ImageError("warp: output size must be >= 1");
    for (const Point& p : q.corners) {
        if (p.x < 0 || p.y < 0 || p.x > img.width || p.y > img.height)
            throw ImageError("warp: quad corner outside image");
    }
    if (!q.is_simple_positive()) throw ImageError("warp: degenerate quad");

    const Point& tl = q.corners[0];
    const Point& tr = q.corners[1];
    const Point& br = q.corners[2];
    const Point& bl = q.corners[3];
    ColorImage out(out_w, out_h);
    for (int v = 0; v < out_h; ++v) {
        double t = (v + 0.5) / out_h;
        for (int u = 0; u < out_w; ++u) {
            double s = (u + 0.5) / out_w;
            double px = (1 - s) * (1 - t) * tl.x + s * (1 - t) * tr.x + s * t * br.x +
                        (1 - s) * t * bl.x;
            double py = (1 - s) * (1 - t) * tl.y + s * (1 - t) * tr.y + s * t * br.y +
                        (1 - s) * t * bl.y;
            sample_bilinear(img, px, py, out.at(u, v));
        }
    }
    return out;
}

GrayImage invert(const GrayImage& img) {
    GrayImage out(img.width, img.height);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        out.pixels[i] = static_cast<uint8_t>(255 - img.pixels[i]);
    return out;
}

}  // namespace pricetag
