#include "pricetag/deskew.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pricetag {

int fht_pattern_offset(int n, int s, int x) {
    if (n == 1) return 0;
    int half = n / 2;
    int t = s / 2;
    if (x < half) return fht_pattern_offset(half, t, x);
    return (s - t) + fht_pattern_offset(half, t, x - half);
}

static int next_pow2(int v) {
    int n = 1;
    while (n < v) n <<= 1;
    return n;
}

FhtAccumulator fht_horizontal(const BinaryImage& img) {
    const int w = img.width, h = img.height;
    const int n = next_pow2(w);
    const int rows = h + n;

    // Per level: blocks of 2^k columns, each holding 2^k shears x rows.
    // Flat index: (col_block_base + shear) * rows + y.
    std::vector<int32_t> cur(static_cast<size_t>(n) * rows, 0);
    std::vector<int32_t> nxt(static_cast<size_t>(n) * rows, 0);
    for (int x = 0; x < w; ++x)
        for (int y = 0; y < h; ++y)
            cur[static_cast<size_t>(x) * rows + y] = img.at(x, y) ? 1 : 0;

    for (int width_k = 2; width_k <= n; width_k <<= 1) {
        int half = width_k / 2;
        std::fill(nxt.begin(), nxt.end(), 0);
        for (int b = 0; b < n / width_k; ++b) {
            size_t left = static_cast<size_t>(b) * width_k * rows;
            size_t right = left + static_cast<size_t>(half) * rows;
            for (int s = 0; s < width_k; ++s) {
                int t = s / 2;
                int shift = s - t;
                const int32_t* lp = &cur[left + static_cast<size_t>(t) * rows];
                const int32_t* rp = &cur[right + static_cast<size_t>(t) * rows];
                int32_t* op = &nxt[left + static_cast<size_t>(s) * rows];
                int limit = rows - shift;
                for (int y = 0; y < limit; ++y) op[y] = lp[y] + rp[y + shift];
                for (int y = std::max(0, limit); y < rows; ++y) op[y] = lp[y];
            }
        }
        std::swap(cur, nxt);
    }

    FhtAccumulator acc;
    acc.width = n;
    acc.orig_width = w;
    acc.height = h;
    acc.rows = rows;
    acc.cells.assign(static_cast<size_t>(rows) * n, 0);
    for (int s = 0; s < n; ++s)
        for (int y = 0; y < rows; ++y)
            acc.cells[static_cast<size_t>(y) * n + s] = cur[static_cast<size_t>(s) * rows + y];
    return acc;
}

BinaryImage mirror_vertical(const BinaryImage& img) {
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) out.set(x, img.height - 1 - y, img.at(x, y));
    return out;
}

namespace {

// Energy of accumulator column s over every start row. With the crop padded
// so no pattern loses pixels the column mass is constant per shear, and the
// energy peaks where the text band collapses into the fewest rows.
double column_energy(const FhtAccumulator& acc, int s) {
    double sq = 0.0;
    for (int y = 0; y < acc.rows; ++y) {
        double v = acc.at(y, s);
        sq += v * v;
    }
    return sq;
}

// Zero rows on top give each shear the headroom to start above the image.
BinaryImage pad_top(const BinaryImage& img, int pad) {
    BinaryImage out(img.width, img.height + pad);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if (img.at(x, y)) out.set(x, y + pad, true);
    return out;
}

}  // namespace

Angle estimate_skew(const BinaryImage& img, const Rect& zone, double max_deg) {
    if (!zone.inside(img.width, img.height))
        throw ImageError("estimate_skew: zone outside image");
    if (max_deg > 20.0) throw ImageError("estimate_skew: max_deg > 20");

    BinaryImage z = crop(img, zone);
    if (z.count_foreground() == 0) return Angle{0.0};

    // Shrink by 2x OR-pooling until the transform stays small; both axes
    // halve together so slopes (and thus angles) are preserved, and a
    // 256-wide accumulator still resolves about a fifth of a degree.
    while (z.width > 256) {
        BinaryImage half((z.width + 1) / 2, (z.height + 1) / 2);
        for (int y = 0; y < z.height; ++y)
            for (int x = 0; x < z.width; ++x)
                if (z.at(x, y)) half.set(x / 2, y / 2, true);
        z = std::move(half);
    }

    int n = next_pow2(z.width);
    int max_shear =
        std::min(n - 1, static_cast<int>(std::floor(std::tan(max_deg * M_PI / 180.0) * (n - 1))));

    // Positive shear = rise downward with x. Downward rise corresponds to a
    // clockwise tilt on screen, i.e. a negative angle; the mirrored image
    // covers the positive side.
    FhtAccumulator down = fht_horizontal(pad_top(z, max_shear));
    FhtAccumulator up = fht_horizontal(pad_top(mirror_vertical(z), max_shear));

    double best_energy = -1.0;
    double best_angle = 0.0;
    auto consider = [&](double energy, double angle) {
        if (energy > best_energy + 1e-9 ||
            (std::abs(energy - best_energy) <= 1e-9 &&
             (std::abs(angle) < std::abs(best_angle) ||
              (std::abs(angle) == std::abs(best_angle) && angle > best_angle)))) {
            best_energy = energy;
            best_angle = angle;
        }
    };
    for (int s = 0; s <= max_shear; ++s) {
        double deg = std::atan2(static_cast<double>(s), static_cast<double>(n - 1)) * 180.0 / M_PI;
        consider(column_energy(down, s), -deg);
        if (s > 0) consider(column_energy(up, s), deg);
    }
    return Angle{best_angle};
}

Quad compensate(const Rect& r, const Angle& a, double threshold_deg, int img_w, int img_h) {
    if (std::abs(a.degrees) <= threshold_deg) return Quad::from_rect(r);
    Point center{r.x + r.w / 2.0, r.y + r.h / 2.0};
    Quad q = Quad::from_rect(r);
    for (Point& p : q.corners) {
        p = rotate_point(p, center, a.degrees);
        p.x = std::clamp(p.x, 0.0, static_cast<double>(img_w));
        p.y = std::clamp(p.y, 0.0, static_cast<double>(img_h));
    }
    return q;
}

}  // namespace pricetag
