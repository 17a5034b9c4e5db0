#include "pricetag/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace pricetag {

static int make_odd(int n) { return (n % 2 == 1) ? n : n + 1; }

std::pair<int, int> derive_window(const DigitSizeEstimate& est) {
    if (est.digit_h < 4 || est.digit_w < 4 || est.digit_w >= est.digit_h)
        throw std::invalid_argument("derive_window: invalid digit size estimate");
    int win_h = make_odd(static_cast<int>(std::lround(1.2 * est.digit_h)));
    int win_w = make_odd(static_cast<int>(std::lround(3.0 * est.digit_w)));
    return {win_w, win_h};
}

BinaryImage niblack(const GrayImage& img, const NiblackParams& p) {
    if (p.win_w < 3 || p.win_h < 3 || p.win_w % 2 == 0 || p.win_h % 2 == 0)
        throw std::invalid_argument("niblack: window sides must be odd and >= 3");
    if (p.k < -1.0 || p.k > 1.0) throw std::invalid_argument("niblack: k out of [-1,1]");

    IntegralImage ii = build_integral(img);
    BinaryImage out(img.width, img.height);
    const int w = img.width, h = img.height;
    const int hw = p.win_w / 2, hh = p.win_h / 2;
    const bool dark = p.polarity == Polarity::DarkText;
    const size_t stride = static_cast<size_t>(w) + 1;
    std::vector<uint64_t> cs(stride);   // per-row prefix of column sums over [y0, y1)
    std::vector<uint64_t> sqcs(stride);  // same for squared pixel values
    for (int y = 0; y < h; ++y) {
        const int y0 = std::max(0, y - hh);
        const int y1 = std::min(h, y + hh + 1);
        const uint64_t* s0 = ii.sum.data() + static_cast<size_t>(y0) * stride;
        const uint64_t* s1 = ii.sum.data() + static_cast<size_t>(y1) * stride;
        const uint64_t* q0 = ii.sq.data() + static_cast<size_t>(y0) * stride;
        const uint64_t* q1 = ii.sq.data() + static_cast<size_t>(y1) * stride;
        for (size_t i = 0; i < stride; ++i) {
            cs[i] = s1[i] - s0[i];
            sqcs[i] = q1[i] - q0[i];
        }
        const uint8_t* src = img.pixels.data() + static_cast<size_t>(y) * w;
        uint8_t* dst = out.pixels.data() + static_cast<size_t>(y) * w;
        const uint64_t rows = static_cast<uint64_t>(y1 - y0);
        const double kk = p.k * p.k;
        for (int x = 0; x < w; ++x) {
            const int x0 = std::max(0, x - hw);
            const int x1 = std::min(w, x + hw + 1);
            const uint64_t sum = cs[x1] - cs[x0];
            const uint64_t n = rows * static_cast<uint64_t>(x1 - x0);
            const uint64_t v = src[x];
            const uint64_t nv = n * v;

            // The pixel's side of the window mean often decides the strict
            // comparison against mean + k*stddev without the square root:
            // for k <= 0 the threshold cannot exceed the mean, for k >= 0 it
            // cannot fall below it, and the integer test n*v vs sum is far
            // enough from the float threshold that rounding cannot flip it.
            if (p.k <= 0.0) {
                if (dark && nv >= sum) {
                    dst[x] = 0;
                    continue;
                }
                if (!dark && nv > sum) {
                    dst[x] = 1;
                    continue;
                }
            }
            if (p.k >= 0.0) {
                if (dark && nv < sum) {
                    dst[x] = 1;
                    continue;
                }
                if (!dark && nv <= sum) {
                    dst[x] = 0;
                    continue;
                }
            }

            // Squared comparison |n*v - sum|^2 vs k^2*(n*sq - sum^2) decides
            // the rest without divisions or sqrt. All quantities fit a double
            // exactly, so only genuine near-ties fall through to the full
            // floating-point formula, which then settles them the same way
            // a direct evaluation would.
            const uint64_t sqs = sqcs[x1] - sqcs[x0];
            const uint64_t e = nv > sum ? nv - sum : sum - nv;
            const double lhs = static_cast<double>(e) * static_cast<double>(e);
            const double rhs =
                kk * (static_cast<double>(n * sqs) - static_cast<double>(sum * sum));
            const bool fg_on_greater = dark == (p.k < 0.0);
            if (lhs > rhs * (1 + 1e-9) + 1e-9) {
                dst[x] = fg_on_greater ? 1 : 0;
                continue;
            }
            if (lhs < rhs * (1 - 1e-9) - 1e-9) {
                dst[x] = fg_on_greater ? 0 : 1;
                continue;
            }

            WindowStats ws = window_stats(ii, Rect{x0, y0, x1 - x0, y1 - y0});
            double t = ws.mean + p.k * ws.stddev;
            double vd = static_cast<double>(v);
            bool fg = dark ? (vd < t) : (vd > t);
            dst[x] = fg ? 1 : 0;
        }
    }
    return out;
}

}  // namespace pricetag
