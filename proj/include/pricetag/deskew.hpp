#pragma once

#include <cstdint>
#include <vector>

#include "pricetag/image.hpp"

namespace pricetag {

// In-plane skew; positive = counter-clockwise on screen.
struct Angle {
    double degrees = 0.0;
};

// Dyadic fast Hough accumulator for near-horizontal lines with
// non-negative shear (downward rise). cell(y, s) sums foreground pixels
// along the dyadic pattern starting at row y with total rise s over the
// padded width. Negative shears come from running the transform on the
// vertically mirrored image.
struct FhtAccumulator {
    int width = 0;        // padded width, power of two
    int orig_width = 0;   // image width before padding
    int height = 0;       // image height
    int rows = 0;         // accumulator rows: height + width (rise headroom)
    std::vector<int32_t> cells;  // rows x width, index [y * width + s]

    int32_t at(int y, int s) const { return cells[static_cast<size_t>(y) * width + s]; }
};

// Row offset of the dyadic pattern at column x for shear s over padded
// width n. Shared with tests as the pattern's defining recurrence.
int fht_pattern_offset(int n, int s, int x);

FhtAccumulator fht_horizontal(const BinaryImage& img);

BinaryImage mirror_vertical(const BinaryImage& img);

// Skew of the text inside the zone crop. Picks the shear whose accumulator
// column has the highest variance (aligned text rows give spiky
// projections); ties go to the smaller |angle|. Zero foreground -> 0 deg.
Angle estimate_skew(const BinaryImage& img, const Rect& zone, double max_deg);

// Below the threshold the rect passes through as its four corners;
// otherwise the corners are rotated by the measured angle about the rect
// center (sampling along the skewed content) and clamped into the image.
Quad compensate(const Rect& r, const Angle& a, double threshold_deg, int img_w, int img_h);

}  // namespace pricetag
