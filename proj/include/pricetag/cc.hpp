#pragma once

#include <vector>

#include "pricetag/image.hpp"

namespace pricetag {

struct Component {
    int id = 0;
    Rect bbox;
    long long pixel_count = 0;
    Point centroid;  // mean of member pixel coordinates
};

// Two-pass 8-connectivity labeling with union-find. Components come back
// ordered by their first pixel in row-major scan, ids 0..n-1.
std::vector<Component> label_components(const BinaryImage& img);

}  // namespace pricetag
