#pragma once

#include "pricetag/image.hpp"

namespace pricetag {

// Centered square structuring element with odd side.
struct StructElem {
    int side = 3;
};

// Pixels outside the image count as background for both operations, so
// foreground touching the border erodes.
BinaryImage erode(const BinaryImage& img, const StructElem& se);
BinaryImage dilate(const BinaryImage& img, const StructElem& se);
BinaryImage open(const BinaryImage& img, const StructElem& se);

}  // namespace pricetag
