#include "pricetag/morph.hpp"

#include <stdexcept>

namespace pricetag {

static void check(const StructElem& se) {
    if (se.side < 1 || se.side % 2 == 0)
        throw std::invalid_argument("StructElem side must be odd and >= 1");
}

// Square SE separates into a horizontal and a vertical 1-D pass.
template <bool Erode>
static BinaryImage pass_h(const BinaryImage& img, int half) {
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            bool v = Erode;
            for (int dx = -half; dx <= half; ++dx) {
                int xx = x + dx;
                bool p = (xx >= 0 && xx < img.width) ? img.at(xx, y) : false;
                if (Erode)
                    v = v && p;
                else
                    v = v || p;
                if (v != Erode) break;
            }
            out.set(x, y, v);
        }
    }
    return out;
}

template <bool Erode>
static BinaryImage pass_v(const BinaryImage& img, int half) {
    BinaryImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            bool v = Erode;
            for (int dy = -half; dy <= half; ++dy) {
                int yy = y + dy;
                bool p = (yy >= 0 && yy < img.height) ? img.at(x, yy) : false;
                if (Erode)
                    v = v && p;
                else
                    v = v || p;
                if (v != Erode) break;
            }
            out.set(x, y, v);
        }
    }
    return out;
}

BinaryImage erode(const BinaryImage& img, const StructElem& se) {
    check(se);
    if (se.side == 1) return img;
    int half = se.side / 2;
    return pass_v<true>(pass_h<true>(img, half), half);
}

BinaryImage dilate(const BinaryImage& img, const StructElem& se) {
    check(se);
    if (se.side == 1) return img;
    int half = se.side / 2;
    return pass_v<false>(pass_h<false>(img, half), half);
}

BinaryImage open(const BinaryImage& img, const StructElem& se) {
    return dilate(erode(img, se), se);
}

}  // namespace pricetag
