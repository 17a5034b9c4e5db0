#include "pricetag/cc.hpp"

#include <algorithm>
#include <numeric>

namespace pricetag {

namespace {

struct UnionFind {
    std::vector<int> parent;

    int make() {
        parent.push_back(static_cast<int>(parent.size()));
        return parent.back();
    }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    int merge(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (b < a) std::swap(a, b);
        parent[b] = a;
        return a;
    }
};

}  // namespace

std::vector<Component> label_components(const BinaryImage& img) {
    const int w = img.width, h = img.height;
    std::vector<int> labels(static_cast<size_t>(w) * h, -1);
    UnionFind uf;

    // First pass: provisional labels from the 4 already-visited 8-neighbors.
    // Foreground coordinates are recorded in scan order so the second pass
    // only touches them instead of rescanning the whole label grid.
    struct Pix {
        int x, y;
    };
    std::vector<Pix> fg;
    fg.reserve(static_cast<size_t>(
        std::count(img.pixels.begin(), img.pixels.end(), static_cast<uint8_t>(1))));
    for (int y = 0; y < h; ++y) {
        const uint8_t* row = img.pixels.data() + static_cast<size_t>(y) * w;
        int* lrow = labels.data() + static_cast<size_t>(y) * w;
        const int* prow = y > 0 ? lrow - w : nullptr;
        for (int x = 0; x < w; ++x) {
            if (!row[x]) continue;
            fg.push_back({x, y});
            int best = -1;
            auto consider = [&](int l) {
                if (l < 0) return;
                if (best < 0)
                    best = uf.find(l);
                else
                    best = uf.merge(best, l);
            };
            if (x > 0) consider(lrow[x - 1]);
            if (prow) {
                if (x > 0) consider(prow[x - 1]);
                consider(prow[x]);
                if (x + 1 < w) consider(prow[x + 1]);
            }
            if (best < 0) best = uf.make();
            lrow[x] = best;
        }
    }

    // Second pass: resolve labels and accumulate stats in first-pixel order.
    std::vector<int> compact(uf.parent.size(), -1);
    std::vector<Component> comps;
    std::vector<double> sx, sy;
    for (const Pix& p : fg) {
        {
            const int x = p.x, y = p.y;
            int l = labels[static_cast<size_t>(y) * w + x];
            int root = uf.find(l);
            int id = compact[root];
            if (id < 0) {
                id = static_cast<int>(comps.size());
                compact[root] = id;
                Component c;
                c.id = id;
                c.bbox = Rect{x, y, 1, 1};
                comps.push_back(c);
                sx.push_back(0.0);
                sy.push_back(0.0);
            }
            Component& c = comps[id];
            c.pixel_count++;
            sx[id] += x;
            sy[id] += y;
            int x0 = std::min(c.bbox.x, x), y0 = std::min(c.bbox.y, y);
            int x1 = std::max(c.bbox.right(), x + 1), y1 = std::max(c.bbox.bottom(), y + 1);
            c.bbox = Rect{x0, y0, x1 - x0, y1 - y0};
        }
    }
    for (size_t i = 0; i < comps.size(); ++i) {
        comps[i].centroid = {sx[i] / comps[i].pixel_count, sy[i] / comps[i].pixel_count};
    }
    return comps;
}

}  // namespace pricetag
