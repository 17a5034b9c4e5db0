#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pricetag/image.hpp"
#include "pricetag/ocr.hpp"

namespace pricetag {

// 64-bit mix used for per-image seed derivation (splitmix64 step).
uint64_t mix_seed(uint64_t master, uint64_t index);

struct TagSpec {
    int tag_type = 1;  // 1..5
    Price price;
    int canvas_w = 1000;
    int canvas_h = 520;
    double digit_h_frac = 0.20;  // price digit height / image height
    double price_cx = 0.65;      // normalized price block center
    double price_cy = 0.78;
    bool tag_absent = false;
    bool distractor_digits = false;  // secondary digit group away from the prior
};

// Layout defaults for one of the five built-in tag types, with seeded jitter.
TagSpec make_tag_spec(int tag_type, const Price& price, int canvas_w, int canvas_h,
                      uint64_t seed);

struct DegradationParams {
    double blur_sigma = 0.0;
    double noise_sigma = 0.0;
    double contrast = 1.0;  // (0,1], 1 = unchanged
    double flare = 0.0;     // linear brightness gradient amplitude
    double rotation_deg = 0.0;
    bool tag_absent = false;

    bool is_identity() const {
        return blur_sigma == 0.0 && noise_sigma == 0.0 && contrast == 1.0 && flare == 0.0 &&
               rotation_deg == 0.0;
    }
};

struct GroundTruth {
    std::optional<Price> price;  // absent for tag-absent images
    Quad zone;
    int tag_type = 0;
    DegradationParams degradation;
};

// Deterministic render for (spec, seed): cluttered background, white tag,
// label text and bar pattern as noise elements, the price drawn from the
// embedded font. The ground-truth quad tightly bounds the price glyphs.
std::pair<ColorImage, GroundTruth> render_tag(const TagSpec& spec, uint64_t seed);

// Fixed application order: rotate, contrast, flare, blur, noise.
ColorImage degrade(const ColorImage& img, const DegradationParams& d, uint64_t seed);

// Rotates the ground-truth zone the same way degrade rotates the image.
Quad rotate_quad(const Quad& q, int img_w, int img_h, double degrees);

struct ManifestRow {
    std::string path;
    int tag_type = 0;
    long long price_minor = 0;
    int frac_digits = 0;
    Quad zone;
    DegradationParams degradation;
    bool tag_absent = false;
};

struct DatasetMix {
    double blur = 0.0;
    double contrast = 0.0;
    double washed = 0.0;  // strong contrast reduction plus flare
    double angle = 0.0;
    double noise = 0.0;
    double absent = 0.0;
    // remainder is clean

    static DatasetMix paper_default();
};

// Writes n PPM images plus manifest.csv into out_dir; returns the manifest
// path. Fully determined by (arguments, seed).
std::string generate_dataset(int n, const DatasetMix& mix, uint64_t seed,
                             const std::string& out_dir);

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path);
std::vector<ManifestRow> read_manifest(const std::string& path);

}  // namespace pricetag
