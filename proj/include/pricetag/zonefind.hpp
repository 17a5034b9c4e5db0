#pragma once

#include <optional>
#include <vector>

#include "pricetag/binarize.hpp"
#include "pricetag/cc.hpp"
#include "pricetag/image.hpp"

namespace pricetag {

// Admissible digit pattern: int_min..int_max integer digits, optionally a
// dot followed by exactly two fractional digits.
struct PriceFormat {
    int int_min = 1;
    int int_max = 4;
    int frac_digits = 0;  // 0 or 2

    bool has_dot() const { return frac_digits == 2; }
};

// Normalized rect in [0,1]^2 image coordinates.
struct NormRect {
    double x = 0.0, y = 0.0, w = 1.0, h = 1.0;

    Rect to_pixels(int img_w, int img_h) const;
};

// The known geometrical model of the tag: where the price lives, how big
// its digits are, which formats are admissible.
struct TagModel {
    double digit_h_frac_min = 0.10;  // price digit height / image height
    double digit_h_frac_max = 0.30;
    double digit_aspect_min = 0.45;  // digit w/h
    double digit_aspect_max = 0.85;
    NormRect price_zone_prior{0.0, 0.40, 1.0, 0.60};
    std::vector<PriceFormat> formats{{1, 3, 2}, {1, 4, 0}};
    double max_gap_factor = 1.5;   // gap <= factor * digit_w within a cluster
    double v_overlap_min = 0.6;    // vertical-extent overlap for same-line grouping
    double tau_zone = 0.5;         // acceptance threshold for the best cluster

    DigitSizeEstimate estimate_digit_size(int img_h) const;
};

// Deliberately loose component bounds derived from TagModel and image size.
struct SizeFilterParams {
    double h_min = 0, h_max = 0;
    double w_min = 0, w_max = 0;
    double area_min = 0, area_max = 0;  // pixel_count bounds
    double aspect_min = 0, aspect_max = 0;

    bool pass_digit(const Component& c) const;
    // Small roughly-square components are kept past the height floor so a
    // decimal dot can be recovered during clustering.
    bool pass_dot(const Component& c) const;
};

enum class Branch { Opened, Raw };

struct Cluster {
    std::vector<Component> members;  // sorted by bbox.x
    std::optional<Component> dot;
    Rect bbox;
    std::optional<PriceFormat> matched_format;
    double score = 0.0;
    Branch branch = Branch::Raw;
    bool extended = false;  // bbox widened for digits hidden past the dot

    int digits_after_dot() const;
};

SizeFilterParams derive_size_filter(const TagModel& model, int img_w, int img_h);

std::vector<Component> size_filter(const std::vector<Component>& comps,
                                   const SizeFilterParams& p);

// Greedy left-to-right chaining of digit candidates plus dot attachment and
// format matching. Every input component lands in exactly one cluster,
// either as a member or as the dot.
std::vector<Cluster> cluster_by_format(const std::vector<Component>& comps,
                                       const TagModel& model,
                                       const DigitSizeEstimate& digit_est);

// When fewer than two digits follow the dot, widen the bbox right edge by
// one digit advance per missing digit, clamped to the image.
Cluster extend_for_missing_digits(const Cluster& c, const DigitSizeEstimate& digit_est,
                                  int img_w);

double score_cluster(const Cluster& c, const TagModel& model, int img_w, int img_h);

// Argmax over both branches; ties broken by more members, then opened
// branch, then leftmost bbox. Empty when the best score < tau_zone.
std::optional<Cluster> select_best(const std::vector<Cluster>& opened,
                                   const std::vector<Cluster>& raw, const TagModel& model,
                                   int img_w, int img_h);

}  // namespace pricetag
