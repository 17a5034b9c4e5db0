#pragma once

#include <string>

#include "pricetag/binarize.hpp"
#include "pricetag/zonefind.hpp"

namespace pricetag {

struct PipelineConfig {
    int max_w = 1350;
    int max_h = 700;

    double niblack_k = -0.2;
    Polarity polarity = Polarity::DarkText;

    // 0 = derive from the digit height estimate
    int se_side = 3;

    TagModel model;

    double skew_threshold_deg = 1.5;
    double skew_max_deg = 15.0;

    double min_conf = 0.75;
    std::string recognizer = "template";
    std::string atlas_dir;  // empty = builtin atlas

    double iou_threshold = 0.5;
    std::string debug_dir;  // empty = no debug output
};

// Built-in tag profiles: "type1".."type5" (one per tag layout) and
// "synthetic" (covers all five, the default).
TagModel tag_profile(const std::string& name);

// JSON config mirroring PipelineConfig; unknown keys are an error.
PipelineConfig load_config(const std::string& path);
PipelineConfig parse_config(const std::string& json_text);

}  // namespace pricetag
