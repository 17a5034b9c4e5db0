#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pricetag/image.hpp"
#include "pricetag/zonefind.hpp"

namespace pricetag {

inline constexpr int kTemplateW = 16;
inline constexpr int kTemplateH = 24;
inline constexpr const char* kAtlasSymbols = "0123456789.";

// One normalized binary template per symbol in {0..9, '.'}.
struct GlyphAtlas {
    std::map<char, BinaryImage> templates;
    std::string font_name;

    static GlyphAtlas builtin();
};

// Directory of PGM templates plus a JSON manifest.
void save_atlas(const GlyphAtlas& atlas, const std::string& dir);
GlyphAtlas load_atlas(const std::string& dir);

struct Price {
    long long minor_units = 0;
    int frac_digits = 0;  // 0 or 2

    std::string to_string() const;
    bool operator==(const Price&) const = default;
};

struct ClassifyResult {
    char symbol = '?';
    double confidence = 0.0;
};

class Recognizer {
public:
    virtual ~Recognizer() = default;
    // Deterministic for identical input; safe to call concurrently.
    virtual ClassifyResult classify(const BinaryImage& glyph) const = 0;
};

struct GlyphBox {
    Rect box;
    bool is_dot = false;
};

struct EmptyZoneError : std::runtime_error {
    EmptyZoneError() : std::runtime_error("no glyphs found in price zone") {}
};

// Connected components of the rectified binary crop, size-filtered relative
// to the zone height, vertically overlapping fragments merged, ordered left
// to right. Throws EmptyZoneError when nothing survives.
std::vector<GlyphBox> segment_glyphs(const BinaryImage& zone);

// Nearest-neighbor rescale to the template grid, matching-pixel fraction
// against each template, argmax (ties by atlas symbol order).
ClassifyResult classify_template(const BinaryImage& glyph, const GlyphAtlas& atlas);

class TemplateRecognizer : public Recognizer {
public:
    explicit TemplateRecognizer(GlyphAtlas atlas) : atlas_(std::move(atlas)) {}
    ClassifyResult classify(const BinaryImage& glyph) const override {
        return classify_template(glyph, atlas_);
    }
    const GlyphAtlas& atlas() const { return atlas_; }

private:
    GlyphAtlas atlas_;
};

struct RecognizedSymbol {
    char symbol = '?';
    double confidence = 0.0;
};

struct PostprocessResult {
    std::optional<Price> price;
    std::string reject_reason;  // empty on accept

    bool accepted() const { return price.has_value(); }
};

// Accepts only when every confidence clears min_conf and the symbol string
// matches an admissible format; anything else is a reject (never a guess).
PostprocessResult postprocess(const std::vector<RecognizedSymbol>& symbols,
                              const std::vector<PriceFormat>& formats, double min_conf);

}  // namespace pricetag
