#include "pricetag/ocr.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "pricetag/cc.hpp"
#include "pricetag/font.hpp"
#include "pricetag/pnm.hpp"

namespace pricetag {

namespace fs = std::filesystem;

GlyphAtlas GlyphAtlas::builtin() {
    GlyphAtlas atlas;
    atlas.font_name = kFontName;
    for (const char* p = kAtlasSymbols; *p; ++p)
        atlas.templates[*p] = rasterize_glyph(*p, kTemplateW, kTemplateH);
    return atlas;
}

static std::string symbol_filename(char s) {
    return s == '.' ? "dot.pgm" : std::string(1, s) + ".pgm";
}

void save_atlas(const GlyphAtlas& atlas, const std::string& dir) {
    fs::create_directories(dir);
    nlohmann::json manifest;
    manifest["font"] = atlas.font_name;
    manifest["template_w"] = kTemplateW;
    manifest["template_h"] = kTemplateH;
    nlohmann::json files = nlohmann::json::object();
    for (const auto& [sym, tmpl] : atlas.templates) {
        std::string name = symbol_filename(sym);
        save_pgm(tmpl, (fs::path(dir) / name).string());
        files[std::string(1, sym)] = name;
    }
    manifest["templates"] = files;
    std::ofstream f(fs::path(dir) / "atlas.json");
    f << manifest.dump(2) << "\n";
}

GlyphAtlas load_atlas(const std::string& dir) {
    std::ifstream f(fs::path(dir) / "atlas.json");
    if (!f) throw ImageError("cannot open atlas manifest in " + dir);
    nlohmann::json manifest = nlohmann::json::parse(f);
    GlyphAtlas atlas;
    atlas.font_name = manifest.at("font").get<std::string>();
    for (const auto& [key, name] : manifest.at("templates").items()) {
        if (key.size() != 1) throw ImageError("bad atlas symbol key: " + key);
        GrayImage g = load_pgm((fs::path(dir) / name.get<std::string>()).string());
        BinaryImage b(g.width, g.height);
        for (size_t i = 0; i < g.pixels.size(); ++i) b.pixels[i] = g.pixels[i] < 128 ? 1 : 0;
        atlas.templates[key[0]] = std::move(b);
    }
    if (atlas.templates.size() != 11) throw ImageError("atlas must hold exactly 11 symbols");
    return atlas;
}

std::string Price::to_string() const {
    long long div = 1;
    for (int i = 0; i < frac_digits; ++i) div *= 10;
    std::string s = std::to_string(minor_units / div);
    if (frac_digits > 0) {
        long long frac = minor_units % div;
        std::string fs = std::to_string(frac);
        s += "." + std::string(frac_digits - fs.size(), '0') + fs;
    }
    return s;
}

std::vector<GlyphBox> segment_glyphs(const BinaryImage& zone) {
    std::vector<Component> comps = label_components(zone);
    double zh = zone.height;

    std::vector<Rect> digit_boxes;
    std::vector<Component> small_comps;
    for (const Component& c : comps) {
        if (c.bbox.h >= 0.35 * zh)
            digit_boxes.push_back(c.bbox);
        else
            small_comps.push_back(c);
    }

    // Merge boxes that overlap horizontally by at least half the narrower
    // width: parts of a digit broken by noise stack vertically.
    std::sort(digit_boxes.begin(), digit_boxes.end(),
              [](const Rect& a, const Rect& b) { return a.x < b.x; });
    std::vector<Rect> merged;
    for (const Rect& r : digit_boxes) {
        bool absorbed = false;
        for (Rect& m : merged) {
            int ov = std::min(m.right(), r.right()) - std::max(m.x, r.x);
            if (ov >= 0.5 * std::min(m.w, r.w)) {
                m = union_rect(m, r);
                absorbed = true;
                break;
            }
        }
        if (!absorbed) merged.push_back(r);
    }

    // Sub-threshold fragments sitting in a digit's column belong to that
    // digit; the rest compete for the dot slot or drop out as speckle.
    std::vector<Component> dot_cands;
    for (const Component& c : small_comps) {
        bool absorbed = false;
        for (Rect& m : merged) {
            int ov = std::min(m.right(), c.bbox.right()) - std::max(m.x, c.bbox.x);
            if (ov >= 0.5 * std::min(m.w, c.bbox.w)) {
                m = union_rect(m, c.bbox);
                absorbed = true;
                break;
            }
        }
        if (absorbed) continue;
        double h = c.bbox.h;
        double aspect = static_cast<double>(c.bbox.w) / std::max(1, c.bbox.h);
        double fill =
            static_cast<double>(c.pixel_count) / (static_cast<double>(c.bbox.w) * c.bbox.h);
        bool lower_half = c.bbox.y + c.bbox.h / 2.0 > zh / 2.0;
        if (h >= 0.06 * zh && aspect >= 0.4 && aspect <= 2.5 && fill >= 0.5 && lower_half)
            dot_cands.push_back(c);
    }

    std::vector<GlyphBox> out;
    for (const Rect& r : merged) out.push_back({r, false});
    for (const Component& d : dot_cands) {
        // skip dot blobs swallowed by a digit box
        bool inside = false;
        for (const Rect& m : merged) {
            if (intersect(m, d.bbox).area() == d.bbox.area()) inside = true;
        }
        if (!inside) out.push_back({d.bbox, true});
    }
    std::sort(out.begin(), out.end(),
              [](const GlyphBox& a, const GlyphBox& b) { return a.box.x < b.box.x; });
    if (out.empty()) throw EmptyZoneError();
    return out;
}

static BinaryImage rescale_nearest(const BinaryImage& img, int w, int h) {
    BinaryImage out(w, h);
    for (int y = 0; y < h; ++y) {
        int sy = y * img.height / h;
        for (int x = 0; x < w; ++x) {
            int sx = x * img.width / w;
            out.set(x, y, img.at(sx, sy));
        }
    }
    return out;
}

ClassifyResult classify_template(const BinaryImage& glyph, const GlyphAtlas& atlas) {
    if (glyph.count_foreground() == 0) throw ImageError("classify_template: empty glyph");
    BinaryImage norm = rescale_nearest(glyph, kTemplateW, kTemplateH);
    ClassifyResult best;
    best.confidence = -1.0;
    for (const char* p = kAtlasSymbols; *p; ++p) {
        auto it = atlas.templates.find(*p);
        if (it == atlas.templates.end()) continue;
        const BinaryImage& tmpl = it->second;
        int match = 0;
        for (size_t i = 0; i < norm.pixels.size(); ++i)
            if (norm.pixels[i] == tmpl.pixels[i]) match++;
        double score = static_cast<double>(match) / norm.pixels.size();
        if (score > best.confidence) {
            best.confidence = score;
            best.symbol = *p;
        }
    }
    return best;
}

PostprocessResult postprocess(const std::vector<RecognizedSymbol>& symbols,
                              const std::vector<PriceFormat>& formats, double min_conf) {
    PostprocessResult res;
    if (symbols.empty()) {
        res.reject_reason = "empty-string";
        return res;
    }
    std::string text;
    for (const RecognizedSymbol& s : symbols) {
        if (s.confidence < min_conf) {
            res.reject_reason = "low-confidence";
            return res;
        }
        text.push_back(s.symbol);
    }

    size_t dot_pos = text.find('.');
    bool has_dot = dot_pos != std::string::npos;
    if (has_dot) {
        if (text.find('.', dot_pos + 1) != std::string::npos || dot_pos == 0 ||
            text.size() - dot_pos - 1 != 2) {
            res.reject_reason = "format-reject";
            return res;
        }
    }
    int int_digits = static_cast<int>(has_dot ? dot_pos : text.size());

    const PriceFormat* matched = nullptr;
    for (const PriceFormat& f : formats) {
        if (f.has_dot() != has_dot) continue;
        if (int_digits >= f.int_min && int_digits <= f.int_max) {
            matched = &f;
            break;
        }
    }
    if (!matched) {
        res.reject_reason = "format-reject";
        return res;
    }

    long long value = 0;
    for (char c : text) {
        if (c == '.') continue;
        value = value * 10 + (c - '0');
    }
    res.price = Price{value, matched->frac_digits};
    return res;
}

}  // namespace pricetag
