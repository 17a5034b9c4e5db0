#include "pricetag/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "pricetag/font.hpp"
#include "pricetag/pnm.hpp"

namespace pricetag {

namespace fs = std::filesystem;

uint64_t mix_seed(uint64_t master, uint64_t index) {
    uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

void fill_rect(ColorImage& img, const Rect& r, uint8_t cr, uint8_t cg, uint8_t cb) {
    Rect c = intersect(r, Rect{0, 0, img.width, img.height});
    for (int y = c.y; y < c.bottom(); ++y)
        for (int x = c.x; x < c.right(); ++x) img.set(x, y, cr, cg, cb);
}

void draw_clutter(ColorImage& img, Rng& rng, const Rect& area, int blobs) {
    for (int i = 0; i < blobs; ++i) {
        int w = uniform_int(rng, area.w / 20 + 1, area.w / 4 + 2);
        int h = uniform_int(rng, area.h / 20 + 1, area.h / 4 + 2);
        int x = uniform_int(rng, area.x, std::max(area.x, area.right() - w));
        int y = uniform_int(rng, area.y, std::max(area.y, area.bottom() - h));
        uint8_t r = static_cast<uint8_t>(uniform_int(rng, 30, 170));
        uint8_t g = static_cast<uint8_t>(uniform_int(rng, 30, 170));
        uint8_t b = static_cast<uint8_t>(uniform_int(rng, 30, 170));
        fill_rect(img, Rect{x, y, w, h}, r, g, b);
    }
}

// Draws a digit string; returns the tight bounds of its ink.
Rect draw_string(ColorImage& img, const std::string& text, int left, int top, int cell_w,
                 int cell_h, int gap, uint8_t r, uint8_t g, uint8_t b) {
    Rect bounds{0, 0, 0, 0};
    int x = left;
    for (char c : text) {
        draw_glyph(img, c, x, top, cell_w, cell_h, r, g, b);
        bounds = union_rect(bounds, glyph_bounds(c, x, top, cell_w, cell_h));
        x += cell_w + gap;
    }
    return bounds;
}

}  // namespace

TagSpec make_tag_spec(int tag_type, const Price& price, int canvas_w, int canvas_h,
                      uint64_t seed) {
    if (tag_type < 1 || tag_type > 5) throw std::invalid_argument("tag_type must be 1..5");
    Rng rng(mix_seed(seed, 77));
    TagSpec s;
    s.tag_type = tag_type;
    s.price = price;
    s.canvas_w = canvas_w;
    s.canvas_h = canvas_h;
    switch (tag_type) {
        case 1:
            s.digit_h_frac = uniform(rng, 0.18, 0.22);
            s.price_cx = uniform(rng, 0.63, 0.73);
            s.price_cy = uniform(rng, 0.74, 0.82);
            break;
        case 2:
            s.digit_h_frac = uniform(rng, 0.20, 0.24);
            s.price_cx = uniform(rng, 0.25, 0.35);
            s.price_cy = uniform(rng, 0.72, 0.80);
            s.distractor_digits = true;
            break;
        case 3:
            s.digit_h_frac = uniform(rng, 0.15, 0.18);
            s.price_cx = uniform(rng, 0.44, 0.56);
            s.price_cy = uniform(rng, 0.77, 0.83);
            break;
        case 4:
            s.digit_h_frac = uniform(rng, 0.24, 0.28);
            s.price_cx = uniform(rng, 0.57, 0.67);
            s.price_cy = uniform(rng, 0.70, 0.78);
            break;
        case 5:
            s.digit_h_frac = uniform(rng, 0.17, 0.21);
            s.price_cx = uniform(rng, 0.30, 0.40);
            s.price_cy = uniform(rng, 0.79, 0.85);
            s.distractor_digits = true;
            break;
    }
    return s;
}

std::pair<ColorImage, GroundTruth> render_tag(const TagSpec& spec, uint64_t seed) {
    Rng rng(seed);
    ColorImage img(spec.canvas_w, spec.canvas_h, 72, 68, 66);
    const int w = spec.canvas_w, h = spec.canvas_h;
    draw_clutter(img, rng, Rect{0, 0, w, h}, 40);

    GroundTruth gt;
    gt.tag_type = spec.tag_type;
    gt.zone = Quad::from_rect(Rect{0, 0, 1, 1});

    if (spec.tag_absent) return {std::move(img), std::move(gt)};

    // White tag occupying most of the frame.
    int mx = static_cast<int>(uniform(rng, 0.02, 0.06) * w);
    int my = static_cast<int>(uniform(rng, 0.02, 0.06) * h);
    Rect tag{mx, my, w - 2 * mx, h - 2 * my};
    uint8_t paper = static_cast<uint8_t>(uniform_int(rng, 242, 252));
    fill_rect(img, tag, paper, paper, paper);

    uint8_t ink = static_cast<uint8_t>(uniform_int(rng, 10, 40));

    // Label pseudo-text: two short rows of small glyphs near the tag top.
    int small_h = std::max(6, static_cast<int>(std::lround(0.05 * h)));
    int small_w = std::max(4, static_cast<int>(std::lround(0.65 * small_h)));
    for (int row = 0; row < 2; ++row) {
        int count = uniform_int(rng, 6, 14);
        std::string text;
        for (int i = 0; i < count; ++i) text.push_back(static_cast<char>('0' + rng() % 10));
        int tx = tag.x + static_cast<int>(0.06 * tag.w);
        int ty = tag.y + static_cast<int>((0.06 + 0.10 * row) * tag.h);
        draw_string(img, text, tx, ty, small_w, small_h, small_w / 3 + 1, ink, ink, ink);
    }

    // Bar pattern standing in for a barcode, mid-left on the tag.
    {
        int bar_h = static_cast<int>(0.16 * h);
        int by = tag.y + static_cast<int>(0.38 * tag.h);
        int bx = tag.x + static_cast<int>(0.08 * tag.w);
        int nbars = uniform_int(rng, 14, 22);
        for (int i = 0; i < nbars; ++i) {
            int bw = uniform_int(rng, 1, 3);
            fill_rect(img, Rect{bx, by, bw, bar_h}, ink, ink, ink);
            bx += bw + uniform_int(rng, 2, 5);
        }
    }

    // Optional secondary digit group away from the price zone (the left/right
    // two-zone ambiguity).
    if (spec.distractor_digits) {
        int dh = static_cast<int>(std::lround(0.5 * spec.digit_h_frac * h));
        int dw = static_cast<int>(std::lround(0.71 * dh));
        std::string text;
        int count = uniform_int(rng, 2, 4);
        for (int i = 0; i < count; ++i) text.push_back(static_cast<char>('0' + rng() % 10));
        int tx = tag.x + static_cast<int>(0.70 * tag.w);
        int ty = tag.y + static_cast<int>(0.08 * tag.h);
        draw_string(img, text, tx, ty, dw, dh, dw / 5 + 1, ink, ink, ink);
    }

    // The price itself.
    std::string text = spec.price.to_string();
    int digit_h = static_cast<int>(std::lround(spec.digit_h_frac * h));
    int digit_w = static_cast<int>(std::lround(0.71 * digit_h));
    int gap = std::max(2, static_cast<int>(std::lround(0.15 * digit_w)));
    int total_w = static_cast<int>(text.size()) * (digit_w + gap) - gap;
    int left = static_cast<int>(std::lround(spec.price_cx * w - total_w / 2.0));
    int top = static_cast<int>(std::lround(spec.price_cy * h - digit_h / 2.0));
    left = std::clamp(left, tag.x + 2, std::max(tag.x + 2, tag.right() - total_w - 2));
    top = std::clamp(top, tag.y + 2, std::max(tag.y + 2, tag.bottom() - digit_h - 2));
    Rect zone = draw_string(img, text, left, top, digit_w, digit_h, gap, ink, ink, ink);

    gt.price = spec.price;
    gt.zone = Quad::from_rect(zone);
    return {std::move(img), std::move(gt)};
}

Quad rotate_quad(const Quad& q, int img_w, int img_h, double degrees) {
    Point center{img_w / 2.0, img_h / 2.0};
    Quad out = q;
    for (Point& p : out.corners) p = rotate_point(p, center, degrees);
    return out;
}

namespace {

ColorImage rotate_image(const ColorImage& img, double degrees) {
    ColorImage out(img.width, img.height, 66, 62, 60);
    Point center{img.width / 2.0, img.height / 2.0};
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x) {
            Point src = rotate_point({x + 0.5, y + 0.5}, center, -degrees);
            if (src.x < 0.5 || src.y < 0.5 || src.x > img.width - 0.5 ||
                src.y > img.height - 0.5)
                continue;
            // bilinear, pixel centers at (i+0.5, j+0.5)
            double fx = src.x - 0.5, fy = src.y - 0.5;
            int x0 = static_cast<int>(std::floor(fx));
            int y0 = static_cast<int>(std::floor(fy));
            double ax = fx - x0, ay = fy - y0;
            int x1 = std::min(x0 + 1, img.width - 1);
            int y1 = std::min(y0 + 1, img.height - 1);
            const uint8_t* p00 = img.at(x0, y0);
            const uint8_t* p10 = img.at(x1, y0);
            const uint8_t* p01 = img.at(x0, y1);
            const uint8_t* p11 = img.at(x1, y1);
            uint8_t* q = out.at(x, y);
            for (int c = 0; c < 3; ++c) {
                double v = (1 - ax) * (1 - ay) * p00[c] + ax * (1 - ay) * p10[c] +
                           (1 - ax) * ay * p01[c] + ax * ay * p11[c];
                q[c] = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    return out;
}

void gaussian_blur(ColorImage& img, double sigma) {
    int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    ColorImage tmp = img;
    auto cl = [](int v, int hi) { return std::clamp(v, 0, hi - 1); };
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const uint8_t* p = img.at(cl(x + i, img.width), y);
                for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * p[c];
            }
            uint8_t* q = tmp.at(x, y);
            for (int c = 0; c < 3; ++c)
                q[c] = static_cast<uint8_t>(std::clamp(std::lround(acc[c]), 0L, 255L));
        }
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double acc[3] = {0, 0, 0};
            for (int i = -radius; i <= radius; ++i) {
                const uint8_t* p = tmp.at(x, cl(y + i, img.height));
                for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * p[c];
            }
            uint8_t* q = img.at(x, y);
            for (int c = 0; c < 3; ++c)
                q[c] = static_cast<uint8_t>(std::clamp(std::lround(acc[c]), 0L, 255L));
        }
}

}  // namespace

ColorImage degrade(const ColorImage& img, const DegradationParams& d, uint64_t seed) {
    if (d.is_identity()) return img;
    ColorImage out = img;
    if (d.rotation_deg != 0.0) out = rotate_image(out, d.rotation_deg);
    if (d.contrast != 1.0) {
        for (uint8_t& p : out.pixels) {
            double v = 128.0 + d.contrast * (p - 128.0);
            p = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    if (d.flare != 0.0) {
        for (int y = 0; y < out.height; ++y)
            for (int x = 0; x < out.width; ++x) {
                double t = 0.5 * ((x + 0.5) / out.width + (y + 0.5) / out.height);
                double add = d.flare * (2.0 * t - 1.0);
                uint8_t* p = out.at(x, y);
                for (int c = 0; c < 3; ++c)
                    p[c] = static_cast<uint8_t>(std::clamp(std::lround(p[c] + add), 0L, 255L));
            }
    }
    if (d.blur_sigma > 0.0) gaussian_blur(out, d.blur_sigma);
    if (d.noise_sigma > 0.0) {
        Rng rng(mix_seed(seed, 0xD06));
        std::normal_distribution<double> dist(0.0, d.noise_sigma);
        for (uint8_t& p : out.pixels) {
            double v = p + dist(rng);
            p = static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

DatasetMix DatasetMix::paper_default() {
    // 708-image composition: 29 absent, 80 angled, 90 blurred, 150 low
    // contrast, 50 washed out, remainder clean.
    DatasetMix m;
    m.absent = 29.0 / 708.0;
    m.angle = 80.0 / 708.0;
    m.blur = 90.0 / 708.0;
    m.contrast = 150.0 / 708.0;
    m.washed = 50.0 / 708.0;
    m.noise = 50.0 / 708.0;
    return m;
}

namespace {

enum class DegClass { Clean, Blur, Contrast, Washed, Angle, Noise, Absent };

std::vector<DegClass> assign_classes(int n, const DatasetMix& mix) {
    std::vector<DegClass> out(n, DegClass::Clean);
    int i = 0;
    auto take = [&](double frac, DegClass c) {
        int k = static_cast<int>(std::lround(frac * n));
        for (int j = 0; j < k && i < n; ++j) out[i++] = c;
    };
    take(mix.absent, DegClass::Absent);
    take(mix.angle, DegClass::Angle);
    take(mix.blur, DegClass::Blur);
    take(mix.contrast, DegClass::Contrast);
    take(mix.washed, DegClass::Washed);
    take(mix.noise, DegClass::Noise);
    return out;
}

}  // namespace

std::string generate_dataset(int n, const DatasetMix& mix, uint64_t seed,
                             const std::string& out_dir) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    fs::create_directories(out_dir);
    std::vector<DegClass> classes = assign_classes(n, mix);
    std::vector<ManifestRow> rows;
    rows.reserve(n);

    for (int i = 0; i < n; ++i) {
        uint64_t s = mix_seed(seed, static_cast<uint64_t>(i));
        Rng rng(s);

        double t = uniform(rng, 0.0, 1.0);
        int w = static_cast<int>(std::lround(800 + t * 550));
        int h = static_cast<int>(std::lround(400 + t * 300));
        int tag_type = uniform_int(rng, 1, 5);
        bool frac_price = (tag_type == 1 || tag_type == 2 || tag_type == 5);
        Price price;
        if (frac_price) {
            price = Price{static_cast<long long>(uniform_int(rng, 1, 99999)), 2};
        } else {
            price = Price{static_cast<long long>(uniform_int(rng, 1, 9999)), 0};
        }

        TagSpec spec = make_tag_spec(tag_type, price, w, h, s);
        spec.tag_absent = classes[i] == DegClass::Absent;

        DegradationParams d;
        d.tag_absent = spec.tag_absent;
        switch (classes[i]) {
            case DegClass::Clean:
            case DegClass::Absent:
                break;
            case DegClass::Blur:
                d.blur_sigma = uniform(rng, 0.8, 1.8);
                break;
            case DegClass::Contrast:
                d.contrast = uniform(rng, 0.35, 0.60);
                break;
            case DegClass::Washed:
                d.contrast = uniform(rng, 0.28, 0.40);
                d.flare = uniform(rng, 25.0, 45.0);
                break;
            case DegClass::Angle:
                d.rotation_deg = uniform(rng, 2.0, 8.0) * (rng() % 2 ? 1.0 : -1.0);
                break;
            case DegClass::Noise:
                d.noise_sigma = uniform(rng, 6.0, 14.0);
                break;
        }

        auto [img, gt] = render_tag(spec, mix_seed(s, 1));
        gt.degradation = d;
        img = degrade(img, d, mix_seed(s, 2));
        if (d.rotation_deg != 0.0) gt.zone = rotate_quad(gt.zone, w, h, d.rotation_deg);

        char name[32];
        std::snprintf(name, sizeof(name), "img_%05d.ppm", i);
        std::string path = (fs::path(out_dir) / name).string();
        save_ppm(img, path);

        ManifestRow row;
        row.path = name;
        row.tag_type = tag_type;
        row.price_minor = spec.tag_absent ? 0 : price.minor_units;
        row.frac_digits = spec.tag_absent ? 0 : price.frac_digits;
        row.zone = gt.zone;
        row.degradation = d;
        row.tag_absent = spec.tag_absent;
        rows.push_back(std::move(row));
    }

    std::string manifest_path = (fs::path(out_dir) / "manifest.csv").string();
    write_manifest(rows, manifest_path);
    return manifest_path;
}

void write_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write manifest: " + path);
    f << "# pricetag-manifest v1\n";
    f << "path,tag_type,price_minor,frac_digits,zx0,zy0,zx1,zy1,zx2,zy2,zx3,zy3,"
         "blur_sigma,noise_sigma,contrast,flare,rotation_deg,tag_absent\n";
    f.setf(std::ios::fmtflags(0), std::ios::floatfield);
    f.precision(10);
    for (const ManifestRow& r : rows) {
        f << r.path << ',' << r.tag_type << ',' << r.price_minor << ',' << r.frac_digits;
        for (const Point& p : r.zone.corners) f << ',' << p.x << ',' << p.y;
        f << ',' << r.degradation.blur_sigma << ',' << r.degradation.noise_sigma << ','
          << r.degradation.contrast << ',' << r.degradation.flare << ','
          << r.degradation.rotation_deg << ',' << (r.tag_absent ? 1 : 0) << '\n';
    }
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open manifest: " + path);
    std::string line;
    if (!std::getline(f, line) || line.rfind("# pricetag-manifest", 0) != 0)
        throw std::runtime_error("manifest missing version header: " + path);
    std::getline(f, line);  // column header
    std::vector<ManifestRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 18)
            throw std::runtime_error("bad manifest row (want 18 fields): " + line);
        ManifestRow r;
        // image paths are stored relative to the manifest
        fs::path img_path(fields[0]);
        r.path = img_path.is_absolute()
                     ? img_path.string()
                     : (fs::path(path).parent_path() / img_path).string();
        r.tag_type = std::stoi(fields[1]);
        r.price_minor = std::stoll(fields[2]);
        r.frac_digits = std::stoi(fields[3]);
        for (int i = 0; i < 4; ++i) {
            r.zone.corners[i].x = std::stod(fields[4 + 2 * i]);
            r.zone.corners[i].y = std::stod(fields[5 + 2 * i]);
        }
        r.degradation.blur_sigma = std::stod(fields[12]);
        r.degradation.noise_sigma = std::stod(fields[13]);
        r.degradation.contrast = std::stod(fields[14]);
        r.degradation.flare = std::stod(fields[15]);
        r.degradation.rotation_deg = std::stod(fields[16]);
        r.tag_absent = std::stoi(fields[17]) != 0;
        r.degradation.tag_absent = r.tag_absent;
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace pricetag
