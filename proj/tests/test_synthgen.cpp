#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pricetag/pnm.hpp"
#include "pricetag/synthgen.hpp"

using namespace pricetag;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Dark-ink pixel count inside the quad (point-in-convex-quad test).
long long ink_inside(const ColorImage& img, const Quad& zone) {
    long long inside = 0;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y)[0] >= 96) continue;  // ink is near-black on white tag
            Point p{x + 0.5, y + 0.5};
            bool in = true;
            for (int i = 0; i < 4 && in; ++i) {
                Point a = zone.corners[i], b = zone.corners[(i + 1) % 4];
                double cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                in = cr >= -1e-9;
            }
            if (in) inside++;
        }
    return inside;
}

}  // namespace

TEST_CASE("mix_seed spreads indices") {
    uint64_t a = mix_seed(42, 0);
    uint64_t b = mix_seed(42, 1);
    uint64_t c = mix_seed(43, 0);
    CHECK(a != b);
    CHECK(a != c);
    CHECK(mix_seed(42, 0) == a);  // pure function
}

TEST_CASE("render_tag is deterministic") {
    TagSpec spec = make_tag_spec(1, Price{12999, 2}, 900, 460, 5);
    auto [img1, gt1] = render_tag(spec, 77);
    auto [img2, gt2] = render_tag(spec, 77);
    CHECK(img1.pixels == img2.pixels);
    CHECK(gt1.zone.corners[0].x == gt2.zone.corners[0].x);
    auto [img3, gt3] = render_tag(spec, 78);
    CHECK(img1.pixels != img3.pixels);
}

TEST_CASE("ground-truth zone tightly bounds the price ink") {
    for (int type = 1; type <= 5; ++type) {
        TagSpec spec = make_tag_spec(type, Price{4950, 2}, 1000, 520, 11 + type);
        auto [img, gt] = render_tag(spec, 100 + type);
        REQUIRE(gt.price.has_value());
        CHECK(gt.price->minor_units == 4950);
        CHECK(gt.tag_type == type);
        CHECK(gt.zone.area() > 0.0);
        // dark pixels inside the zone rect should dominate the zone area
        Rect zr{static_cast<int>(gt.zone.corners[0].x),
                static_cast<int>(gt.zone.corners[0].y),
                static_cast<int>(gt.zone.corners[2].x - gt.zone.corners[0].x + 1),
                static_cast<int>(gt.zone.corners[2].y - gt.zone.corners[0].y + 1)};
        long long ink = 0;
        for (int y = zr.y; y < zr.bottom() && y < img.height; ++y)
            for (int x = zr.x; x < zr.right() && x < img.width; ++x)
                if (img.at(x, y)[0] < 96) ink++;
        CHECK(ink > 0);
        // edge rows/cols of the tight box carry ink
        bool top = false, left = false;
        for (int x = zr.x; x < zr.right(); ++x)
            if (img.at(x, zr.y)[0] < 96) top = true;
        for (int y = zr.y; y < zr.bottom(); ++y)
            if (img.at(zr.x, y)[0] < 96) left = true;
        CHECK(top);
        CHECK(left);
    }
}

TEST_CASE("tag_absent renders clutter without a price") {
    TagSpec spec = make_tag_spec(2, Price{999, 2}, 800, 400, 3);
    spec.tag_absent = true;
    auto [img, gt] = render_tag(spec, 9);
    CHECK_FALSE(gt.price.has_value());
    CHECK(img.width == 800);
    CHECK(img.height == 400);
}

TEST_CASE("degrade identity passes pixels through") {
    TagSpec spec = make_tag_spec(3, Price{150, 0}, 640, 320, 21);
    auto [img, gt] = render_tag(spec, 4);
    DegradationParams d;
    REQUIRE(d.is_identity());
    ColorImage out = degrade(img, d, 123);
    CHECK(out.pixels == img.pixels);
}

TEST_CASE("contrast reduction narrows the range around mid-gray") {
    ColorImage img(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            uint8_t v = (x + y) % 2 ? 255 : 0;
            img.set(x, y, v, v, v);
        }
    DegradationParams d;
    d.contrast = 0.3;
    ColorImage out = degrade(img, d, 1);
    uint8_t lo = 255, hi = 0;
    for (uint8_t p : out.pixels) {
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    // 128 +- 0.3*128 -> about [89, 166]
    CHECK(lo >= 86);
    CHECK(lo <= 92);
    CHECK(hi >= 163);
    CHECK(hi <= 169);
}

TEST_CASE("rotation moves the ground-truth quad consistently") {
    TagSpec spec = make_tag_spec(1, Price{2599, 2}, 900, 460, 31);
    auto [img, gt] = render_tag(spec, 55);
    double deg = 6.0;
    DegradationParams d;
    d.rotation_deg = deg;
    ColorImage rot = degrade(img, d, 2);
    Quad rz = rotate_quad(gt.zone, img.width, img.height, deg);
    CHECK(rz.area() == doctest::Approx(gt.zone.area()).epsilon(1e-6));
    // the rotated zone keeps roughly the ink count the original zone had
    long long before = ink_inside(img, gt.zone);
    long long after = ink_inside(rot, rz);
    CHECK(before > 0);
    CHECK(static_cast<double>(after) >= 0.8 * before);
    CHECK(static_cast<double>(after) <= 1.2 * before);
    // zero rotation is the identity on quads
    Quad same = rotate_quad(gt.zone, img.width, img.height, 0.0);
    for (int i = 0; i < 4; ++i) {
        CHECK(same.corners[i].x == doctest::Approx(gt.zone.corners[i].x));
        CHECK(same.corners[i].y == doctest::Approx(gt.zone.corners[i].y));
    }
}

TEST_CASE("noise changes pixels but stays deterministic per seed") {
    ColorImage img(48, 48, 128, 128, 128);
    DegradationParams d;
    d.noise_sigma = 10.0;
    ColorImage a = degrade(img, d, 500);
    ColorImage b = degrade(img, d, 500);
    ColorImage c = degrade(img, d, 501);
    CHECK(a.pixels == b.pixels);
    CHECK(a.pixels != c.pixels);
    CHECK(a.pixels != img.pixels);
}

TEST_CASE("blur preserves flat regions and smooths edges") {
    ColorImage img(40, 40, 200, 200, 200);
    for (int y = 0; y < 40; ++y)
        for (int x = 20; x < 40; ++x) img.set(x, y, 20, 20, 20);
    DegradationParams d;
    d.blur_sigma = 1.5;
    ColorImage out = degrade(img, d, 0);
    CHECK(static_cast<int>(out.at(2, 20)[0]) == 200);
    CHECK(static_cast<int>(out.at(38, 20)[0]) == 20);
    int edge = out.at(20, 20)[0];
    CHECK(edge > 40);
    CHECK(edge < 180);
}

TEST_CASE("generate_dataset is byte-identical per seed and honors the mix") {
    fs::path dir_a = fs::temp_directory_path() / "pricetag_gen_a";
    fs::path dir_b = fs::temp_directory_path() / "pricetag_gen_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    DatasetMix mix = DatasetMix::paper_default();
    int n = 60;
    std::string ma = generate_dataset(n, mix, 2024, dir_a.string());
    std::string mb = generate_dataset(n, mix, 2024, dir_b.string());

    std::vector<ManifestRow> rows = read_manifest(ma);
    REQUIRE(static_cast<int>(rows.size()) == n);

    // identical manifests modulo the directory prefix
    std::vector<ManifestRow> rows_b = read_manifest(mb);
    REQUIRE(rows_b.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(fs::path(rows[i].path).filename() == fs::path(rows_b[i].path).filename());
        CHECK(rows[i].price_minor == rows_b[i].price_minor);
        CHECK(rows[i].tag_absent == rows_b[i].tag_absent);
        CHECK(slurp(rows[i].path) == slurp(rows_b[i].path));
    }

    // class counts follow the requested proportions
    int absent = 0, angled = 0, blurred = 0, low_contrast = 0, noisy = 0;
    for (const ManifestRow& r : rows) {
        if (r.tag_absent) absent++;
        if (r.degradation.rotation_deg != 0.0) angled++;
        if (r.degradation.blur_sigma > 0.0) blurred++;
        if (r.degradation.contrast < 1.0) low_contrast++;
        if (r.degradation.noise_sigma > 0.0) noisy++;
    }
    auto near = [n](int got, double frac) {
        return std::abs(got - frac * n) <= 1.0 + 0.02 * n;
    };
    CHECK(near(absent, mix.absent));
    CHECK(near(angled, mix.angle));
    CHECK(near(blurred, mix.blur));
    CHECK(near(low_contrast, mix.contrast + mix.washed));
    CHECK(near(noisy, mix.noise));

    // every referenced image loads, sizes within the advertised envelope
    for (size_t i = 0; i < rows.size(); i += 7) {
        ColorImage img = load_image(rows[i].path);
        CHECK(img.width >= 800);
        CHECK(img.width <= 1350);
        CHECK(img.height >= 400);
        CHECK(img.height <= 700);
        if (!rows[i].tag_absent) {
            REQUIRE((rows[i].frac_digits == 0 || rows[i].frac_digits == 2));
            CHECK(rows[i].zone.area() > 0.0);
        }
    }

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}

TEST_CASE("manifest round trip") {
    fs::path dir = fs::temp_directory_path() / "pricetag_manifest_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::vector<ManifestRow> rows(2);
    rows[0].path = "img_00000.ppm";
    rows[0].tag_type = 2;
    rows[0].price_minor = 12999;
    rows[0].frac_digits = 2;
    rows[0].zone = Quad::from_rect(Rect{100, 200, 300, 80});
    rows[0].degradation.blur_sigma = 1.25;
    rows[0].degradation.rotation_deg = -4.5;
    rows[1].path = "img_00001.ppm";
    rows[1].tag_absent = true;
    std::string path = (dir / "manifest.csv").string();
    write_manifest(rows, path);
    std::vector<ManifestRow> back = read_manifest(path);
    REQUIRE(back.size() == 2);
    CHECK(back[0].tag_type == 2);
    CHECK(back[0].price_minor == 12999);
    CHECK(back[0].frac_digits == 2);
    CHECK(back[0].zone.corners[0].x == doctest::Approx(100.0));
    CHECK(back[0].zone.corners[2].y == doctest::Approx(280.0));
    CHECK(back[0].degradation.blur_sigma == doctest::Approx(1.25));
    CHECK(back[0].degradation.rotation_deg == doctest::Approx(-4.5));
    CHECK(back[1].tag_absent);
    fs::remove_all(dir);
}
