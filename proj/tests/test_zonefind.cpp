#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pricetag/zonefind.hpp"

using namespace pricetag;

namespace {

Component make_comp(int x, int y, int w, int h, long long count = -1) {
    Component c;
    c.bbox = Rect{x, y, w, h};
    c.pixel_count = count >= 0 ? count : static_cast<long long>(w) * h / 2;
    c.centroid = {x + w / 2.0, y + h / 2.0};
    return c;
}

TagModel test_model() {
    TagModel m;
    m.digit_h_frac_min = 0.12;
    m.digit_h_frac_max = 0.25;
    m.digit_aspect_min = 0.45;
    m.digit_aspect_max = 0.80;
    m.price_zone_prior = {0.0, 0.5, 1.0, 0.5};
    m.formats = {{1, 3, 2}, {1, 4, 0}};
    m.max_gap_factor = 1.5;
    m.v_overlap_min = 0.6;
    m.tau_zone = 0.5;
    return m;
}

// Six glyphs of "129.99": digit boxes 40x70 with 15px gaps, dot 14x14 on the
// baseline between the 3rd and 4th digit.
std::vector<Component> price_components(int x0 = 300, int y0 = 380) {
    std::vector<Component> comps;
    int x = x0;
    for (int i = 0; i < 3; ++i) {
        comps.push_back(make_comp(x, y0, 40, 70, 1400));
        x += 55;
    }
    comps.push_back(make_comp(x, y0 + 56, 14, 14, 170));  // dot
    x += 25;
    for (int i = 0; i < 2; ++i) {
        comps.push_back(make_comp(x, y0, 40, 70, 1400));
        x += 55;
    }
    return comps;
}

}  // namespace

TEST_CASE("derive_size_filter ranges") {
    TagModel m = test_model();
    SizeFilterParams p = derive_size_filter(m, 1000, 500);
    CHECK(p.h_min == doctest::Approx(42.0));
    CHECK(p.h_max == doctest::Approx(162.5));
    CHECK(p.w_min == doctest::Approx(42.0 * 0.45));
    CHECK(p.w_max == doctest::Approx(162.5 * 0.80));

    // clamp when slack pushes the floor below 4
    TagModel tiny = m;
    tiny.digit_h_frac_min = 0.005;
    SizeFilterParams pt = derive_size_filter(tiny, 1000, 500);
    CHECK(pt.h_min == doctest::Approx(4.0));

    // linearity in image size
    SizeFilterParams p2 = derive_size_filter(m, 2000, 1000);
    CHECK(p2.h_min == doctest::Approx(2 * p.h_min));
    CHECK(p2.h_max == doctest::Approx(2 * p.h_max));
    CHECK(p2.w_max == doctest::Approx(2 * p.w_max));
}

TEST_CASE("size_filter keeps digits, drops bars and noise") {
    TagModel m = test_model();
    SizeFilterParams p = derive_size_filter(m, 1000, 500);

    CHECK(size_filter({}, p).empty());

    Component digit = make_comp(100, 100, 45, 70, 1500);
    Component bar = make_comp(200, 100, 3, 70, 180);       // barcode bar
    Component speck = make_comp(300, 100, 2, 1, 2);        // noise (below dot floor)
    Component huge = make_comp(0, 0, 500, 400, 90000);     // background blob
    std::vector<Component> out = size_filter({digit, bar, speck, huge}, p);
    REQUIRE(out.size() == 1);
    CHECK(out[0].bbox.x == 100);

    // dot candidates bypass the height floor
    Component dot = make_comp(400, 160, 12, 12, 130);
    out = size_filter({digit, dot}, p);
    CHECK(out.size() == 2);

    // filtering is idempotent and output is a subset of input
    std::vector<Component> again = size_filter(out, p);
    CHECK(again.size() == out.size());
}

TEST_CASE("cluster_by_format groups a price string with its dot") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    std::vector<Component> comps = price_components();
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);

    REQUIRE(clusters.size() == 1);
    const Cluster& c = clusters[0];
    CHECK(c.members.size() == 5);
    REQUIRE(c.dot.has_value());
    CHECK(c.dot->bbox.h == 14);
    CHECK(c.digits_after_dot() == 2);
    REQUIRE(c.matched_format.has_value());
    CHECK(c.matched_format->frac_digits == 2);
    // members sorted left to right
    for (size_t i = 1; i < c.members.size(); ++i)
        CHECK(c.members[i - 1].bbox.x < c.members[i].bbox.x);
    // bbox covers all members and the dot
    for (const Component& mcomp : c.members) {
        CHECK(c.bbox.x <= mcomp.bbox.x);
        CHECK(c.bbox.right() >= mcomp.bbox.right());
    }
}

TEST_CASE("separated digit groups stay separate") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    std::vector<Component> comps;
    for (int i = 0; i < 2; ++i) comps.push_back(make_comp(50 + i * 55, 380, 40, 70, 1400));
    for (int i = 0; i < 3; ++i) comps.push_back(make_comp(700 + i * 55, 380, 40, 70, 1400));
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].members.size() == 2);
    CHECK(clusters[1].members.size() == 3);
}

TEST_CASE("stacked text lines do not merge") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    std::vector<Component> comps;
    // two rows interleaved in x
    for (int i = 0; i < 3; ++i) comps.push_back(make_comp(100 + i * 55, 100, 40, 70, 1400));
    for (int i = 0; i < 3; ++i) comps.push_back(make_comp(128 + i * 55, 380, 40, 70, 1400));
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].members.size() == 3);
    CHECK(clusters[1].members.size() == 3);
}

TEST_CASE("single component forms a singleton cluster") {
    TagModel m = test_model();
    std::vector<Cluster> clusters =
        cluster_by_format({make_comp(500, 400, 40, 70, 1400)}, m, {70, 44});
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0].members.size() == 1);
    REQUIRE(clusters[0].matched_format.has_value());
    CHECK(clusters[0].matched_format->frac_digits == 0);  // 1 digit, no dot
}

TEST_CASE("every component lands in exactly one cluster") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    std::vector<Component> comps = price_components();
    comps.push_back(make_comp(50, 50, 38, 66, 1300));   // stray digit elsewhere
    comps.push_back(make_comp(900, 460, 12, 12, 120));  // stray dot-sized blob
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);
    size_t placed = 0;
    for (const Cluster& c : clusters) {
        placed += c.members.size();
        if (c.dot) placed++;
    }
    CHECK(placed == comps.size());
}

TEST_CASE("clustering is translation invariant") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    std::vector<Component> comps = price_components();
    std::vector<Component> moved = comps;
    for (Component& c : moved) {
        c.bbox.x += 13;
        c.bbox.y += 7;
    }
    std::vector<Cluster> a = cluster_by_format(comps, m, est);
    std::vector<Cluster> b = cluster_by_format(moved, m, est);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(b[i].bbox.x == a[i].bbox.x + 13);
        CHECK(b[i].bbox.y == a[i].bbox.y + 7);
        CHECK(b[i].members.size() == a[i].members.size());
        CHECK(b[i].dot.has_value() == a[i].dot.has_value());
    }
}

TEST_CASE("extend_for_missing_digits") {
    TagModel m = test_model();
    DigitSizeEstimate est{70, 44};
    int advance = static_cast<int>(std::lround(1.08 * est.digit_w));

    // dot with one digit after it -> widen by one advance
    std::vector<Component> comps = price_components();
    comps.pop_back();  // drop the last digit
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);
    REQUIRE(clusters.size() == 1);
    REQUIRE(clusters[0].dot.has_value());
    CHECK(clusters[0].digits_after_dot() == 1);
    Cluster ext = extend_for_missing_digits(clusters[0], est, 1000);
    CHECK(ext.extended);
    CHECK(ext.bbox.right() == clusters[0].bbox.right() + advance);
    CHECK(ext.bbox.x == clusters[0].bbox.x);
    CHECK(ext.bbox.y == clusters[0].bbox.y);
    CHECK(ext.bbox.h == clusters[0].bbox.h);

    // two digits after the dot -> unchanged
    std::vector<Cluster> full = cluster_by_format(price_components(), m, est);
    Cluster same = extend_for_missing_digits(full[0], est, 1000);
    CHECK_FALSE(same.extended);
    CHECK(same.bbox.right() == full[0].bbox.right());

    // zero digits after the dot, near the border -> two advances, clamped
    std::vector<Component> stub;
    stub.push_back(make_comp(880, 380, 40, 70, 1400));
    stub.push_back(make_comp(928, 436, 14, 14, 170));  // dot
    std::vector<Cluster> sc = cluster_by_format(stub, m, est);
    REQUIRE(sc.size() == 1);
    REQUIRE(sc[0].dot.has_value());
    Cluster clamped = extend_for_missing_digits(sc[0], est, 1000);
    CHECK(clamped.extended);
    CHECK(clamped.bbox.right() == std::min(1000, sc[0].bbox.right() + 2 * advance));
}

TEST_CASE("score_cluster follows the stated terms") {
    TagModel m = test_model();
    DigitSizeEstimate est{92, 58};  // center of the digit-height band at img_h 500
    // price cluster filling the prior zone, median height at the band center
    std::vector<Component> comps;
    int x = 300;
    for (int i = 0; i < 3; ++i) {
        comps.push_back(make_comp(x, 330, 58, 92, 2600));
        x += 72;
    }
    std::vector<Cluster> clusters = cluster_by_format(comps, m, est);
    REQUIRE(clusters.size() == 1);
    double good = score_cluster(clusters[0], m, 1000, 500);
    CHECK(good >= 0.9);

    // translated outside the prior -> layout term zero
    std::vector<Component> far = comps;
    for (Component& c : far) c.bbox.y = 20;
    std::vector<Cluster> fc = cluster_by_format(far, m, est);
    CHECK(score_cluster(fc[0], m, 1000, 500) <= 0.2);

    // unmatched singleton capped by the format term
    TagModel strict = m;
    strict.formats = {{2, 3, 2}};  // needs a dot and >= 2 digits
    std::vector<Cluster> single =
        cluster_by_format({make_comp(400, 330, 58, 92, 2600)}, strict, est);
    REQUIRE(single.size() == 1);
    CHECK_FALSE(single[0].matched_format.has_value());
    CHECK(score_cluster(single[0], strict, 1000, 500) <= 0.2);
}

TEST_CASE("select_best picks argmax with tie rules and rejects below tau") {
    TagModel m = test_model();
    DigitSizeEstimate est{92, 58};
    std::vector<Component> comps;
    int x = 300;
    for (int i = 0; i < 3; ++i) {
        comps.push_back(make_comp(x, 330, 58, 92, 2600));
        x += 72;
    }
    std::vector<Cluster> good = cluster_by_format(comps, m, est);

    // only one branch has a cluster
    std::optional<Cluster> pick = select_best({}, good, m, 1000, 500);
    REQUIRE(pick.has_value());
    CHECK(pick->branch == Branch::Raw);

    // identical clusters in both branches -> opened wins
    pick = select_best(good, good, m, 1000, 500);
    REQUIRE(pick.has_value());
    CHECK(pick->branch == Branch::Opened);

    // everything below tau -> reject
    TagModel high = m;
    high.tau_zone = 0.999;
    std::vector<Component> weak = {make_comp(100, 50, 58, 92, 2600)};  // outside prior
    std::vector<Cluster> wc = cluster_by_format(weak, high, est);
    CHECK_FALSE(select_best(wc, {}, high, 1000, 500).has_value());

    // raising tau never converts a reject into an accept
    TagModel lo = m, hi = m;
    lo.tau_zone = 0.3;
    hi.tau_zone = 0.7;
    bool acc_lo = select_best(wc, {}, lo, 1000, 500).has_value();
    bool acc_hi = select_best(wc, {}, hi, 1000, 500).has_value();
    CHECK((acc_lo || !acc_hi));
}
