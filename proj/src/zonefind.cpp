#include "pricetag/zonefind.hpp"

#include <algorithm>
#include <cmath>

namespace pricetag {

Rect NormRect::to_pixels(int img_w, int img_h) const {
    int px = static_cast<int>(std::lround(x * img_w));
    int py = static_cast<int>(std::lround(y * img_h));
    int pw = std::max(1, static_cast<int>(std::lround(w * img_w)));
    int ph = std::max(1, static_cast<int>(std::lround(h * img_h)));
    pw = std::min(pw, img_w - px);
    ph = std::min(ph, img_h - py);
    return Rect{px, py, pw, ph};
}

DigitSizeEstimate TagModel::estimate_digit_size(int img_h) const {
    DigitSizeEstimate est;
    double hf = 0.5 * (digit_h_frac_min + digit_h_frac_max);
    double af = 0.5 * (digit_aspect_min + digit_aspect_max);
    est.digit_h = std::max(4, static_cast<int>(std::lround(hf * img_h)));
    est.digit_w = std::max(4, static_cast<int>(std::lround(af * est.digit_h)));
    if (est.digit_w >= est.digit_h) est.digit_w = est.digit_h - 1;
    return est;
}

bool SizeFilterParams::pass_digit(const Component& c) const {
    double h = c.bbox.h, w = c.bbox.w;
    if (h < h_min || h > h_max) return false;
    if (w < w_min || w > w_max) return false;
    double n = static_cast<double>(c.pixel_count);
    if (n < area_min || n > area_max) return false;
    double aspect = w / h;
    return aspect >= aspect_min && aspect <= aspect_max;
}

bool SizeFilterParams::pass_dot(const Component& c) const {
    double h = c.bbox.h, w = c.bbox.w;
    if (h < 2 || w < 2) return false;
    double cap = 0.35 * h_max;
    if (h > cap || w > cap) return false;
    double aspect = w / h;
    if (aspect < 0.4 || aspect > 2.5) return false;
    double fill = static_cast<double>(c.pixel_count) / (w * h);
    return fill >= 0.5;  // dots are solid blobs
}

SizeFilterParams derive_size_filter(const TagModel& model, int img_w, int img_h) {
    (void)img_w;
    SizeFilterParams p;
    // +-30% slack: soft restrictions so real digits are never filtered out.
    p.h_min = std::max(4.0, 0.7 * model.digit_h_frac_min * img_h);
    p.h_max = 1.3 * model.digit_h_frac_max * img_h;
    p.w_min = std::max(2.0, p.h_min * model.digit_aspect_min);
    p.w_max = p.h_max * model.digit_aspect_max;
    p.area_min = 0.15 * p.w_min * p.h_min;
    p.area_max = p.w_max * p.h_max;
    p.aspect_min = 0.7 * model.digit_aspect_min;
    p.aspect_max = 1.3 * model.digit_aspect_max;
    return p;
}

std::vector<Component> size_filter(const std::vector<Component>& comps,
                                   const SizeFilterParams& p) {
    std::vector<Component> out;
    for (const Component& c : comps) {
        if (p.pass_digit(c) || p.pass_dot(c)) out.push_back(c);
    }
    return out;
}

int Cluster::digits_after_dot() const {
    if (!dot) return -1;
    double dot_cx = dot->bbox.x + dot->bbox.w / 2.0;
    int n = 0;
    for (const Component& m : members) {
        if (m.bbox.x + m.bbox.w / 2.0 > dot_cx) n++;
    }
    return n;
}

namespace {

Rect members_bbox(const std::vector<Component>& members, const std::optional<Component>& dot) {
    Rect r{0, 0, 0, 0};
    for (const Component& m : members) r = union_rect(r, m.bbox);
    if (dot) r = union_rect(r, dot->bbox);
    return r;
}

double median_height(const std::vector<Component>& members) {
    std::vector<int> hs;
    hs.reserve(members.size());
    for (const Component& m : members) hs.push_back(m.bbox.h);
    std::sort(hs.begin(), hs.end());
    size_t n = hs.size();
    if (n % 2 == 1) return hs[n / 2];
    return 0.5 * (hs[n / 2 - 1] + hs[n / 2]);
}

double median_bottom(const std::vector<Component>& members) {
    std::vector<int> bs;
    bs.reserve(members.size());
    for (const Component& m : members) bs.push_back(m.bbox.bottom());
    std::sort(bs.begin(), bs.end());
    size_t n = bs.size();
    if (n % 2 == 1) return bs[n / 2];
    return 0.5 * (bs[n / 2 - 1] + bs[n / 2]);
}

bool chainable(const Component& a, const Component& b, const TagModel& model,
               const DigitSizeEstimate& est) {
    int overlap = std::min(a.bbox.bottom(), b.bbox.bottom()) - std::max(a.bbox.y, b.bbox.y);
    if (overlap < model.v_overlap_min * std::min(a.bbox.h, b.bbox.h)) return false;
    // gap measured against the wider of the model estimate and the actual
    // neighbors, so an undershooting estimate cannot split a price string
    double ref_w = std::max({static_cast<double>(est.digit_w),
                             static_cast<double>(a.bbox.w), static_cast<double>(b.bbox.w)});
    double gap = b.bbox.x - a.bbox.right();
    if (gap > model.max_gap_factor * ref_w) return false;
    double ratio = static_cast<double>(std::max(a.bbox.h, b.bbox.h)) /
                   std::max(1, std::min(a.bbox.h, b.bbox.h));
    return ratio <= 1.67;
}

void match_format(Cluster& c, const TagModel& model) {
    int total = static_cast<int>(c.members.size());
    int after = c.digits_after_dot();
    const PriceFormat* best = nullptr;
    for (const PriceFormat& f : model.formats) {
        bool fits;
        if (c.dot) {
            int before = total - after;
            fits = f.has_dot() && before >= f.int_min && before <= f.int_max && after <= 2;
        } else {
            fits = !f.has_dot() && total >= f.int_min && total <= f.int_max;
        }
        if (!fits) continue;
        // ties broken toward the format admitting more digits
        if (!best || f.int_max + f.frac_digits > best->int_max + best->frac_digits) best = &f;
    }
    if (best) c.matched_format = *best;
}

}  // namespace

std::vector<Cluster> cluster_by_format(const std::vector<Component>& comps,
                                       const TagModel& model,
                                       const DigitSizeEstimate& digit_est) {
    std::vector<Component> digits, dots;
    for (const Component& c : comps) {
        double aspect = static_cast<double>(c.bbox.w) / std::max(1, c.bbox.h);
        double fill = static_cast<double>(c.pixel_count) /
                      (static_cast<double>(c.bbox.w) * c.bbox.h);
        bool dotlike = c.bbox.h <= 0.45 * digit_est.digit_h && aspect >= 0.4 &&
                       aspect <= 2.5 && fill >= 0.5;
        (dotlike ? dots : digits).push_back(c);
    }
    auto by_x = [](const Component& a, const Component& b) {
        if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
        return a.bbox.y < b.bbox.y;
    };
    std::sort(digits.begin(), digits.end(), by_x);
    std::sort(dots.begin(), dots.end(), by_x);

    // Left-to-right chaining; a component joins the open chain whose tail it
    // overlaps best, so stacked text lines separate cleanly.
    std::vector<std::vector<Component>> chains;
    for (const Component& c : digits) {
        int best = -1;
        int best_overlap = -1;
        for (size_t i = 0; i < chains.size(); ++i) {
            const Component& tail = chains[i].back();
            if (!chainable(tail, c, model, digit_est)) continue;
            int overlap =
                std::min(tail.bbox.bottom(), c.bbox.bottom()) - std::max(tail.bbox.y, c.bbox.y);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) {
            chains.push_back({c});
        } else {
            chains[best].push_back(c);
        }
    }

    std::vector<Cluster> clusters;
    for (auto& chain : chains) {
        Cluster cl;
        cl.members = std::move(chain);
        clusters.push_back(std::move(cl));
    }

    // Dot attachment: small solid component sitting on the members' baseline,
    // between or adjacent to them; at most one dot per cluster.
    std::vector<bool> used(dots.size(), false);
    for (Cluster& cl : clusters) {
        double mh = median_height(cl.members);
        double mb = median_bottom(cl.members);
        Rect box = members_bbox(cl.members, std::nullopt);
        std::vector<int> ws;
        for (const Component& m : cl.members) ws.push_back(m.bbox.w);
        std::sort(ws.begin(), ws.end());
        double ref_w = std::max(digit_est.digit_w, ws[ws.size() / 2]);
        double reach = model.max_gap_factor * ref_w;
        int best = -1;
        double best_dist = 0.0;
        for (size_t i = 0; i < dots.size(); ++i) {
            if (used[i]) continue;
            const Component& d = dots[i];
            if (d.bbox.h > 0.35 * mh) continue;
            double dist = std::abs(d.bbox.bottom() - mb);
            if (dist > 0.25 * mh) continue;
            if (d.bbox.x + d.bbox.w < box.x - reach || d.bbox.x > box.right() + reach) continue;
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(i);
                best_dist = dist;
            }
        }
        if (best >= 0) {
            cl.dot = dots[best];
            used[best] = true;
        }
    }
    // Unattached dot candidates become singleton clusters so no component
    // is lost.
    for (size_t i = 0; i < dots.size(); ++i) {
        if (used[i]) continue;
        Cluster cl;
        cl.members = {dots[i]};
        clusters.push_back(std::move(cl));
    }

    for (Cluster& cl : clusters) {
        cl.bbox = members_bbox(cl.members, cl.dot);
        match_format(cl, model);
    }
    // deterministic output order
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
        return a.bbox.y < b.bbox.y;
    });
    return clusters;
}

Cluster extend_for_missing_digits(const Cluster& c, const DigitSizeEstimate& digit_est,
                                  int img_w) {
    if (!c.dot) return c;
    int after = c.digits_after_dot();
    if (after >= 2) return c;
    Cluster out = c;
    std::vector<int> ws;
    for (const Component& m : c.members) ws.push_back(m.bbox.w);
    std::sort(ws.begin(), ws.end());
    int ref_w = ws.empty() ? digit_est.digit_w
                           : std::max(digit_est.digit_w, ws[ws.size() / 2]);
    int advance = static_cast<int>(std::lround(1.08 * ref_w));
    int new_right = std::min(img_w, c.bbox.right() + (2 - after) * advance);
    out.bbox.w = new_right - out.bbox.x;
    out.extended = true;
    return out;
}

double score_cluster(const Cluster& c, const TagModel& model, int img_w, int img_h) {
    double format_term = c.matched_format ? 1.0 : 0.2;

    // Trapezoidal size plausibility: full score anywhere inside the modeled
    // digit-height band, linear falloff across the +-30% slack margins.
    double mh = median_height(c.members);
    double band_lo = model.digit_h_frac_min * img_h;
    double band_hi = model.digit_h_frac_max * img_h;
    double lo = 0.7 * band_lo;
    double hi = 1.3 * band_hi;
    double size_term;
    if (mh >= band_lo && mh <= band_hi)
        size_term = 1.0;
    else if (mh < band_lo)
        size_term = (band_lo - lo > 0) ? std::max(0.0, (mh - lo) / (band_lo - lo)) : 0.0;
    else
        size_term = (hi - band_hi > 0) ? std::max(0.0, (hi - mh) / (hi - band_hi)) : 0.0;

    Rect prior = model.price_zone_prior.to_pixels(img_w, img_h);
    Rect inter = intersect(c.bbox, prior);
    double layout_term =
        c.bbox.area() > 0 ? static_cast<double>(inter.area()) / c.bbox.area() : 0.0;

    double count_term = 1.0;
    if (!c.matched_format) {
        double n = static_cast<double>(c.members.size());
        count_term = 0.0;
        for (const PriceFormat& f : model.formats) {
            double b_lo = f.int_min, b_hi = f.int_max + f.frac_digits;
            count_term = std::max(count_term, std::min(n, b_hi) / std::max(n, b_lo));
        }
    }
    return std::clamp(format_term * size_term * layout_term * count_term, 0.0, 1.0);
}

std::optional<Cluster> select_best(const std::vector<Cluster>& opened,
                                   const std::vector<Cluster>& raw, const TagModel& model,
                                   int img_w, int img_h) {
    std::optional<Cluster> best;
    auto better = [](const Cluster& a, const Cluster& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
        if (a.branch != b.branch) return a.branch == Branch::Opened;
        return a.bbox.x < b.bbox.x;
    };
    auto scan = [&](const std::vector<Cluster>& list, Branch branch) {
        for (const Cluster& c : list) {
            Cluster scored = c;
            scored.branch = branch;
            scored.score = score_cluster(scored, model, img_w, img_h);
            if (!best || better(scored, *best)) best = std::move(scored);
        }
    };
    scan(opened, Branch::Opened);
    scan(raw, Branch::Raw);
    if (!best || best->score < model.tau_zone) return std::nullopt;
    return best;
}

}  // namespace pricetag
