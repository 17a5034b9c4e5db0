#include "pricetag/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "pricetag/cc.hpp"
#include "pricetag/morph.hpp"
#include "pricetag/pnm.hpp"

namespace pricetag {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

Metrics compute_metrics(long long tp, long long tn, long long fp, long long fn) {
    if (tp < 0 || tn < 0 || fp < 0 || fn < 0)
        throw std::invalid_argument("compute_metrics: negative count");
    Metrics m;
    m.tp = tp;
    m.tn = tn;
    m.fp = fp;
    m.fn = fn;
    m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    long long total = m.total();
    m.accuracy = total > 0 ? static_cast<double>(tp + tn) / total : 0.0;
    return m;
}

Pipeline::Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {
    GlyphAtlas atlas =
        cfg_.atlas_dir.empty() ? GlyphAtlas::builtin() : load_atlas(cfg_.atlas_dir);
    recognizer_ = std::make_shared<TemplateRecognizer>(std::move(atlas));
}

namespace {

struct Timer {
    std::vector<StageTiming>& out;
    Clock::time_point mark = Clock::now();

    void lap(const char* stage) {
        auto now = Clock::now();
        out.push_back({stage, std::chrono::duration_cast<std::chrono::microseconds>(now - mark)
                                  .count()});
        mark = now;
    }
};

int auto_se_side(int digit_h) {
    int side = static_cast<int>(std::lround(digit_h / 12.0));
    if (side < 3) side = 3;
    if (side % 2 == 0) side += 1;
    return side;
}

void draw_rect_outline(ColorImage& img, const Rect& r, uint8_t cr, uint8_t cg, uint8_t cb) {
    Rect c = intersect(r, Rect{0, 0, img.width, img.height});
    if (c.w < 1 || c.h < 1) return;
    for (int x = c.x; x < c.right(); ++x) {
        img.set(x, c.y, cr, cg, cb);
        img.set(x, c.bottom() - 1, cr, cg, cb);
    }
    for (int y = c.y; y < c.bottom(); ++y) {
        img.set(c.x, y, cr, cg, cb);
        img.set(c.right() - 1, y, cr, cg, cb);
    }
}

void draw_quad_outline(ColorImage& img, const Quad& q, uint8_t cr, uint8_t cg, uint8_t cb) {
    for (int i = 0; i < 4; ++i) {
        Point a = q.corners[i], b = q.corners[(i + 1) % 4];
        int steps = static_cast<int>(std::max(std::abs(b.x - a.x), std::abs(b.y - a.y))) + 1;
        for (int s = 0; s <= steps; ++s) {
            double t = static_cast<double>(s) / steps;
            int x = static_cast<int>(std::lround(a.x + t * (b.x - a.x)));
            int y = static_cast<int>(std::lround(a.y + t * (b.y - a.y)));
            if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.set(x, y, cr, cg, cb);
        }
    }
}

Quad scale_quad(const Quad& q, double sx, double sy) {
    Quad out = q;
    for (Point& p : out.corners) {
        p.x *= sx;
        p.y *= sy;
    }
    return out;
}

}  // namespace

RecognitionResult Pipeline::run_single(const ColorImage& img) const {
    RecognitionResult res;
    auto t_start = Clock::now();
    Timer timer{res.stage_timings};
    auto finish = [&](RecognitionResult& r) -> RecognitionResult& {
        r.total_us =
            std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t_start)
                .count();
        return r;
    };
    auto reject = [&](const char* reason) -> RecognitionResult {
        res.status = Status::Rejected;
        res.price.reset();
        res.reason = reason;
        return finish(res);
    };

    try {
        ColorImage scaled = scale_to_limit(img, cfg_.max_w, cfg_.max_h);
        timer.lap("scale");
        const int w = scaled.width, h = scaled.height;
        double back_sx = static_cast<double>(img.width) / w;
        double back_sy = static_cast<double>(img.height) / h;

        GrayImage gray = to_gray(scaled);
        timer.lap("gray");

        DigitSizeEstimate est = cfg_.model.estimate_digit_size(h);
        auto [win_w, win_h] = derive_window(est);
        NiblackParams np{cfg_.niblack_k, win_w, win_h, cfg_.polarity};
        BinaryImage bin = niblack(gray, np);
        timer.lap("binarize");

        int se_side = cfg_.se_side > 0 ? cfg_.se_side : auto_se_side(est.digit_h);
        BinaryImage opened = open(bin, StructElem{se_side});
        timer.lap("morph");

        // The opened image is tried first; the raw binarization is only
        // labeled as a fallback when no acceptable cluster survives, since
        // opening already recovers the zone on the vast majority of inputs.
        std::vector<Component> comps_a = label_components(opened);
        timer.lap("label");

        SizeFilterParams sf = derive_size_filter(cfg_.model, w, h);
        std::vector<Component> cand_a = size_filter(comps_a, sf);
        std::vector<Cluster> clusters_a = cluster_by_format(cand_a, cfg_.model, est);
        for (Cluster& c : clusters_a) c = extend_for_missing_digits(c, est, w);
        timer.lap("cluster");

        std::optional<Cluster> best = select_best(clusters_a, {}, cfg_.model, w, h);
        std::vector<Component> comps_b, cand_b;
        if (!best) {
            comps_b = label_components(bin);
            timer.lap("label");
            cand_b = size_filter(comps_b, sf);
            std::vector<Cluster> clusters_b = cluster_by_format(cand_b, cfg_.model, est);
            for (Cluster& c : clusters_b) c = extend_for_missing_digits(c, est, w);
            timer.lap("cluster");
            if (clusters_a.empty() && clusters_b.empty()) return reject("no-cluster");
            best = select_best(clusters_a, clusters_b, cfg_.model, w, h);
        } else {
            // Opening can erase a thin digit at either end of the zone, which
            // leaves a shorter cluster that still scores perfectly. Re-label
            // the raw binarization, but only in a margin around the chosen
            // zone: that is where a lost digit can live, and the crop keeps
            // the second pass far cheaper than a full-image labeling.
            Rect around{best->bbox.x - 3 * est.digit_w, best->bbox.y - est.digit_h,
                        best->bbox.w + 6 * est.digit_w, best->bbox.h + 2 * est.digit_h};
            around = intersect(around, Rect{0, 0, w, h});
            comps_b = label_components(crop(bin, around));
            for (Component& c : comps_b) {
                c.bbox.x += around.x;
                c.bbox.y += around.y;
                c.centroid.x += around.x;
                c.centroid.y += around.y;
            }
            timer.lap("label");
            cand_b = size_filter(comps_b, sf);
            std::vector<Cluster> clusters_b = cluster_by_format(cand_b, cfg_.model, est);
            for (Cluster& c : clusters_b) c = extend_for_missing_digits(c, est, w);
            timer.lap("cluster");
            best = select_best(clusters_a, clusters_b, cfg_.model, w, h);
        }
        timer.lap("select");

        if (!cfg_.debug_dir.empty()) {
            fs::create_directories(cfg_.debug_dir);
            ColorImage dbg = scaled;
            const auto& dbg_comps = comps_b.empty() ? comps_a : comps_b;
            const auto& dbg_cand = comps_b.empty() ? cand_a : cand_b;
            for (const Component& c : dbg_comps) draw_rect_outline(dbg, c.bbox, 160, 160, 0);
            for (const Component& c : dbg_cand) draw_rect_outline(dbg, c.bbox, 0, 200, 0);
            save_ppm(dbg, (fs::path(cfg_.debug_dir) / "components.ppm").string());
        }

        if (!best) return reject("low-score");

        res.branch = best->branch;
        const BinaryImage& branch_bin = best->branch == Branch::Opened ? opened : bin;
        Rect zone_rect = intersect(best->bbox, Rect{0, 0, w, h});
        if (zone_rect.w < 1 || zone_rect.h < 1) return reject("no-cluster");

        Angle skew = estimate_skew(branch_bin, zone_rect, cfg_.skew_max_deg);
        res.skew = skew;
        timer.lap("skew");

        Quad quad = compensate(zone_rect, skew, cfg_.skew_threshold_deg, w, h);
        ColorImage zone_color = warp_quad_to_rect(scaled, quad, zone_rect.w, zone_rect.h);
        timer.lap("warp");

        if (!cfg_.debug_dir.empty()) {
            ColorImage dbg = scaled;
            Rect pre = intersect(best->bbox, Rect{0, 0, w, h});
            draw_rect_outline(dbg, pre, 0, 200, 0);
            draw_quad_outline(dbg, Quad::from_rect(zone_rect), 0, 0, 255);
            draw_quad_outline(dbg, quad, 255, 0, 0);
            save_ppm(dbg, (fs::path(cfg_.debug_dir) / "zone.ppm").string());
            save_ppm(zone_color, (fs::path(cfg_.debug_dir) / "crop.ppm").string());
        }

        // Re-binarize the rectified crop with a window derived from its height.
        GrayImage zone_gray = to_gray(zone_color);
        DigitSizeEstimate crop_est;
        crop_est.digit_h = std::max(8, static_cast<int>(std::lround(0.75 * zone_gray.height)));
        crop_est.digit_w = std::max(
            5, std::min(crop_est.digit_h - 1,
                        static_cast<int>(std::lround(0.71 * crop_est.digit_h))));
        auto [zwin_w, zwin_h] = derive_window(crop_est);
        BinaryImage zone_bin =
            niblack(zone_gray, NiblackParams{cfg_.niblack_k, zwin_w, zwin_h, cfg_.polarity});
        timer.lap("rebinarize");

        std::vector<GlyphBox> boxes;
        try {
            boxes = segment_glyphs(zone_bin);
        } catch (const EmptyZoneError&) {
            return reject("empty-zone");
        }
        timer.lap("segment");

        std::vector<RecognizedSymbol> symbols;
        for (const GlyphBox& gb : boxes) {
            BinaryImage glyph = crop(zone_bin, gb.box);
            ClassifyResult cr = recognizer_->classify(glyph);
            symbols.push_back({cr.symbol, cr.confidence});
        }
        timer.lap("classify");

        PostprocessResult post = postprocess(symbols, cfg_.model.formats, cfg_.min_conf);
        timer.lap("postprocess");

        res.zone = scale_quad(quad, back_sx, back_sy);
        if (!post.accepted()) return reject(post.reject_reason.c_str());

        res.status = Status::Accepted;
        res.price = post.price;
        res.reason.clear();
        return finish(res);
    } catch (const std::exception&) {
        return reject("processing-error");
    }
}

DatasetReport run_dataset(const std::string& manifest_path, const PipelineConfig& cfg,
                          int workers) {
    std::vector<ManifestRow> rows = read_manifest(manifest_path);
    Pipeline pipeline(cfg);

    DatasetReport report;
    report.rows.resize(rows.size());

    if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= rows.size()) break;
            RowOutcome& out = report.rows[i];
            out.row = rows[i];
            try {
                ColorImage img = load_image(rows[i].path);
                out.result = pipeline.run_single(img);
            } catch (const std::exception& e) {
                out.processing_error = true;
                out.error_text = e.what();
                continue;
            }
            if (out.result.status == Status::Accepted && out.result.zone)
                out.iou = quad_iou(*out.result.zone, rows[i].zone);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();

    long long tp = 0, tn = 0, fp = 0, fn = 0;
    for (const RowOutcome& out : report.rows) {
        if (out.processing_error) {
            report.errors++;
            continue;
        }
        bool accepted = out.result.status == Status::Accepted;
        if (out.row.tag_absent) {
            // an accepted incorrect image counts against precision, never as TP
            accepted ? fp++ : tn++;
            continue;
        }
        if (!accepted) {
            fn++;
            continue;
        }
        if (out.iou >= cfg.iou_threshold) {
            tp++;
            report.zone_correct++;
            if (out.result.price && out.result.price->minor_units == out.row.price_minor &&
                out.result.price->frac_digits == out.row.frac_digits)
                report.value_correct++;
        } else {
            fp++;
        }
    }
    report.zone_metrics = compute_metrics(tp, tn, fp, fn);
    return report;
}

void write_results_csv(const DatasetReport& report, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write results: " + path);
    f << "path,status,price_minor,frac_digits,zx0,zy0,zx1,zy1,zx2,zy2,zx3,zy3,"
         "skew_deg,branch,reason\n";
    f.precision(10);
    for (const RowOutcome& out : report.rows) {
        const RecognitionResult& r = out.result;
        f << out.row.path << ',';
        if (out.processing_error) {
            f << "error,,,,,,,,,,,,,," << out.error_text << ",\n";
            continue;
        }
        f << (r.status == Status::Accepted ? "accepted" : "rejected") << ',';
        if (r.price)
            f << r.price->minor_units << ',' << r.price->frac_digits;
        else
            f << ',';
        for (int i = 0; i < 4; ++i) {
            if (r.zone)
                f << ',' << r.zone->corners[i].x << ',' << r.zone->corners[i].y;
            else
                f << ",,";
        }
        f << ',';
        if (r.skew) f << r.skew->degrees;
        f << ',';
        if (r.branch) f << (*r.branch == Branch::Opened ? "opened" : "raw");
        f << ',' << r.reason << '\n';
    }
}

namespace {

StageStats stats_of(std::vector<int64_t>& v) {
    StageStats s;
    if (v.empty()) return s;
    std::sort(v.begin(), v.end());
    s.median_us = v[v.size() / 2];
    s.p90_us = v[std::min(v.size() - 1, static_cast<size_t>(v.size() * 9 / 10))];
    return s;
}

}  // namespace

BenchReport bench(const std::string& manifest_path, const PipelineConfig& cfg, int repetitions,
                  bool single_thread) {
    (void)single_thread;  // measurement is sequential either way
    if (repetitions < 3) throw std::invalid_argument("bench: repetitions must be >= 3");
    std::vector<ManifestRow> rows = read_manifest(manifest_path);
    Pipeline pipeline(cfg);

    std::vector<ColorImage> images;
    for (const ManifestRow& r : rows) images.push_back(load_image(r.path));

    // warm pass
    for (const ColorImage& img : images) pipeline.run_single(img);

    std::map<std::string, std::vector<int64_t>> stage_samples;
    std::vector<int64_t> totals;
    BenchReport report;
    for (int rep = 0; rep < repetitions; ++rep) {
        for (const ColorImage& img : images) {
            RecognitionResult res = pipeline.run_single(img);
            for (const StageTiming& st : res.stage_timings)
                stage_samples[st.stage].push_back(st.micros);
            totals.push_back(res.total_us);
            report.runs++;
        }
    }
    for (auto& [stage, samples] : stage_samples) report.stages[stage] = stats_of(samples);
    report.total = stats_of(totals);
    return report;
}

std::string format_bench(const BenchReport& report) {
    std::ostringstream os;
    os << "stage            median_us      p90_us\n";
    for (const auto& [stage, s] : report.stages) {
        os << stage;
        for (size_t i = stage.size(); i < 16; ++i) os << ' ';
        os.width(10);
        os << s.median_us;
        os.width(12);
        os << s.p90_us << '\n';
    }
    os << "total           ";
    os.width(10);
    os << report.total.median_us;
    os.width(12);
    os << report.total.p90_us << '\n';
    os << "runs: " << report.runs << '\n';
    return os.str();
}

}  // namespace pricetag
