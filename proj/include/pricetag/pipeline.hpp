#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pricetag/config.hpp"
#include "pricetag/deskew.hpp"
#include "pricetag/ocr.hpp"
#include "pricetag/synthgen.hpp"

namespace pricetag {

enum class Status { Accepted, Rejected };

struct StageTiming {
    std::string stage;
    int64_t micros = 0;
};

struct RecognitionResult {
    Status status = Status::Rejected;
    std::optional<Price> price;
    std::optional<Quad> zone;  // original-image coordinates
    std::optional<Angle> skew;
    std::optional<Branch> branch;
    std::string reason;  // reject reason code, empty when accepted
    std::vector<StageTiming> stage_timings;
    int64_t total_us = 0;
};

struct Metrics {
    long long tp = 0, tn = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, accuracy = 0.0;

    long long total() const { return tp + tn + fp + fn; }
};

Metrics compute_metrics(long long tp, long long tn, long long fp, long long fn);
double round3(double v);

class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg);

    // Fig-2 flow end to end: scale, binarize, two-branch morphology and
    // component analysis, cluster selection, deskew, color-crop, OCR,
    // format post-processing. Every failure folds into a rejection.
    RecognitionResult run_single(const ColorImage& img) const;

    const PipelineConfig& config() const { return cfg_; }
    const Recognizer& recognizer() const { return *recognizer_; }

private:
    PipelineConfig cfg_;
    std::shared_ptr<Recognizer> recognizer_;
};

struct RowOutcome {
    ManifestRow row;
    RecognitionResult result;
    double iou = 0.0;
    bool processing_error = false;
    std::string error_text;
};

struct DatasetReport {
    std::vector<RowOutcome> rows;  // manifest order
    Metrics zone_metrics;          // TP needs zone IoU only (Tables 1/2 style)
    long long zone_correct = 0;    // accepted correct images with IoU >= thr
    long long value_correct = 0;   // of those, recognized value equal (Table 3 style)
    long long errors = 0;          // unreadable images, excluded from metrics
};

DatasetReport run_dataset(const std::string& manifest_path, const PipelineConfig& cfg,
                          int workers = 0);

void write_results_csv(const DatasetReport& report, const std::string& path);

struct StageStats {
    int64_t median_us = 0;
    int64_t p90_us = 0;
};

struct BenchReport {
    std::map<std::string, StageStats> stages;
    StageStats total;
    int runs = 0;
};

BenchReport bench(const std::string& manifest_path, const PipelineConfig& cfg, int repetitions,
                  bool single_thread = true);

std::string format_bench(const BenchReport& report);

}  // namespace pricetag
