#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pricetag/pipeline.hpp"
#include "pricetag/pnm.hpp"
#include "pricetag/synthgen.hpp"

using namespace pricetag;

namespace {

PipelineConfig config_from(const std::string& path) {
    if (path.empty()) {
        PipelineConfig cfg;
        cfg.model = tag_profile("synthetic");
        return cfg;
    }
    return load_config(path);
}

int cmd_recognize(const std::string& image_path, const std::string& config_path,
                  const std::string& debug_dir) {
    PipelineConfig cfg = config_from(config_path);
    cfg.debug_dir = debug_dir;
    ColorImage img = load_image(image_path);
    Pipeline pipeline(cfg);
    RecognitionResult res = pipeline.run_single(img);
    if (res.status == Status::Accepted) {
        std::cout << res.price->to_string() << "\n";
        return 0;
    }
    std::cout << "REJECT " << res.reason << "\n";
    return 2;
}

int cmd_batch(const std::string& manifest, const std::string& config_path,
              const std::string& out_csv, int workers) {
    PipelineConfig cfg = config_from(config_path);
    DatasetReport report = run_dataset(manifest, cfg, workers);
    write_results_csv(report, out_csv);
    const Metrics& m = report.zone_metrics;
    std::cout << "total=" << m.total() + report.errors << " tp=" << m.tp << " tn=" << m.tn
              << " fp=" << m.fp << " fn=" << m.fn << " errors=" << report.errors << "\n";
    std::cout << "precision=" << round3(m.precision) << " recall=" << round3(m.recall)
              << " accuracy=" << round3(m.accuracy) << "\n";
    std::cout << "zone_correct=" << report.zone_correct
              << " value_correct=" << report.value_correct << "\n";
    std::cout << "results: " << out_csv << "\n";
    return 0;
}

int cmd_bench(const std::string& manifest, const std::string& config_path, int reps,
              bool single_thread) {
    PipelineConfig cfg = config_from(config_path);
    BenchReport report = bench(manifest, cfg, reps, single_thread);
    std::cout << format_bench(report);
    return 0;
}

int cmd_gen(int n, uint64_t seed, const std::string& out_dir, const std::string& mix_str) {
    DatasetMix mix = DatasetMix::paper_default();
    if (!mix_str.empty()) {
        mix = DatasetMix{};
        std::stringstream ss(mix_str);
        std::string item;
        while (std::getline(ss, item, ',')) {
            size_t eq = item.find('=');
            if (eq == std::string::npos) throw CLI::ValidationError("--mix", "expected key=value");
            std::string key = item.substr(0, eq);
            double val = std::stod(item.substr(eq + 1));
            if (key == "blur")
                mix.blur = val;
            else if (key == "contrast")
                mix.contrast = val;
            else if (key == "washed")
                mix.washed = val;
            else if (key == "angle")
                mix.angle = val;
            else if (key == "noise")
                mix.noise = val;
            else if (key == "absent")
                mix.absent = val;
            else if (key == "clean")
                ;  // remainder is clean by construction
            else
                throw CLI::ValidationError("--mix", "unknown class: " + key);
        }
    }
    std::string manifest = generate_dataset(n, mix, seed, out_dir);
    std::cout << manifest << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"price tag zone detection and recognition"};
    app.require_subcommand(1);

    std::string image_path, config_path, debug_dir;
    auto* rec = app.add_subcommand("recognize", "recognize a single image");
    rec->add_option("image", image_path, "input PPM/PGM image")->required();
    rec->add_option("--config", config_path, "JSON pipeline config");
    rec->add_option("--debug-dir", debug_dir, "write annotated intermediate images here");

    std::string manifest, out_csv = "results.csv";
    int workers = 0;
    auto* batch = app.add_subcommand("batch", "run a dataset manifest");
    batch->add_option("manifest", manifest, "manifest CSV")->required();
    batch->add_option("--config", config_path, "JSON pipeline config");
    batch->add_option("--out", out_csv, "results CSV path");
    batch->add_option("--workers", workers, "worker threads (0 = all cores)");

    int reps = 5;
    bool single_thread = false;
    auto* bench_cmd = app.add_subcommand("bench", "measure per-stage latency");
    bench_cmd->add_option("manifest", manifest, "manifest CSV")->required();
    bench_cmd->add_option("--config", config_path, "JSON pipeline config");
    bench_cmd->add_option("--reps", reps, "repetitions (>= 3)");
    bench_cmd->add_flag("--single-thread", single_thread, "single-threaded measurement");

    int n = 100;
    uint64_t seed = 1;
    std::string out_dir = "dataset", mix_str;
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("--n", n, "number of images")->required();
    gen->add_option("--seed", seed, "master seed");
    gen->add_option("--out", out_dir, "output directory")->required();
    gen->add_option("--mix", mix_str,
                    "fractions, e.g. clean=0.5,blur=0.1,contrast=0.2,angle=0.1,noise=0.05,"
                    "absent=0.05 (remainder clean)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rec->parsed()) return cmd_recognize(image_path, config_path, debug_dir);
        if (batch->parsed()) return cmd_batch(manifest, config_path, out_csv, workers);
        if (bench_cmd->parsed()) return cmd_bench(manifest, config_path, reps, single_thread);
        if (gen->parsed()) return cmd_gen(n, seed, out_dir, mix_str);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
