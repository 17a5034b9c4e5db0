#include "pricetag/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace pricetag {

using nlohmann::json;

TagModel tag_profile(const std::string& name) {
    TagModel m;
    m.formats = {{1, 3, 2}, {1, 4, 0}};
    m.max_gap_factor = 2.0;
    m.v_overlap_min = 0.6;
    m.tau_zone = 0.5;
    if (name == "synthetic") {
        m.digit_h_frac_min = 0.14;
        m.digit_h_frac_max = 0.29;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.0, 0.55, 1.0, 0.45};
    } else if (name == "type1") {
        m.digit_h_frac_min = 0.17;
        m.digit_h_frac_max = 0.23;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.40, 0.58, 0.60, 0.40};
    } else if (name == "type2") {
        m.digit_h_frac_min = 0.19;
        m.digit_h_frac_max = 0.25;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.05, 0.56, 0.55, 0.40};
    } else if (name == "type3") {
        m.digit_h_frac_min = 0.14;
        m.digit_h_frac_max = 0.19;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.25, 0.62, 0.50, 0.36};
        m.formats = {{1, 4, 0}};
    } else if (name == "type4") {
        m.digit_h_frac_min = 0.23;
        m.digit_h_frac_max = 0.29;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.30, 0.52, 0.65, 0.45};
        m.formats = {{1, 4, 0}};
    } else if (name == "type5") {
        m.digit_h_frac_min = 0.16;
        m.digit_h_frac_max = 0.22;
        m.digit_aspect_min = 0.42;
        m.digit_aspect_max = 0.75;
        m.price_zone_prior = {0.10, 0.62, 0.55, 0.38};
    } else {
        throw std::invalid_argument("unknown tag profile: " + name);
    }
    return m;
}

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key))
            throw std::invalid_argument("unknown config key '" + key + "' in " + where);
    }
}

void parse_model(const json& j, TagModel& m) {
    reject_unknown(j,
                   {"digit_h_frac", "digit_aspect", "price_zone_prior", "formats",
                    "max_gap_factor", "v_overlap_min", "tau_zone"},
                   "tag_model");
    if (j.contains("digit_h_frac")) {
        m.digit_h_frac_min = j["digit_h_frac"].at(0).get<double>();
        m.digit_h_frac_max = j["digit_h_frac"].at(1).get<double>();
    }
    if (j.contains("digit_aspect")) {
        m.digit_aspect_min = j["digit_aspect"].at(0).get<double>();
        m.digit_aspect_max = j["digit_aspect"].at(1).get<double>();
    }
    if (j.contains("price_zone_prior")) {
        const json& p = j["price_zone_prior"];
        m.price_zone_prior = {p.at(0).get<double>(), p.at(1).get<double>(),
                              p.at(2).get<double>(), p.at(3).get<double>()};
    }
    if (j.contains("formats")) {
        m.formats.clear();
        for (const json& f : j["formats"]) {
            reject_unknown(f, {"int_min", "int_max", "frac_digits"}, "formats[]");
            PriceFormat pf;
            pf.int_min = f.at("int_min").get<int>();
            pf.int_max = f.at("int_max").get<int>();
            pf.frac_digits = f.at("frac_digits").get<int>();
            if (pf.frac_digits != 0 && pf.frac_digits != 2)
                throw std::invalid_argument("frac_digits must be 0 or 2");
            if (pf.int_min < 1 || pf.int_max < pf.int_min)
                throw std::invalid_argument("invalid int digit range");
            m.formats.push_back(pf);
        }
    }
    if (j.contains("max_gap_factor")) m.max_gap_factor = j["max_gap_factor"].get<double>();
    if (j.contains("v_overlap_min")) m.v_overlap_min = j["v_overlap_min"].get<double>();
    if (j.contains("tau_zone")) m.tau_zone = j["tau_zone"].get<double>();
}

}  // namespace

PipelineConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    reject_unknown(j,
                   {"size_limit", "niblack", "se_side", "profile", "tag_model", "skew", "ocr",
                    "iou_threshold", "debug_dir"},
                   "config root");
    PipelineConfig cfg;
    cfg.model = tag_profile("synthetic");
    if (j.contains("profile")) cfg.model = tag_profile(j["profile"].get<std::string>());
    if (j.contains("size_limit")) {
        const json& s = j["size_limit"];
        reject_unknown(s, {"w", "h"}, "size_limit");
        cfg.max_w = s.at("w").get<int>();
        cfg.max_h = s.at("h").get<int>();
        if (cfg.max_w < 1 || cfg.max_h < 1) throw std::invalid_argument("size_limit must be >= 1");
    }
    if (j.contains("niblack")) {
        const json& nb = j["niblack"];
        reject_unknown(nb, {"k", "polarity"}, "niblack");
        if (nb.contains("k")) cfg.niblack_k = nb["k"].get<double>();
        if (cfg.niblack_k < -1.0 || cfg.niblack_k > 1.0)
            throw std::invalid_argument("niblack k out of [-1,1]");
        if (nb.contains("polarity")) {
            std::string p = nb["polarity"].get<std::string>();
            if (p == "dark-text")
                cfg.polarity = Polarity::DarkText;
            else if (p == "light-text")
                cfg.polarity = Polarity::LightText;
            else
                throw std::invalid_argument("polarity must be dark-text or light-text");
        }
    }
    if (j.contains("se_side")) {
        cfg.se_side = j["se_side"].get<int>();
        if (cfg.se_side != 0 && (cfg.se_side < 1 || cfg.se_side % 2 == 0))
            throw std::invalid_argument("se_side must be 0 (auto) or odd >= 1");
    }
    if (j.contains("tag_model")) parse_model(j["tag_model"], cfg.model);
    if (j.contains("skew")) {
        const json& s = j["skew"];
        reject_unknown(s, {"threshold_deg", "max_deg"}, "skew");
        if (s.contains("threshold_deg")) cfg.skew_threshold_deg = s["threshold_deg"].get<double>();
        if (s.contains("max_deg")) cfg.skew_max_deg = s["max_deg"].get<double>();
        if (cfg.skew_max_deg <= 0 || cfg.skew_max_deg > 20)
            throw std::invalid_argument("skew max_deg must be in (0,20]");
    }
    if (j.contains("ocr")) {
        const json& o = j["ocr"];
        reject_unknown(o, {"min_conf", "recognizer", "atlas_dir"}, "ocr");
        if (o.contains("min_conf")) cfg.min_conf = o["min_conf"].get<double>();
        if (o.contains("recognizer")) cfg.recognizer = o["recognizer"].get<std::string>();
        if (o.contains("atlas_dir")) cfg.atlas_dir = o["atlas_dir"].get<std::string>();
        if (cfg.recognizer != "template")
            throw std::invalid_argument("unknown recognizer: " + cfg.recognizer);
    }
    if (j.contains("iou_threshold")) cfg.iou_threshold = j["iou_threshold"].get<double>();
    if (j.contains("debug_dir")) cfg.debug_dir = j["debug_dir"].get<std::string>();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config: " + path);
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

}  // namespace pricetag
