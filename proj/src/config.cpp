#include "sceneforge/config.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

#include <nlohmann/json.hpp>

#include "sceneforge/textio.hpp"

namespace sceneforge {

using nlohmann::json;
namespace fs = std::filesystem;

std::string ConfigError::join(const std::vector<std::string>& errors) {
    std::string out = "invalid configuration";
    for (const std::string& e : errors) {
        out += "\n  ";
        out += e;
    }
    return out;
}

namespace {

/// Collects every violation instead of stopping at the first; failed reads
/// return the fallback so validation can continue.
class Parser {
public:
    Parser(const json& doc, fs::path base) : doc_(doc), base_(std::move(base)) {}

    std::vector<std::string>& errors() { return errors_; }

    void fail(const std::string& path, const std::string& msg) {
        errors_.push_back(path + ": " + msg);
    }

    void reject_unknown(const json& obj, const std::string& where,
                        std::initializer_list<const char*> known) {
        for (const auto& [key, value] : obj.items()) {
            const bool ok = std::any_of(known.begin(), known.end(),
                                        [&](const char* k) { return key == k; });
            if (!ok) fail(where.empty() ? key : where + "." + key, "unknown key");
        }
    }

    const json* find(const json& obj, const std::string& where, const char* key, bool required) {
        const auto it = obj.find(key);
        if (it == obj.end()) {
            if (required) fail(field(where, key), "missing required key");
            return nullptr;
        }
        return &*it;
    }

    long long int_field(const json& obj, const std::string& where, const char* key, long long lo,
                        long long hi, std::optional<long long> fallback) {
        const long long def = fallback.value_or(lo);
        const json* v = find(obj, where, key, !fallback.has_value());
        if (!v) return def;
        if (!v->is_number_integer()) {
            fail(field(where, key), "expected an integer");
            return def;
        }
        const long long n = v->get<long long>();
        if (n < lo || n > hi) {
            fail(field(where, key),
                 "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return def;
        }
        return n;
    }

    std::uint64_t u64_field(const json& obj, const std::string& where, const char* key,
                            std::optional<std::uint64_t> fallback) {
        const std::uint64_t def = fallback.value_or(0);
        const json* v = find(obj, where, key, !fallback.has_value());
        if (!v) return def;
        if (v->is_number_unsigned()) return v->get<std::uint64_t>();
        if (v->is_number_integer() && v->get<long long>() >= 0) {
            return static_cast<std::uint64_t>(v->get<long long>());
        }
        fail(field(where, key), "expected a non-negative integer");
        return def;
    }

    double real_field(const json& obj, const std::string& where, const char* key, double lo,
                      double hi, std::optional<double> fallback) {
        const double def = fallback.value_or(lo);
        const json* v = find(obj, where, key, !fallback.has_value());
        if (!v) return def;
        if (!v->is_number()) {
            fail(field(where, key), "expected a number");
            return def;
        }
        const double x = v->get<double>();
        if (!(x >= lo && x <= hi)) {
            fail(field(where, key),
                 "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return def;
        }
        return x;
    }

    std::string str_field(const json& obj, const std::string& where, const char* key,
                          std::optional<std::string> fallback) {
        const std::string def = fallback.value_or("");
        const json* v = find(obj, where, key, !fallback.has_value());
        if (!v) return def;
        if (!v->is_string()) {
            fail(field(where, key), "expected a string");
            return def;
        }
        return v->get<std::string>();
    }

    bool bool_field(const json& obj, const std::string& where, const char* key, bool fallback) {
        const json* v = find(obj, where, key, /*required=*/false);
        if (!v) return fallback;
        if (!v->is_boolean()) {
            fail(field(where, key), "expected true or false");
            return fallback;
        }
        return v->get<bool>();
    }

    template <std::size_t N>
    std::array<int, N> int_array(const json& obj, const std::string& where, const char* key,
                                 int lo, int hi, std::array<int, N> fallback, bool required) {
        const json* v = find(obj, where, key, required);
        if (!v) return fallback;
        if (!v->is_array() || v->size() != N) {
            fail(field(where, key), "expected an array of " + std::to_string(N) + " integers");
            return fallback;
        }
        std::array<int, N> out = fallback;
        for (std::size_t i = 0; i < N; ++i) {
            const json& e = (*v)[i];
            if (!e.is_number_integer()) {
                fail(field(where, key), "element " + std::to_string(i) + " is not an integer");
                continue;
            }
            const long long n = e.get<long long>();
            if (n < lo || n > hi) {
                fail(field(where, key), "element " + std::to_string(i) + " must be in [" +
                                            std::to_string(lo) + ", " + std::to_string(hi) + "]");
                continue;
            }
            out[i] = static_cast<int>(n);
        }
        return out;
    }

    /// Resolves relative to the config's directory; input dirs must exist.
    fs::path dir_field(const json& obj, const std::string& where, const char* key,
                       bool must_exist, std::optional<std::string> fallback) {
        const std::string raw = str_field(obj, where, key, std::move(fallback));
        if (raw.empty()) return {};
        fs::path p(raw);
        if (p.is_relative()) p = base_ / p;
        p = p.lexically_normal();
        if (must_exist && !fs::is_directory(p)) {
            fail(field(where, key), "not a directory: " + p.string());
        }
        return p;
    }

    static std::string field(const std::string& where, const char* key) {
        return where.empty() ? key : where + "." + key;
    }

    const json& doc() const { return doc_; }

private:
    const json& doc_;
    fs::path base_;
    std::vector<std::string> errors_;
};

PoolConfig parse_pool(Parser& p, const json& obj, const std::string& where) {
    PoolConfig pool;
    if (!obj.is_object()) {
        p.fail(where, "expected an object");
        return pool;
    }
    p.reject_unknown(obj, where,
                     {"class_id", "sprite_dir", "min_count", "max_count", "labeled", "base_scale",
                      "max_scale", "base_rotation", "max_rotation", "grouped"});
    pool.class_id = static_cast<int>(p.int_field(obj, where, "class_id", 0, 1 << 20, std::nullopt));
    pool.sprite_dir = p.dir_field(obj, where, "sprite_dir", true, std::nullopt).string();
    pool.min_count = static_cast<int>(p.int_field(obj, where, "min_count", 0, 10000, 0LL));
    pool.max_count = static_cast<int>(p.int_field(obj, where, "max_count", 0, 10000, std::nullopt));
    if (pool.max_count < pool.min_count) {
        p.fail(Parser::field(where, "max_count"), "must be >= min_count");
    }
    pool.labeled = p.bool_field(obj, where, "labeled", true);
    pool.base_scale = p.real_field(obj, where, "base_scale", 1e-6, 1000.0, 1.0);
    pool.max_scale = p.real_field(obj, where, "max_scale", 0.0, 1000.0, 0.0);
    if (pool.base_scale - pool.max_scale <= 0.0) {
        p.fail(Parser::field(where, "max_scale"),
               "base_scale - max_scale must stay positive so every sampled scale is positive");
    }
    pool.base_rotation = p.real_field(obj, where, "base_rotation", -360000.0, 360000.0, 0.0);
    pool.max_rotation = p.real_field(obj, where, "max_rotation", 0.0, 360000.0, 0.0);
    pool.grouped = p.bool_field(obj, where, "grouped", false);
    return pool;
}

}  // namespace

RunConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: ") + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({"document: top level must be a JSON object"});

    Parser p(doc, base_dir);
    p.reject_unknown(doc, "",
                     {"dataset_size", "seed", "output_dir", "output_size", "backgrounds_dir",
                      "prefix", "image_format", "jpeg_quality", "jobs", "sampling_method",
                      "min_visible_fraction", "bias_strength", "group_chance", "overlay_chance",
                      "fog_of_war_chance", "noise", "blur_strength", "ui_dir", "cursors_dir",
                      "cursor_min", "cursor_max", "class_pools", "key_params", "eval"});

    RunConfig cfg;
    SceneConfig& scene = cfg.job.scene;
    scene.dataset_size = static_cast<int>(p.int_field(doc, "", "dataset_size", 0, 10000000, std::nullopt));
    scene.seed = p.u64_field(doc, "", "seed", std::nullopt);
    cfg.job.output_dir = p.dir_field(doc, "", "output_dir", false, std::nullopt);
    if (cfg.job.output_dir.empty()) p.fail("output_dir", "must not be empty");

    const auto size = p.int_array<2>(doc, "", "output_size", 1, 16384, {0, 0}, true);
    scene.output_width = size[0];
    scene.output_height = size[1];

    cfg.job.backgrounds_dir = p.dir_field(doc, "", "backgrounds_dir", true, std::nullopt);
    cfg.job.prefix = p.str_field(doc, "", "prefix", std::string("synth_"));

    std::string format = p.str_field(doc, "", "image_format", std::string("png"));
    if (format == "jpeg") format = "jpg";
    if (format != "png" && format != "jpg") {
        p.fail("image_format", "must be \"png\" or \"jpg\"");
        format = "png";
    }
    cfg.job.image_format = format;
    cfg.job.jpeg_quality = static_cast<int>(p.int_field(doc, "", "jpeg_quality", 1, 100, 90LL));
    cfg.job.jobs = static_cast<int>(p.int_field(doc, "", "jobs", 0, 1024, 0LL));

    const std::string sampling = p.str_field(doc, "", "sampling_method", std::string("bilinear"));
    try {
        scene.sampling_method = sampling_from_string(sampling);
    } catch (const std::invalid_argument&) {
        p.fail("sampling_method", "must be nearest, bilinear or bicubic");
    }

    scene.min_visible_fraction = p.real_field(doc, "", "min_visible_fraction", 0.0, 1.0, 0.25);
    if (scene.min_visible_fraction == 0.0) p.fail("min_visible_fraction", "must be > 0");
    scene.bias_strength = p.real_field(doc, "", "bias_strength", 0.0, 1e6, 0.0);
    scene.group_chance = p.real_field(doc, "", "group_chance", 0.0, 1.0, 0.0);
    scene.overlay_chance = p.real_field(doc, "", "overlay_chance", 0.0, 1.0, 0.0);
    scene.fog_of_war_chance = p.real_field(doc, "", "fog_of_war_chance", 0.0, 1.0, 0.0);
    scene.noise = p.int_array<3>(doc, "", "noise", 0, 255, {0, 0, 0}, false);
    scene.blur_strength = p.real_field(doc, "", "blur_strength", 0.0, 100.0, 0.0);

    if (doc.contains("ui_dir")) cfg.job.ui_dir = p.dir_field(doc, "", "ui_dir", true, std::nullopt);
    if (doc.contains("cursors_dir")) {
        cfg.job.cursors_dir = p.dir_field(doc, "", "cursors_dir", true, std::nullopt);
    }
    cfg.job.cursor_min = static_cast<int>(p.int_field(doc, "", "cursor_min", 0, 1000, 0LL));
    cfg.job.cursor_max = static_cast<int>(p.int_field(doc, "", "cursor_max", 0, 1000, 0LL));
    if (cfg.job.cursor_max < cfg.job.cursor_min) p.fail("cursor_max", "must be >= cursor_min");
    if (cfg.job.cursor_max > 0 && !cfg.job.cursors_dir) {
        p.fail("cursor_max", "cursors_dir is required when cursor_max > 0");
    }

    const json* pools = p.find(doc, "", "class_pools", true);
    if (pools) {
        if (!pools->is_array()) {
            p.fail("class_pools", "expected an array");
        } else {
            for (std::size_t i = 0; i < pools->size(); ++i) {
                scene.class_pools.push_back(
                    parse_pool(p, (*pools)[i], "class_pools[" + std::to_string(i) + "]"));
            }
        }
    }

    if (const json* kp = p.find(doc, "", "key_params", false)) {
        if (!kp->is_object()) {
            p.fail("key_params", "expected an object");
        } else {
            p.reject_unknown(*kp, "key_params", {"background_color", "tolerance", "remove_outline"});
            const auto bg = p.int_array<3>(*kp, "key_params", "background_color", 0, 255,
                                           {0, 255, 0}, false);
            for (std::size_t i = 0; i < 3; ++i) {
                cfg.key_params.background_color[i] = static_cast<std::uint8_t>(bg[i]);
            }
            cfg.key_params.tolerance =
                p.int_array<3>(*kp, "key_params", "tolerance", 0, 255, {0, 0, 0}, false);
            cfg.key_params.remove_outline =
                static_cast<int>(p.int_field(*kp, "key_params", "remove_outline", 0, 64, 0LL));
        }
    }

    if (const json* ev = p.find(doc, "", "eval", false)) {
        if (!ev->is_object()) {
            p.fail("eval", "expected an object");
        } else {
            p.reject_unknown(*ev, "eval", {"iou_threshold"});
            cfg.eval.iou_threshold = p.real_field(*ev, "eval", "iou_threshold", 1e-9, 1.0, 0.5);
        }
    }

    if (!p.errors().empty()) throw ConfigError(std::move(p.errors()));
    return cfg;
}

RunConfig load_config(const fs::path& path) {
    return parse_config(read_text_file(path), path.has_parent_path() ? path.parent_path()
                                                                     : fs::path("."));
}

}  // namespace sceneforge
