// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/harness.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "aga/log.hpp"
#include "aga/metrics.hpp"
#include "aga/rng.hpp"

namespace aga {

namespace {

using json = nlohmann::json;

std::string pad4(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d", index);
    return buf;
}

std::string kind_name(ScenarioKind kind) {
    return kind == ScenarioKind::Track ? "track" : "swap";
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("config: unknown key \"" + key + "\" in " + where);
        }
    }
}

struct VideoSpec {
    std::string video_id;
    ScenarioKind kind;
    std::uint64_t seed;
};

std::vector<VideoSpec> suite_videos(const ExperimentConfig& cfg) {
    std::vector<VideoSpec> videos;
    const bool want_track = cfg.kind_filter == "both" || cfg.kind_filter == "track";
    const bool want_swap = cfg.kind_filter == "both" || cfg.kind_filter == "swap";
    if (want_track) {
        for (int i = 0; i < cfg.suite.num_track_videos; ++i) {
            videos.push_back({"track-" + pad4(i), ScenarioKind::Track,
                              video_seed(cfg.suite.seed, "track", i)});
        }
    }
    if (want_swap) {
        for (int i = 0; i < cfg.suite.num_swap_videos; ++i) {
            videos.push_back(
                {"swap-" + pad4(i), ScenarioKind::Swap, video_seed(cfg.suite.seed, "swap", i)});
        }
    }
    return videos;
}

std::vector<ManifestEntry> filtered_manifest(const ExperimentConfig& cfg) {
    std::vector<ManifestEntry> entries = read_manifest(manifest_path(cfg));
    if (cfg.kind_filter != "both") {
        std::erase_if(entries,
                      [&](const ManifestEntry& e) { return e.kind != cfg.kind_filter; });
    }
    return entries;
}

std::vector<VariantConfig> active_variants(const ExperimentConfig& cfg) {
    require(!cfg.variants.empty(), "config: at least one tracker variant is required");
    return cfg.variants;
}

}  // namespace

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.variants = {
        {"full", TrackerConfig{}},
        {"no-app", TrackerConfig{.fusion = {1.0, 0.0}}},
        {"no-mem", TrackerConfig{.use_memory = false}},
        {"neither", TrackerConfig{.use_memory = false, .fusion = {1.0, 0.0}}},
        {"literal", TrackerConfig{.literal_order = true}},
    };
    return cfg;
}

std::uint64_t video_seed(std::uint64_t suite_seed, const std::string& kind, int index) {
    const std::uint64_t kind_tag = kind == "track" ? 0x747261636bULL : 0x73776170ULL;
    return mix_seed(mix_seed(suite_seed ^ kind_tag) + static_cast<std::uint64_t>(index));
}

namespace {

ExperimentConfig parse_config(const json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be an object");
    reject_unknown_keys(root, {"suite", "simulator", "variants", "out_dir", "jobs"}, "config");

    ExperimentConfig cfg = default_config();

    if (root.contains("suite")) {
        const json& s = root["suite"];
        reject_unknown_keys(s,
                            {"num_track_videos", "num_swap_videos", "seed", "frames",
                             "min_instances", "max_instances", "resolutions", "margin",
                             "min_axis_frac", "max_axis_frac", "embed_dim", "num_classes",
                             "mask_scale", "swap_mode"},
                            "suite");
        cfg.suite.num_track_videos = s.value("num_track_videos", cfg.suite.num_track_videos);
        cfg.suite.num_swap_videos = s.value("num_swap_videos", cfg.suite.num_swap_videos);
        cfg.suite.seed = s.value("seed", cfg.suite.seed);
        ScenarioParams& p = cfg.suite.scenario;
        p.frames = s.value("frames", p.frames);
        p.min_instances = s.value("min_instances", p.min_instances);
        p.max_instances = s.value("max_instances", p.max_instances);
        if (s.contains("resolutions")) p.resolutions = s["resolutions"].get<std::vector<int>>();
        p.margin = s.value("margin", p.margin);
        p.min_axis_frac = s.value("min_axis_frac", p.min_axis_frac);
        p.max_axis_frac = s.value("max_axis_frac", p.max_axis_frac);
        p.embed_dim = s.value("embed_dim", p.embed_dim);
        p.num_classes = s.value("num_classes", p.num_classes);
        p.mask_scale = s.value("mask_scale", p.mask_scale);
        if (s.contains("swap_mode")) {
            const std::string mode = s["swap_mode"];
            if (mode == "permanent") {
                p.swap_mode = SwapMode::Permanent;
            } else if (mode == "momentary") {
                p.swap_mode = SwapMode::Momentary;
            } else {
                throw ConfigError("config: swap_mode must be permanent or momentary");
            }
        }
    }

    if (root.contains("simulator")) {
        const json& s = root["simulator"];
        reject_unknown_keys(s,
                            {"alpha_loc", "sigma_obj", "sigma_app", "sigma_conf", "dropout_rate",
                             "appearance_source", "seed"},
                            "simulator");
        cfg.simulator.alpha_loc = s.value("alpha_loc", cfg.simulator.alpha_loc);
        cfg.simulator.sigma_obj = s.value("sigma_obj", cfg.simulator.sigma_obj);
        cfg.simulator.sigma_app = s.value("sigma_app", cfg.simulator.sigma_app);
        cfg.simulator.sigma_conf = s.value("sigma_conf", cfg.simulator.sigma_conf);
        cfg.simulator.dropout_rate = s.value("dropout_rate", cfg.simulator.dropout_rate);
        cfg.simulator.seed = s.value("seed", cfg.simulator.seed);
        if (s.contains("appearance_source")) {
            const std::string source = s["appearance_source"];
            if (source == "latent") {
                cfg.simulator.appearance_source = AppearanceSource::Latent;
            } else if (source == "pooled") {
                cfg.simulator.appearance_source = AppearanceSource::Pooled;
            } else {
                throw ConfigError("config: appearance_source must be latent or pooled");
            }
        }
    }

    if (root.contains("variants")) {
        cfg.variants.clear();
        for (const json& v : root["variants"]) {
            reject_unknown_keys(v,
                                {"name", "window", "use_memory", "lambda_obj", "lambda_app",
                                 "literal_order", "memory_scale"},
                                "variant");
            VariantConfig variant;
            if (!v.contains("name")) throw ConfigError("config: variant without a name");
            variant.name = v["name"];
            variant.tracker.window = v.value("window", variant.tracker.window);
            variant.tracker.use_memory = v.value("use_memory", variant.tracker.use_memory);
            variant.tracker.fusion.lambda_obj =
                v.value("lambda_obj", variant.tracker.fusion.lambda_obj);
            variant.tracker.fusion.lambda_app =
                v.value("lambda_app", variant.tracker.fusion.lambda_app);
            variant.tracker.literal_order = v.value("literal_order", variant.tracker.literal_order);
            variant.tracker.memory_scale = v.value("memory_scale", variant.tracker.memory_scale);
            cfg.variants.push_back(std::move(variant));
        }
        if (cfg.variants.empty()) throw ConfigError("config: variants must not be empty");
    }

    cfg.out_dir = root.value("out_dir", cfg.out_dir.string());
    cfg.jobs = root.value("jobs", cfg.jobs);
    if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
    return cfg;
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    try {
        return parse_config(root);
    } catch (const json::exception& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
}

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& overrides) {
    if (overrides.out_dir) cfg.out_dir = *overrides.out_dir;
    if (overrides.seed) cfg.suite.seed = *overrides.seed;
    if (overrides.jobs) {
        if (*overrides.jobs < 1) throw ConfigError("config: jobs must be >= 1");
        cfg.jobs = *overrides.jobs;
    }
    if (overrides.kind) {
        if (*overrides.kind != "track" && *overrides.kind != "swap" &&
            *overrides.kind != "both") {
            throw ConfigError("config: kind must be track, swap or both");
        }
        cfg.kind_filter = *overrides.kind;
    }
    if (overrides.variants) {
        std::vector<VariantConfig> kept;
        for (const std::string& name : *overrides.variants) {
            bool found = false;
            for (const VariantConfig& v : cfg.variants) {
                if (v.name == name) {
                    kept.push_back(v);
                    found = true;
                    break;
                }
            }
            if (!found) throw ConfigError("config: unknown variant \"" + name + "\"");
        }
        cfg.variants = std::move(kept);
    }
}

std::filesystem::path dataset_dir(const ExperimentConfig& cfg) { return cfg.out_dir / "dataset"; }

std::filesystem::path manifest_path(const ExperimentConfig& cfg) {
    return dataset_dir(cfg) / "manifest.json";
}

std::filesystem::path tracks_dir(const ExperimentConfig& cfg, const std::string& variant) {
    return cfg.out_dir / "tracks" / variant;
}

std::filesystem::path reports_dir(const ExperimentConfig& cfg) { return cfg.out_dir / "reports"; }

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    if (jobs <= 1 || count == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, count);
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

void cmd_generate(const ExperimentConfig& cfg) {
    const std::vector<VideoSpec> videos = suite_videos(cfg);
    require(!videos.empty(), "generate: suite is empty");

    const std::filesystem::path dir = dataset_dir(cfg) / "videos";
    std::filesystem::create_directories(dir);

    const auto start = std::chrono::steady_clock::now();
    parallel_for(static_cast<int>(videos.size()), cfg.jobs, [&](int i) {
        const VideoSpec& spec = videos[i];
        ScenarioData data;
        data.scenario = sample_scenario(spec.seed, spec.kind, cfg.suite.scenario);
        data.scenario.video_id = spec.video_id;
        data.gt = build_ground_truth(data.scenario);
        data.detections = simulate_detections(data.scenario, data.gt, cfg.simulator);
        write_scenario(dir / (spec.video_id + ".jsonl"), data);
        log_debug("generated " + spec.video_id);
    });

    std::vector<ManifestEntry> entries;
    entries.reserve(videos.size());
    for (const VideoSpec& spec : videos) {
        entries.push_back(ManifestEntry{spec.video_id, kind_name(spec.kind), spec.seed,
                                        "videos/" + spec.video_id + ".jsonl"});
    }
    write_manifest(manifest_path(cfg), entries);

    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    log_info("generate: " + std::to_string(videos.size()) + " videos in " + std::to_string(ms) +
             " ms");
}

void cmd_track(const ExperimentConfig& cfg) {
    const std::vector<ManifestEntry> entries = filtered_manifest(cfg);
    require(!entries.empty(), "track: manifest has no matching videos");

    std::string missing;
    for (const ManifestEntry& e : entries) {
        if (!std::filesystem::exists(dataset_dir(cfg) / e.file)) {
            missing += missing.empty() ? e.video_id : ", " + e.video_id;
        }
    }
    if (!missing.empty()) {
        throw IoError("file_missing", 0, "track: missing scenario files for: " + missing);
    }

    for (const VariantConfig& variant : active_variants(cfg)) {
        const std::filesystem::path dir = tracks_dir(cfg, variant.name);
        std::filesystem::create_directories(dir);

        const auto start = std::chrono::steady_clock::now();
        parallel_for(static_cast<int>(entries.size()), cfg.jobs, [&](int i) {
            const ManifestEntry& e = entries[i];
            const ScenarioData data = read_scenario(dataset_dir(cfg) / e.file);
            const TrackOutput output =
                track_video(data.detections, variant.tracker, e.video_id);
            write_track_output(dir / (e.video_id + ".jsonl"), output, variant.name,
                               variant.tracker);
            log_debug("tracked " + e.video_id + " (" + variant.name + ")");
        });
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
        log_info("track: variant " + variant.name + ": " + std::to_string(entries.size()) +
                 " videos in " + std::to_string(ms) + " ms");
    }
}

namespace {

AggregateReport evaluate_impl(const ExperimentConfig& cfg) {
    const std::vector<ManifestEntry> entries = filtered_manifest(cfg);
    require(!entries.empty(), "evaluate: manifest has no matching videos");
    const std::vector<VariantConfig> variants = active_variants(cfg);

    std::string missing;
    for (const VariantConfig& variant : variants) {
        for (const ManifestEntry& e : entries) {
            if (!std::filesystem::exists(tracks_dir(cfg, variant.name) / (e.video_id + ".jsonl"))) {
                missing += missing.empty() ? variant.name + "/" + e.video_id
                                           : ", " + variant.name + "/" + e.video_id;
            }
        }
    }
    if (!missing.empty()) {
        throw IoError("file_missing", 0, "evaluate: missing track outputs for: " + missing);
    }

    struct VideoEval {
        std::vector<VideoReport> per_variant;
        std::vector<std::vector<ApCandidate>> ap_per_variant;
        std::vector<std::vector<int>> flat_assignment;  // concatenated slot streams
    };
    std::vector<VideoEval> evals(entries.size());

    parallel_for(static_cast<int>(entries.size()), cfg.jobs, [&](int i) {
        const ManifestEntry& e = entries[i];
        const ScenarioData data = read_scenario(dataset_dir(cfg) / e.file);

        VideoEval& eval = evals[i];
        eval.per_variant.resize(variants.size());
        eval.ap_per_variant.resize(variants.size());
        eval.flat_assignment.resize(variants.size());

        for (std::size_t v = 0; v < variants.size(); ++v) {
            TrackFileData track =
                read_track_output(tracks_dir(cfg, variants[v].name) / (e.video_id + ".jsonl"));
            if (track.output.video_id != e.video_id) {
                throw IoError("manifest_mismatch", 0,
                              "evaluate: track file for " + e.video_id + " reports video_id " +
                                  track.output.video_id);
            }

            // Re-join masks from the dataset: slot k emitted the detection of
            // instance gt_ids[k], whose detector mask is the visible mask.
            for (TrackFrame& frame : track.output.frames) {
                require(!frame.gt_ids.empty(), "evaluate: track output lacks gt ids");
                frame.masks.resize(track.output.n);
                for (int slot = 0; slot < track.output.n; ++slot) {
                    frame.masks[slot] =
                        data.gt.frames[frame.frame_index - 1].instances[frame.gt_ids[slot]]
                            .visible_mask;
                }
            }

            VideoReport report;
            report.video_id = e.video_id;
            report.kind = e.kind;
            report.frames = static_cast<int>(track.output.frames.size());
            report.instances = track.output.n;
            report.id_switches = count_id_switches(track.output, data.gt);
            report.accuracy = association_accuracy(track.output, data.gt);
            eval.per_variant[v] = std::move(report);
            eval.ap_per_variant[v] = ap_candidates(track.output, data.gt);

            for (const TrackFrame& frame : track.output.frames) {
                eval.flat_assignment[v].insert(eval.flat_assignment[v].end(),
                                               frame.slot_to_detection.begin(),
                                               frame.slot_to_detection.end());
            }
        }
    });

    AggregateReport report;
    const std::vector<std::string> kinds = {"track", "swap"};
    for (std::size_t v = 0; v < variants.size(); ++v) {
        for (const std::string& kind : kinds) {
            ReportCell cell;
            cell.variant = variants[v].name;
            cell.kind = kind;
            std::vector<std::vector<ApCandidate>> ap_videos;
            double accuracy_sum = 0.0;
            for (std::size_t i = 0; i < entries.size(); ++i) {
                if (entries[i].kind != kind) continue;
                const VideoReport& video = evals[i].per_variant[v];
                ++cell.videos;
                accuracy_sum += video.accuracy;
                cell.id_switches += video.id_switches;
                ap_videos.push_back(evals[i].ap_per_variant[v]);
            }
            if (cell.videos == 0) continue;
            cell.accuracy = accuracy_sum / cell.videos;
            cell.has_ap = true;
            cell.ap = ap_from_candidates(ap_videos);
            report.cells.push_back(std::move(cell));
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            report.per_video.push_back(PerVideoRow{variants[v].name, evals[i].per_variant[v]});
        }
    }

    for (std::size_t a = 0; a < variants.size(); ++a) {
        for (std::size_t b = a + 1; b < variants.size(); ++b) {
            OutputDiff diff;
            diff.variant_a = variants[a].name;
            diff.variant_b = variants[b].name;
            for (const VideoEval& eval : evals) {
                if (eval.flat_assignment[a] != eval.flat_assignment[b]) ++diff.videos_differing;
            }
            report.output_diffs.push_back(std::move(diff));
        }
    }

    return report;
}

}  // namespace

AggregateReport cmd_evaluate(const ExperimentConfig& cfg) {
    AggregateReport report = evaluate_impl(cfg);
    write_report(reports_dir(cfg), report);
    return report;
}

AggregateReport cmd_sweep(const ExperimentConfig& cfg, const std::vector<int>& windows) {
    require(!windows.empty(), "sweep: no window sizes");

    ExperimentConfig sweep_cfg = cfg;
    sweep_cfg.variants.clear();
    for (int w : windows) {
        VariantConfig variant;
        variant.name = "w" + std::to_string(w);
        variant.tracker.window = w;
        sweep_cfg.variants.push_back(std::move(variant));
    }

    cmd_track(sweep_cfg);
    AggregateReport report = evaluate_impl(sweep_cfg);

    std::filesystem::create_directories(reports_dir(cfg));
    std::ofstream out(reports_dir(cfg) / "window_sweep.csv", std::ios::binary);
    if (!out) throw IoError("file_unwritable", 0, "sweep: cannot write window_sweep.csv");
    out << "window,kind,videos,accuracy,id_switches\n";
    for (int w : windows) {
        const std::string name = "w" + std::to_string(w);
        for (const ReportCell& cell : report.cells) {
            if (cell.variant != name) continue;
            out << w << "," << cell.kind << "," << cell.videos << ","
                << format_double(cell.accuracy) << "," << cell.id_switches << "\n";
        }
    }
    return report;
}

}  // namespace aga
