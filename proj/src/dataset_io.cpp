// Copyright (c) 2026 aga contributors
// SPDX-License-Identifier: Apache-2.0

#include "aga/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>

namespace aga {

namespace {

using json = nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Eigen::VectorXd json_to_vector(const json& arr) {
    Eigen::VectorXd v(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) v[static_cast<Eigen::Index>(i)] = arr[i];
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd json_to_matrix(const json& rows) {
    if (rows.empty()) return {};
    Eigen::MatrixXd m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

json rle_to_json(const RleMask& r) {
    return json{{"w", r.width}, {"h", r.height}, {"counts", r.counts}};
}

RleMask json_to_rle(const json& j) {
    RleMask r;
    r.width = j.at("w");
    r.height = j.at("h");
    r.counts = j.at("counts").get<std::vector<std::int64_t>>();
    return r;
}

// Reads one JSON value per line, reporting parse failures with line numbers.
class LineReader {
  public:
    explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw IoError("file_missing", 0, "cannot open " + path.string());
    }

    bool next(json& out) {
        std::string line;
        if (!std::getline(in_, line)) return false;
        ++line_no_;
        try {
            out = json::parse(line);
        } catch (const json::parse_error& e) {
            throw IoError("malformed_json", line_no_,
                          path_.string() + ":" + std::to_string(line_no_) + ": " + e.what());
        }
        return true;
    }

    std::size_t line_no() const { return line_no_; }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::size_t line_no_ = 0;
};

void check_header(const json& header, const std::string& expected_type, const LineReader& reader) {
    if (!header.is_object() || !header.contains("format_version") || !header.contains("type")) {
        throw IoError("bad_header", reader.line_no(),
                      reader.path().string() + ": first line is not a header record");
    }
    if (header.at("type") != expected_type) {
        throw IoError("bad_header", reader.line_no(),
                      reader.path().string() + ": expected a " + expected_type + " file");
    }
    const int version = header.at("format_version");
    if (version != kFormatVersion) {
        throw IoError("version_error", reader.line_no(),
                      reader.path().string() + ": unsupported format_version " +
                          std::to_string(version));
    }
}

[[noreturn]] void throw_truncated(const LineReader& reader, int got, int want) {
    throw IoError("truncated", reader.line_no(),
                  reader.path().string() + ": expected " + std::to_string(want) +
                      " frame records but the file ends after line " +
                      std::to_string(reader.line_no()) + " (" + std::to_string(got) + " frames)");
}

void check_frame_index(const json& record, int expected, const LineReader& reader) {
    const int got = record.at("frame_index");
    if (got != expected) {
        throw IoError("bad_frame_order", reader.line_no(),
                      reader.path().string() + ":" + std::to_string(reader.line_no()) +
                          ": expected frame_index " + std::to_string(expected) + ", got " +
                          std::to_string(got));
    }
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("file_unwritable", 0, "cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

void write_scenario(const std::filesystem::path& path, const ScenarioData& data) {
    const Scenario& sc = data.scenario;
    require(data.gt.frames.size() == static_cast<std::size_t>(sc.frames),
            "write_scenario: ground truth frame count mismatch");
    require(data.detections.size() == static_cast<std::size_t>(sc.frames),
            "write_scenario: detection frame count mismatch");

    std::ofstream out = open_out(path);

    json header{{"type", "scenario"},
                {"format_version", kFormatVersion},
                {"video_id", sc.video_id},
                {"kind", sc.kind == ScenarioKind::Track ? "track" : "swap"},
                {"frames", sc.frames},
                {"width", sc.width},
                {"height", sc.height},
                {"mask_scale", sc.mask_scale},
                {"seed", sc.seed}};
    if (sc.kind == ScenarioKind::Swap) {
        header["swap_frame"] = sc.swap_frame;
        header["swap_pair"] = {sc.swap_pair[0], sc.swap_pair[1]};
        header["swap_mode"] = sc.swap_mode == SwapMode::Permanent ? "permanent" : "momentary";
    }
    json instances = json::array();
    for (const InstanceSpec& inst : sc.instances) {
        json control = json::array();
        for (const auto& cp : inst.trajectory.control) control.push_back({cp.x(), cp.y()});
        instances.push_back(json{{"id", inst.id},
                                 {"class_id", inst.class_id},
                                 {"axes", {inst.axes_px.x(), inst.axes_px.y()}},
                                 {"depth_rank", inst.depth_rank},
                                 {"latent", vector_to_json(inst.latent_appearance)},
                                 {"control", std::move(control)}});
    }
    header["instances"] = std::move(instances);
    out << header.dump() << "\n";

    const int n = static_cast<int>(sc.instances.size());
    for (int f = 0; f < sc.frames; ++f) {
        const FrameTruth& truth = data.gt.frames[f];
        const FrameDetections& det = data.detections[f];
        require(det.gt_ids.size() == static_cast<std::size_t>(n),
                "write_scenario: detections must carry gt ids");

        // Detections are stored per instance; det_order recovers the
        // detection-order shuffle on read.
        std::vector<int> det_order(det.gt_ids.begin(), det.gt_ids.end());
        std::vector<int> instance_to_det(n, -1);
        for (int slot = 0; slot < n; ++slot) instance_to_det[det_order[slot]] = slot;

        json record{{"frame_index", truth.frame_index}, {"det_order", det_order}};
        json inst_records = json::array();
        for (int k = 0; k < n; ++k) {
            const FrameInstanceTruth& it = truth.instances[k];
            const int slot = instance_to_det[k];
            require(slot >= 0, "write_scenario: missing detection for instance");
            inst_records.push_back(
                json{{"id", k},
                     {"center", {it.center.x(), it.center.y()}},
                     {"visibility", it.visibility},
                     {"conf", det.conf[slot]},
                     {"e_obj", vector_to_json(det.e_obj.vectors.row(slot).transpose())},
                     {"e_app", vector_to_json(det.e_app.vectors.row(slot).transpose())},
                     {"mask", rle_to_json(it.visible_mask)},
                     {"full_mask", rle_to_json(it.full_mask)}});
        }
        record["instances"] = std::move(inst_records);
        out << record.dump() << "\n";
    }
}

ScenarioData read_scenario(const std::filesystem::path& path) {
    LineReader reader(path);

    json header;
    if (!reader.next(header)) {
        throw IoError("truncated", 0, path.string() + ": empty file");
    }
    check_header(header, "scenario", reader);

    ScenarioData data;
    Scenario& sc = data.scenario;
    sc.video_id = header.at("video_id");
    sc.kind = header.at("kind") == "swap" ? ScenarioKind::Swap : ScenarioKind::Track;
    sc.frames = header.at("frames");
    sc.width = header.at("width");
    sc.height = header.at("height");
    sc.mask_scale = header.at("mask_scale");
    sc.seed = header.at("seed");
    if (sc.kind == ScenarioKind::Swap) {
        sc.swap_frame = header.at("swap_frame");
        sc.swap_pair = {header.at("swap_pair")[0].get<int>(), header.at("swap_pair")[1].get<int>()};
        sc.swap_mode =
            header.at("swap_mode") == "momentary" ? SwapMode::Momentary : SwapMode::Permanent;
    }
    for (const json& j : header.at("instances")) {
        InstanceSpec inst;
        inst.id = j.at("id");
        inst.class_id = j.at("class_id");
        inst.axes_px = {j.at("axes")[0].get<double>(), j.at("axes")[1].get<double>()};
        inst.depth_rank = j.at("depth_rank");
        inst.latent_appearance = json_to_vector(j.at("latent"));
        for (int c = 0; c < 4; ++c) {
            inst.trajectory.control[c] = {j.at("control")[c][0].get<double>(),
                                          j.at("control")[c][1].get<double>()};
        }
        sc.instances.push_back(std::move(inst));
    }

    const int n = static_cast<int>(sc.instances.size());
    const int dim = n > 0 ? static_cast<int>(sc.instances[0].latent_appearance.size()) : 0;

    json record;
    int frames_read = 0;
    while (frames_read < sc.frames && reader.next(record)) {
        check_frame_index(record, frames_read + 1, reader);

        FrameTruth truth;
        truth.frame_index = frames_read + 1;
        truth.instances.resize(n);

        FrameDetections det;
        det.frame_index = truth.frame_index;
        det.e_obj.vectors.resize(n, dim);
        det.e_app.vectors.resize(n, dim);
        det.conf.resize(n);
        det.class_ids.resize(n);
        det.masks.resize(n);
        det.gt_ids = record.at("det_order").get<std::vector<int>>();

        std::vector<int> instance_to_det(n, -1);
        for (int slot = 0; slot < n; ++slot) instance_to_det[det.gt_ids[slot]] = slot;

        for (const json& j : record.at("instances")) {
            const int k = j.at("id");
            FrameInstanceTruth& it = truth.instances.at(k);
            it.center = {j.at("center")[0].get<double>(), j.at("center")[1].get<double>()};
            it.visibility = j.at("visibility");
            it.visible_mask = json_to_rle(j.at("mask"));
            it.full_mask = json_to_rle(j.at("full_mask"));

            const int slot = instance_to_det.at(k);
            det.conf[slot] = j.at("conf");
            det.e_obj.vectors.row(slot) = json_to_vector(j.at("e_obj")).transpose();
            det.e_app.vectors.row(slot) = json_to_vector(j.at("e_app")).transpose();
            det.class_ids[slot] = sc.instances[k].class_id;
            det.masks[slot] = it.visible_mask;
        }

        data.gt.frames.push_back(std::move(truth));
        data.detections.push_back(std::move(det));
        ++frames_read;
    }
    if (frames_read < sc.frames) throw_truncated(reader, frames_read, sc.frames);
    if (reader.next(record)) {
        throw IoError("trailing_data", reader.line_no(),
                      path.string() + ": unexpected data after the last frame");
    }
    return data;
}

void write_track_output(const std::filesystem::path& path, const TrackOutput& output,
                        const std::string& variant, const TrackerConfig& config) {
    std::ofstream out = open_out(path);

    json header{{"type", "track"},
                {"format_version", kFormatVersion},
                {"video_id", output.video_id},
                {"variant", variant},
                {"n", output.n},
                {"frames", output.frames.size()},
                {"config",
                 {{"window", config.window},
                  {"use_memory", config.use_memory},
                  {"lambda_obj", config.fusion.lambda_obj},
                  {"lambda_app", config.fusion.lambda_app},
                  {"literal_order", config.literal_order},
                  {"memory_scale", config.memory_scale}}}};
    out << header.dump() << "\n";

    for (const TrackFrame& frame : output.frames) {
        json record{{"frame_index", frame.frame_index},
                    {"slot_to_detection", frame.slot_to_detection},
                    {"class_ids", frame.class_ids},
                    {"conf", vector_to_json(frame.conf)}};
        if (!frame.gt_ids.empty()) record["gt_ids"] = frame.gt_ids;
        if (frame.fused_scores.size() > 0) record["scores"] = matrix_to_json(frame.fused_scores);
        out << record.dump() << "\n";
    }
}

TrackFileData read_track_output(const std::filesystem::path& path) {
    LineReader reader(path);

    json header;
    if (!reader.next(header)) {
        throw IoError("truncated", 0, path.string() + ": empty file");
    }
    check_header(header, "track", reader);

    TrackFileData data;
    data.output.video_id = header.at("video_id");
    data.output.n = header.at("n");
    data.variant = header.at("variant");
    const json& cfg = header.at("config");
    data.config.window = cfg.at("window");
    data.config.use_memory = cfg.at("use_memory");
    data.config.fusion.lambda_obj = cfg.at("lambda_obj");
    data.config.fusion.lambda_app = cfg.at("lambda_app");
    data.config.literal_order = cfg.at("literal_order");
    data.config.memory_scale = cfg.at("memory_scale");

    const int frames = header.at("frames");
    json record;
    int frames_read = 0;
    while (frames_read < frames && reader.next(record)) {
        check_frame_index(record, frames_read + 1, reader);
        TrackFrame frame;
        frame.frame_index = frames_read + 1;
        frame.slot_to_detection = record.at("slot_to_detection").get<std::vector<int>>();
        frame.class_ids = record.at("class_ids").get<std::vector<int>>();
        frame.conf = json_to_vector(record.at("conf"));
        if (record.contains("gt_ids")) frame.gt_ids = record.at("gt_ids").get<std::vector<int>>();
        if (record.contains("scores")) frame.fused_scores = json_to_matrix(record.at("scores"));
        data.output.frames.push_back(std::move(frame));
        ++frames_read;
    }
    if (frames_read < frames) throw_truncated(reader, frames_read, frames);
    if (reader.next(record)) {
        throw IoError("trailing_data", reader.line_no(),
                      path.string() + ": unexpected data after the last frame");
    }
    return data;
}

void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries) {
    std::ofstream out = open_out(path);
    json videos = json::array();
    for (const ManifestEntry& e : entries) {
        videos.push_back(json{
            {"video_id", e.video_id}, {"kind", e.kind}, {"seed", e.seed}, {"file", e.file}});
    }
    json manifest{
        {"type", "manifest"}, {"format_version", kFormatVersion}, {"videos", std::move(videos)}};
    out << manifest.dump(1) << "\n";
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("file_missing", 0, "cannot open " + path.string());
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("malformed_json", 0, path.string() + ": " + e.what());
    }
    if (!manifest.is_object() || manifest.value("type", "") != "manifest") {
        throw IoError("bad_header", 0, path.string() + ": not a manifest");
    }
    if (manifest.at("format_version") != kFormatVersion) {
        throw IoError("version_error", 0, path.string() + ": unsupported format_version");
    }
    std::vector<ManifestEntry> entries;
    for (const json& j : manifest.at("videos")) {
        entries.push_back(ManifestEntry{j.at("video_id"), j.at("kind"), j.at("seed"), j.at("file")});
    }
    return entries;
}

void write_report(const std::filesystem::path& dir, const AggregateReport& report) {
    std::filesystem::create_directories(dir);

    json cells = json::array();
    for (const ReportCell& c : report.cells) {
        json cell{{"variant", c.variant},
                  {"kind", c.kind},
                  {"videos", c.videos},
                  {"accuracy", c.accuracy},
                  {"id_switches", c.id_switches}};
        if (c.has_ap) {
            cell["ap"] = c.ap.ap;
            cell["ap50"] = c.ap.ap50;
            cell["ap75"] = c.ap.ap75;
        }
        cells.push_back(std::move(cell));
    }
    json diffs = json::array();
    for (const OutputDiff& d : report.output_diffs) {
        diffs.push_back(json{{"variant_a", d.variant_a},
                             {"variant_b", d.variant_b},
                             {"videos_differing", d.videos_differing}});
    }
    json rows = json::array();
    for (const PerVideoRow& row : report.per_video) {
        rows.push_back(json{{"variant", row.variant},
                            {"video_id", row.video.video_id},
                            {"kind", row.video.kind},
                            {"frames", row.video.frames},
                            {"instances", row.video.instances},
                            {"accuracy", row.video.accuracy},
                            {"id_switches", row.video.id_switches}});
    }
    json root{{"type", "report"},
              {"format_version", kFormatVersion},
              {"cells", std::move(cells)},
              {"output_diffs", std::move(diffs)},
              {"per_video", std::move(rows)}};
    {
        std::ofstream out = open_out(dir / "aggregate.json");
        out << root.dump(1) << "\n";
    }
    {
        std::ofstream out = open_out(dir / "aggregate.csv");
        out << "variant,kind,videos,accuracy,id_switches,ap,ap50,ap75\n";
        for (const ReportCell& c : report.cells) {
            out << c.variant << "," << c.kind << "," << c.videos << ","
                << format_double(c.accuracy) << "," << c.id_switches << ",";
            if (c.has_ap) {
                out << format_double(c.ap.ap) << "," << format_double(c.ap.ap50) << ","
                    << format_double(c.ap.ap75);
            } else {
                out << ",,";
            }
            out << "\n";
        }
    }
    {
        std::ofstream out = open_out(dir / "per_video.csv");
        out << "variant,video_id,kind,frames,instances,accuracy,id_switches\n";
        for (const PerVideoRow& row : report.per_video) {
            out << row.variant << "," << row.video.video_id << "," << row.video.kind << ","
                << row.video.frames << "," << row.video.instances << ","
                << format_double(row.video.accuracy) << "," << row.video.id_switches << "\n";
        }
    }
}

AggregateReport read_report(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw IoError("file_missing", 0, "cannot open " + json_path.string());
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw IoError("malformed_json", 0, json_path.string() + ": " + e.what());
    }
    if (!root.is_object() || root.value("type", "") != "report") {
        throw IoError("bad_header", 0, json_path.string() + ": not a report");
    }
    if (root.at("format_version") != kFormatVersion) {
        throw IoError("version_error", 0, json_path.string() + ": unsupported format_version");
    }
    AggregateReport report;
    for (const json& j : root.at("cells")) {
        ReportCell cell;
        cell.variant = j.at("variant");
        cell.kind = j.at("kind");
        cell.videos = j.at("videos");
        cell.accuracy = j.at("accuracy");
        cell.id_switches = j.at("id_switches");
        if (j.contains("ap")) {
            cell.has_ap = true;
            cell.ap.ap = j.at("ap");
            cell.ap.ap50 = j.at("ap50");
            cell.ap.ap75 = j.at("ap75");
        }
        report.cells.push_back(std::move(cell));
    }
    for (const json& j : root.at("output_diffs")) {
        report.output_diffs.push_back(
            OutputDiff{j.at("variant_a"), j.at("variant_b"), j.at("videos_differing")});
    }
    for (const json& j : root.at("per_video")) {
        PerVideoRow row;
        row.variant = j.at("variant");
        row.video.video_id = j.at("video_id");
        row.video.kind = j.at("kind");
        row.video.frames = j.at("frames");
        row.video.instances = j.at("instances");
        row.video.accuracy = j.at("accuracy");
        row.video.id_switches = j.at("id_switches");
        report.per_video.push_back(std::move(row));
    }
    return report;
}

}  // namespace aga
