#include "debatekit/ingest.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace debatekit {

using nlohmann::json;

namespace {

bool get_string(const json& j, const char* key, std::string& out,
                Parsed<VideoRecord>& result) {
    if (!j.contains(key)) {
        result.issue(0, "missing-field", key);
        return false;
    }
    if (!j.at(key).is_string()) {
        result.issue(0, "type-mismatch", key);
        return false;
    }
    out = nfc(j.at(key).get<std::string>());
    return true;
}

}  // namespace

Parsed<VideoRecord> parse_metadata(std::string_view bytes) {
    Parsed<VideoRecord> result;
    json j = json::parse(bytes, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        result.issue(0, "malformed-json", "metadata is not a JSON object");
        return result;
    }

    VideoRecord rec;
    bool ok = true;
    ok &= get_string(j, "id", rec.video_id, result);
    ok &= get_string(j, "title", rec.title, result);
    ok &= get_string(j, "description", rec.description, result);

    if (!j.contains("tags")) {
        result.issue(0, "missing-field", "tags");
        ok = false;
    } else if (!j.at("tags").is_array()) {
        result.issue(0, "type-mismatch", "tags");
        ok = false;
    } else {
        for (const auto& t : j.at("tags")) {
            if (!t.is_string()) {
                result.issue(0, "type-mismatch", "tags");
                ok = false;
                break;
            }
            rec.tags.push_back(nfc(t.get<std::string>()));
        }
    }

    if (!j.contains("duration_s")) {
        result.issue(0, "missing-field", "duration_s");
        ok = false;
    } else if (!j.at("duration_s").is_number()) {
        result.issue(0, "type-mismatch", "duration_s");
        ok = false;
    } else {
        rec.duration_s = j.at("duration_s").get<double>();
    }

    ok &= get_string(j, "published_at", rec.published_at, result);

    if (ok) result.value = std::move(rec);
    return result;
}

Parsed<std::vector<TranscriptSegment>> parse_transcript(std::string_view bytes) {
    Parsed<std::vector<TranscriptSegment>> result;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        json j = json::parse(lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.issue(line_no, "malformed-line", "not a JSON object");
            continue;
        }
        TranscriptSegment seg;
        try {
            seg.video_id = nfc(j.at("video_id").get<std::string>());
            seg.start_s = j.at("start_s").get<double>();
            seg.end_s = j.at("end_s").get<double>();
            seg.speaker = nfc(j.at("speaker").get<std::string>());
            seg.text = nfc(j.at("text").get<std::string>());
        } catch (const json::exception& e) {
            result.issue(line_no, "malformed-line", e.what());
            continue;
        }
        if (!(seg.start_s < seg.end_s)) {
            result.issue(line_no, "inverted-span",
                         "start " + format_double(seg.start_s) + " >= end " +
                             format_double(seg.end_s));
            continue;
        }
        seg.overlapped = false;
        result.value.push_back(std::move(seg));
    }
    std::stable_sort(result.value.begin(), result.value.end(),
                     [](const TranscriptSegment& a, const TranscriptSegment& b) {
                         return a.start_s < b.start_s;
                     });
    return result;
}

Parsed<std::vector<RttmSpan>> parse_rttm(std::string_view bytes, RttmClass expected) {
    Parsed<std::vector<RttmSpan>> result;
    const char* want = expected == RttmClass::speaker ? "SPEAKER" : "OVERLAP";
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        const std::string line = trim(lines[i]);
        if (line.empty() || line.rfind(";;", 0) == 0) continue;  // comments
        const auto fields = split_whitespace(line);
        if (fields.size() != 10) {
            result.issue(line_no, "malformed-rttm",
                         "expected 10 fields, got " + std::to_string(fields.size()));
            continue;
        }
        if (fields[0] != want) {
            result.issue(line_no, "wrong-type-field", fields[0]);
            continue;
        }
        RttmSpan span;
        span.video_id = nfc(fields[1]);
        try {
            span.start_s = std::stod(fields[3]);
            span.dur_s = std::stod(fields[4]);
        } catch (const std::exception&) {
            result.issue(line_no, "malformed-rttm", "non-numeric tbeg/tdur");
            continue;
        }
        if (!(span.dur_s > 0.0)) continue;  // zero/negative spans are dropped
        span.label = nfc(fields[7]);
        result.value.push_back(std::move(span));
    }
    return result;
}

Parsed<std::vector<FaceObservation>> parse_faces(std::string_view bytes) {
    Parsed<std::vector<FaceObservation>> result;
    const auto lines = split_lines(bytes);
    if (lines.empty()) {
        result.issue(0, "malformed-row", "missing header");
        return result;
    }
    const auto header = parse_csv_line(lines[0]);
    const std::vector<std::string> expect = {"video_id", "t_s", "x", "y",
                                             "w", "h", "gender", "confidence"};
    if (header != expect) {
        result.issue(1, "malformed-row", "unexpected header");
        return result;
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        const auto f = parse_csv_line(lines[i]);
        if (f.size() != 8) {
            result.issue(line_no, "malformed-row",
                         "expected 8 fields, got " + std::to_string(f.size()));
            continue;
        }
        FaceObservation obs;
        obs.video_id = nfc(f[0]);
        try {
            obs.t_s = std::stod(f[1]);
            obs.x = std::stod(f[2]);
            obs.y = std::stod(f[3]);
            obs.w = std::stod(f[4]);
            obs.h = std::stod(f[5]);
            obs.confidence = std::stod(f[7]);
        } catch (const std::exception&) {
            result.issue(line_no, "malformed-row", "non-numeric field");
            continue;
        }
        const std::string g = to_lower(trim(f[6]));
        if (g == "male" || g == "m" || g == "man") {
            obs.gender = Gender::male;
        } else if (g == "female" || g == "f" || g == "woman") {
            obs.gender = Gender::female;
        } else {
            result.issue(line_no, "unknown-gender", f[6]);
            continue;
        }
        if (!(obs.w > 0.0) || !(obs.h > 0.0)) {
            result.issue(line_no, "malformed-row", "nonpositive box size");
            continue;
        }
        if (obs.confidence < 0.0 || obs.confidence > 1.0) {
            result.issue(line_no, "malformed-row", "confidence outside [0,1]");
            continue;
        }
        result.value.push_back(std::move(obs));
    }
    return result;
}

Parsed<std::vector<OcrRow>> parse_ocr(std::string_view bytes) {
    Parsed<std::vector<OcrRow>> result;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        json j = json::parse(lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.issue(line_no, "malformed-row", "not a JSON object");
            continue;
        }
        OcrRow row;
        try {
            row.video_id = nfc(j.at("video_id").get<std::string>());
            row.t_s = j.at("t_s").get<double>();
            row.text = nfc(j.at("text").get<std::string>());
        } catch (const json::exception& e) {
            result.issue(line_no, "malformed-row", e.what());
            continue;
        }
        result.value.push_back(std::move(row));
    }
    return result;
}

Parsed<std::vector<NameCandidates>> parse_name_candidates(std::string_view bytes) {
    Parsed<std::vector<NameCandidates>> result;
    const auto lines = split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t line_no = i + 1;
        if (trim(lines[i]).empty()) continue;
        json j = json::parse(lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.issue(line_no, "malformed-row", "not a JSON object");
            continue;
        }
        NameCandidates row;
        try {
            row.video_id = nfc(j.at("video_id").get<std::string>());
            for (const auto& n : j.at("candidates")) {
                row.names.push_back(nfc(n.get<std::string>()));
            }
        } catch (const json::exception& e) {
            result.issue(line_no, "malformed-row", e.what());
            continue;
        }
        result.value.push_back(std::move(row));
    }
    return result;
}

std::vector<TranscriptSegment> mark_overlap(std::vector<TranscriptSegment> segments,
                                            const std::vector<RttmSpan>& overlap_spans,
                                            double min_intersection_s) {
    for (auto& seg : segments) {
        double covered = 0.0;
        for (const auto& span : overlap_spans) {
            const double lo = std::max(seg.start_s, span.start_s);
            const double hi = std::min(seg.end_s, span.end_s());
            if (hi > lo) covered = std::max(covered, hi - lo);
        }
        seg.overlapped = covered > min_intersection_s;
    }
    return segments;
}

std::vector<ParseIssue> validate_face_grid(const std::vector<FaceObservation>& faces,
                                           double frame_interval_s) {
    std::vector<ParseIssue> issues;
    if (!(frame_interval_s > 0.0)) return issues;
    for (const auto& obs : faces) {
        const double q = obs.t_s / frame_interval_s;
        if (std::fabs(q - std::round(q)) > 1e-9) {
            issues.push_back({0, "off-grid-timestamp",
                              obs.video_id + " face at t=" + format_double(obs.t_s)});
        }
    }
    return issues;
}

Parsed<CorpusManifest> discover_corpus(const std::filesystem::path& root) {
    Parsed<CorpusManifest> result;
    result.value.root = root;
    std::error_code ec;
    if (!std::filesystem::is_directory(root, ec)) {
        result.issue(0, "missing-path", root.string());
        return result;
    }
    std::vector<std::filesystem::path> dirs;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
        if (entry.is_directory()) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    for (const auto& dir : dirs) {
        VideoArtifacts art;
        art.video_id = dir.filename().string();
        art.metadata = dir / "metadata.json";
        if (!std::filesystem::exists(art.metadata)) {
            result.issue(0, "missing-metadata", art.video_id);
            continue;
        }
        auto opt = [&](const char* name) {
            auto p = dir / name;
            return std::filesystem::exists(p) ? p : std::filesystem::path{};
        };
        art.transcript = opt("transcript.jsonl");
        art.diarization = opt("diarization.rttm");
        art.overlap = opt("overlap.rttm");
        art.faces = opt("faces.csv");
        art.ocr = opt("ocr.jsonl");
        art.names = opt("names.jsonl");
        art.audio = opt("audio.wav");
        result.value.videos.push_back(std::move(art));
    }
    if (result.value.videos.empty() && result.ok()) {
        result.issue(0, "corpus-empty", root.string());
    }
    return result;
}

}  // namespace debatekit
