#pragma once

#include "debatekit/model.hpp"
#include "debatekit/util.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace debatekit {

/// A timed span from an RTTM file (diarization or overlap annotation).
struct RttmSpan {
    std::string video_id;
    double start_s = 0.0;
    double dur_s = 0.0;
    std::string label;  // speaker name field

    double end_s() const { return start_s + dur_s; }
};

enum class RttmClass { speaker, overlap };

struct OcrRow {
    std::string video_id;
    double t_s = 0.0;
    std::string text;
};

struct NameCandidates {
    std::string video_id;
    std::vector<std::string> names;  // raw, as extracted upstream
};

/// All parsers are total: malformed input comes back as ParseIssues, never an
/// exception. Text fields are normalized to Unicode NFC; nothing else is
/// rewritten.

Parsed<VideoRecord> parse_metadata(std::string_view bytes);
Parsed<std::vector<TranscriptSegment>> parse_transcript(std::string_view bytes);
Parsed<std::vector<RttmSpan>> parse_rttm(std::string_view bytes, RttmClass expected);
Parsed<std::vector<FaceObservation>> parse_faces(std::string_view bytes);
Parsed<std::vector<OcrRow>> parse_ocr(std::string_view bytes);
Parsed<std::vector<NameCandidates>> parse_name_candidates(std::string_view bytes);

/// Marks segments whose span intersects any overlap span by more than
/// min_intersection_s. Inputs must belong to the same video.
std::vector<TranscriptSegment> mark_overlap(std::vector<TranscriptSegment> segments,
                                            const std::vector<RttmSpan>& overlap_spans,
                                            double min_intersection_s = 0.5);

/// Face timestamps must land on the sampling grid.
std::vector<ParseIssue> validate_face_grid(const std::vector<FaceObservation>& faces,
                                           double frame_interval_s);

/// Paths for one video's artifact files under the directory-layout convention
/// <root>/<video_id>/{metadata.json, transcript.jsonl, ...}. Optional files
/// are empty when absent.
struct VideoArtifacts {
    std::string video_id;
    std::filesystem::path metadata;
    std::filesystem::path transcript;
    std::filesystem::path diarization;
    std::filesystem::path overlap;
    std::filesystem::path faces;
    std::filesystem::path ocr;
    std::filesystem::path names;
    std::filesystem::path audio;
};

struct CorpusManifest {
    std::filesystem::path root;
    std::vector<VideoArtifacts> videos;  // sorted by video_id
};

/// Scans <root> for the per-video directory convention. A video directory
/// must contain metadata.json; everything else is optional.
Parsed<CorpusManifest> discover_corpus(const std::filesystem::path& root);

}  // namespace debatekit
