#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace debatekit {

using CategoryId = std::string;

/// One debate video as fetched from the upstream metadata source. Immutable
/// after ingest; category fields are filled in by the categorizer.
struct VideoRecord {
    std::string video_id;
    std::string title;
    std::string description;
    std::vector<std::string> tags;
    double duration_s = 0.0;
    std::string published_at;  // ISO-8601 UTC, e.g. "2020-01-01T00:00:00Z"
    std::optional<CategoryId> major_category;
    std::set<CategoryId> minor_categories;
};

/// Diarized utterance attributed to one speaker label.
struct TranscriptSegment {
    std::string video_id;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string speaker;
    std::string text;
    bool overlapped = false;

    double duration() const { return end_s - start_s; }
};

enum class Gender : std::uint8_t { male, female };

/// One detected face at a sampled timestamp.
struct FaceObservation {
    std::string video_id;
    double t_s = 0.0;
    double x = 0.0, y = 0.0, w = 0.0, h = 0.0;  // pixels
    Gender gender = Gender::male;
    double confidence = 0.0;

    double area() const { return w * h; }
};

enum class Occupation : std::uint8_t {
    tv_related,
    academics,
    accountant,
    activist,
    advocate,
    analyst,
    author,
    civil_servant,
    consultant,
    doctor,
    film_related,
    journalist,
    politician,
    religious_leader,
    social_leader,
    spokesperson,
};

std::optional<Occupation> parse_occupation(const std::string& text);
std::string occupation_name(Occupation o);

/// A resolved panelist identity covering all observed spelling variants.
struct PanelistCluster {
    int cluster_id = 0;
    std::string canonical_name;
    std::set<std::string> variants;
    std::optional<Occupation> occupation;
    std::optional<std::string> affiliation;
    long frequency = 0;       // total mentions across the corpus
    bool low_confidence = false;  // seen only once corpus-wide
};

/// Per-video metric bundle produced by the analysis fan-out.
struct VideoAnalysis {
    std::string video_id;
    double overlap_fraction = 0.0;
    double toxic_utterance_fraction = 0.0;
    bool has_toxic_speech = false;
    double shouting_fraction = 0.0;
    std::vector<std::pair<double, double>> shouting_segments;
    double male_face_seconds = 0.0;
    double female_face_seconds = 0.0;
    std::set<int> panelists;  // cluster ids
};

struct ValidationError {
    std::string video_id;
    std::string field;
    std::string reason;
};

/// Checks every type invariant of the record and its segments; returns one
/// structured error per violation, empty when all hold. Order-insensitive
/// over segment permutations.
std::vector<ValidationError> validate_video(const VideoRecord& record,
                                            const std::vector<TranscriptSegment>& segments);

struct AdmissionPolicy {
    double min_duration_s = 600.0;    // 10 minutes
    double max_duration_s = 14400.0;  // 4 hours
};

/// Duration gate applied before any analysis. Boundaries inclusive.
bool admit_for_analysis(const VideoRecord& record, const AdmissionPolicy& policy = {});

/// Parses "YYYY-MM" out of an ISO timestamp, empty optional if malformed.
std::optional<std::string> month_of(const std::string& published_at);

}  // namespace debatekit
