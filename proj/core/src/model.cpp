#include "debatekit/model.hpp"

#include "debatekit/util.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

namespace debatekit {

namespace {

constexpr std::array<const char*, 16> kOccupationNames = {
    "tv related",  "academics",  "accountant", "activist",
    "advocate",    "analyst",    "author",     "civil servant",
    "consultant",  "doctor",     "film related", "journalist",
    "politician",  "religious leader", "social leader", "spokesperson",
};

}  // namespace

std::optional<Occupation> parse_occupation(const std::string& text) {
    std::string norm = collapse_whitespace(to_lower(text));
    std::replace(norm.begin(), norm.end(), '_', ' ');
    std::replace(norm.begin(), norm.end(), '-', ' ');
    for (std::size_t i = 0; i < kOccupationNames.size(); ++i) {
        if (norm == kOccupationNames[i]) return static_cast<Occupation>(i);
    }
    return std::nullopt;
}

std::string occupation_name(Occupation o) {
    return kOccupationNames[static_cast<std::size_t>(o)];
}

std::vector<ValidationError> validate_video(const VideoRecord& record,
                                            const std::vector<TranscriptSegment>& segments) {
    std::vector<ValidationError> errors;
    auto add = [&](const std::string& field, const std::string& reason) {
        errors.push_back({record.video_id, field, reason});
    };

    if (record.video_id.empty()) {
        errors.push_back({"", "video_id", "video_id is empty"});
    }
    if (!(record.duration_s > 0.0) || !std::isfinite(record.duration_s)) {
        add("duration_s", "nonpositive duration");
    }
    if (record.major_category &&
        record.minor_categories.count(*record.major_category) > 0) {
        add("major_category", "major category also listed as minor: " + *record.major_category);
    }

    // Segments are validated independently of their order.
    for (const auto& seg : segments) {
        if (!seg.video_id.empty() && seg.video_id != record.video_id) {
            add("segment.video_id",
                "segment belongs to video '" + seg.video_id + "'");
        }
        if (seg.start_s < 0.0) {
            add("segment.start_s", "negative start at " + format_double(seg.start_s));
        }
        if (!(seg.start_s < seg.end_s)) {
            add("segment.span", "inverted span [" + format_double(seg.start_s) + ", " +
                                    format_double(seg.end_s) + ")");
        }
        if (record.duration_s > 0.0 && seg.end_s > record.duration_s) {
            add("segment.end_s", "segment ends after video duration at " +
                                     format_double(seg.end_s));
        }
        if (seg.text.empty() && !seg.overlapped) {
            add("segment.text", "empty text on a non-overlapped segment at " +
                                    format_double(seg.start_s));
        }
    }
    return errors;
}

bool admit_for_analysis(const VideoRecord& record, const AdmissionPolicy& policy) {
    return record.duration_s >= policy.min_duration_s &&
           record.duration_s <= policy.max_duration_s;
}

std::optional<std::string> month_of(const std::string& published_at) {
    // expect at least "YYYY-MM"
    if (published_at.size() < 7 || published_at[4] != '-') return std::nullopt;
    for (int i : {0, 1, 2, 3, 5, 6}) {
        if (!std::isdigit(static_cast<unsigned char>(published_at[static_cast<std::size_t>(i)]))) {
            return std::nullopt;
        }
    }
    return published_at.substr(0, 7);
}

}  // namespace debatekit
