#pragma once

#include "debatekit/model.hpp"
#include "debatekit/util.hpp"

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace debatekit {

/// Ordered category list, highest priority first. The last entry is the
/// fallback used for videos that match nothing.
struct PriorityLadder {
    std::vector<CategoryId> order;

    bool contains(const CategoryId& c) const { return rank_of.count(c) > 0; }
    /// Lower rank = higher priority.
    int rank(const CategoryId& c) const { return rank_of.at(c); }
    const CategoryId& fallback() const { return order.back(); }

    std::map<CategoryId, int> rank_of;  // built by load_ladder
};

/// normalized lowercase tag -> category
struct TagMap {
    std::map<std::string, CategoryId> tag_to_category;
};

/// One category per line, highest priority first. Rejects duplicates.
Parsed<PriorityLadder> load_ladder(std::string_view text);

/// CSV `tag,category`; every category must exist in the ladder.
Parsed<TagMap> load_tagmap(std::string_view csv, const PriorityLadder& ladder);

/// suggestions.jsonl rows: {"video_id": ..., "categories": [...]}
Parsed<std::map<std::string, std::set<CategoryId>>> load_suggestions(std::string_view jsonl);

/// Lowercase + collapse internal whitespace, applied before tagmap lookup.
std::string normalize_tag(std::string_view tag);

/// Union of tag-mapped categories and externally supplied suggestions.
/// Unmapped tags are ignored; a suggestion outside the ladder throws
/// Error("unknown-category").
std::set<CategoryId> categories_for(const VideoRecord& record, const TagMap& tagmap,
                                    const std::set<CategoryId>& external_suggestions,
                                    const PriorityLadder& ladder);

struct MajorMinor {
    CategoryId major;
    std::set<CategoryId> minors;
};

/// Major = highest-priority member; throws Error("empty-category-set") when
/// categories is empty.
MajorMinor assign_major_minor(const std::set<CategoryId>& categories,
                              const PriorityLadder& ladder);

/// Same, but an empty set maps to the ladder's fallback category.
MajorMinor assign_with_fallback(const std::set<CategoryId>& categories,
                                const PriorityLadder& ladder);

}  // namespace debatekit
