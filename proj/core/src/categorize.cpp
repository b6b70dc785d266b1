#include "debatekit/categorize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace debatekit {

using nlohmann::json;

Parsed<PriorityLadder> load_ladder(std::string_view text) {
    Parsed<PriorityLadder> result;
    const auto lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string name = trim(lines[i]);
        if (name.empty() || name[0] == '#') continue;
        if (result.value.rank_of.count(name) > 0) {
            result.issue(i + 1, "duplicate-category", name);
            continue;
        }
        result.value.rank_of[name] = static_cast<int>(result.value.order.size());
        result.value.order.push_back(name);
    }
    if (result.value.order.empty()) {
        result.issue(0, "empty-ladder", "priority list has no categories");
    }
    return result;
}

Parsed<TagMap> load_tagmap(std::string_view csv, const PriorityLadder& ladder) {
    Parsed<TagMap> result;
    const auto lines = split_lines(csv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto fields = parse_csv_line(lines[i]);
        if (i == 0 && fields.size() == 2 && fields[0] == "tag" && fields[1] == "category") {
            continue;  // optional header
        }
        if (fields.size() != 2) {
            result.issue(i + 1, "malformed-row",
                         "expected 2 fields, got " + std::to_string(fields.size()));
            continue;
        }
        const std::string category = trim(fields[1]);
        if (!ladder.contains(category)) {
            result.issue(i + 1, "unknown-category", category);
            continue;
        }
        result.value.tag_to_category[normalize_tag(fields[0])] = category;
    }
    return result;
}

Parsed<std::map<std::string, std::set<CategoryId>>> load_suggestions(std::string_view jsonl) {
    Parsed<std::map<std::string, std::set<CategoryId>>> result;
    const auto lines = split_lines(jsonl);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        json j = json::parse(lines[i], nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            result.issue(i + 1, "malformed-row", "not a JSON object");
            continue;
        }
        try {
            auto& set = result.value[j.at("video_id").get<std::string>()];
            for (const auto& c : j.at("categories")) {
                set.insert(c.get<std::string>());
            }
        } catch (const json::exception& e) {
            result.issue(i + 1, "malformed-row", e.what());
        }
    }
    return result;
}

std::string normalize_tag(std::string_view tag) {
    return collapse_whitespace(to_lower(trim(tag)));
}

std::set<CategoryId> categories_for(const VideoRecord& record, const TagMap& tagmap,
                                    const std::set<CategoryId>& external_suggestions,
                                    const PriorityLadder& ladder) {
    std::set<CategoryId> out;
    for (const auto& tag : record.tags) {
        auto it = tagmap.tag_to_category.find(normalize_tag(tag));
        if (it != tagmap.tag_to_category.end()) out.insert(it->second);
    }
    for (const auto& suggestion : external_suggestions) {
        if (!ladder.contains(suggestion)) {
            throw Error("unknown-category", suggestion);
        }
        out.insert(suggestion);
    }
    return out;
}

MajorMinor assign_major_minor(const std::set<CategoryId>& categories,
                              const PriorityLadder& ladder) {
    if (categories.empty()) {
        throw Error("empty-category-set", "no categories to choose a major from");
    }
    const CategoryId* best = nullptr;
    for (const auto& c : categories) {
        if (!ladder.contains(c)) throw Error("unknown-category", c);
        if (best == nullptr || ladder.rank(c) < ladder.rank(*best)) best = &c;
    }
    MajorMinor out;
    out.major = *best;
    for (const auto& c : categories) {
        if (c != out.major) out.minors.insert(c);
    }
    return out;
}

MajorMinor assign_with_fallback(const std::set<CategoryId>& categories,
                                const PriorityLadder& ladder) {
    if (categories.empty()) return {ladder.fallback(), {}};
    return assign_major_minor(categories, ladder);
}

}  // namespace debatekit
