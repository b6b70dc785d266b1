#pragma once

#include "debatekit/model.hpp"
#include "debatekit/util.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace debatekit {

/// Honorific tokens stripped from either end of a name during normalization.
const std::vector<std::string>& default_honorifics();

/// Lowercase, hyphens to spaces, punctuation stripped, whitespace collapsed,
/// honorific tokens removed from both ends. Throws
/// Error("empty-after-normalization") when nothing is left.
std::string normalize_name(const std::string& raw,
                           const std::vector<std::string>& honorifics = default_honorifics());

/// Classic Metaphone code of one token (letters only, uppercase output).
std::string metaphone(std::string_view token);

/// Space-joined Metaphone codes, one per whitespace token.
std::string phonetic_key(std::string_view normalized_name);

int levenshtein(std::string_view a, std::string_view b);

/// Best similarity of the shorter string against every same-length window of
/// the longer, as 100 * (1 - levenshtein / window length).
int partial_ratio(std::string_view a, std::string_view b);

/// partial_ratio over the strings with their tokens sorted lexicographically.
int partial_token_sort_ratio(std::string_view a, std::string_view b);

struct ClusterOptions {
    int fuzzy_threshold = 85;    // [0, 100]
    bool use_phonetic = true;
    std::vector<std::string> honorifics = default_honorifics();
};

struct ClusterResult {
    std::vector<PanelistCluster> clusters;
    /// normalized variant -> index into clusters
    std::map<std::string, int> assignment;
    /// raw names that normalized to nothing
    std::vector<ParseIssue> skipped;
};

/// Greedy single-pass clustering: names are visited by descending corpus
/// frequency (ties lexicographic); a name joins the first cluster whose
/// founder it fuzzy-matches at or above the threshold, or whose founder
/// shares its phonetic key; otherwise it founds a new cluster. The final
/// canonical name is the most frequent variant (ties lexicographic).
ClusterResult cluster_names(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& candidates,
    const ClusterOptions& options = {});

struct RosterRow {
    std::string canonical_name;  // normalized
    std::optional<Occupation> occupation;
    std::optional<std::string> affiliation;
};

/// CSV `canonical_name,occupation,affiliation`; empty/None fields allowed.
Parsed<std::vector<RosterRow>> parse_roster(std::string_view csv);

struct RosterJoin {
    std::vector<PanelistCluster> clusters;
    std::vector<RosterRow> unmatched;
};

/// Exact-match join on canonical name; unmatched roster rows are reported.
RosterJoin attach_roster(std::vector<PanelistCluster> clusters,
                         const std::vector<RosterRow>& roster);

}  // namespace debatekit
