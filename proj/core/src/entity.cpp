#include "debatekit/entity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

namespace debatekit {

const std::vector<std::string>& default_honorifics() {
    static const std::vector<std::string> kList = {
        "mr", "mrs", "ms", "dr", "prof", "general", "major",
        "col", "shri", "sahab", "ji",
    };
    return kList;
}

std::string normalize_name(const std::string& raw,
                           const std::vector<std::string>& honorifics) {
    std::string lowered = to_lower(nfc(raw));
    std::string cleaned;
    cleaned.reserve(lowered.size());
    for (char c : lowered) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            cleaned.push_back(c);
        } else if (c == '-' || std::isspace(uc)) {
            cleaned.push_back(' ');
        }
        // other punctuation vanishes, joining the surrounding letters
    }
    auto tokens = split_whitespace(collapse_whitespace(cleaned));

    auto is_honorific = [&](const std::string& t) {
        return std::find(honorifics.begin(), honorifics.end(), t) != honorifics.end();
    };
    std::size_t lo = 0;
    std::size_t hi = tokens.size();
    while (lo < hi && is_honorific(tokens[lo])) ++lo;
    while (hi > lo && is_honorific(tokens[hi - 1])) --hi;

    std::string out;
    for (std::size_t i = lo; i < hi; ++i) {
        if (!out.empty()) out.push_back(' ');
        out += tokens[i];
    }
    if (out.empty()) {
        throw Error("empty-after-normalization", "'" + raw + "'");
    }
    return out;
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

}  // namespace

std::string metaphone(std::string_view token) {
    std::string s;
    s.reserve(token.size());
    for (char c : token) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalpha(uc)) s.push_back(static_cast<char>(std::tolower(uc)));
    }
    if (s.empty()) return "";

    // initial-letter exceptions
    if (s.size() >= 2) {
        const std::string head = s.substr(0, 2);
        if (head == "kn" || head == "gn" || head == "pn" || head == "wr" || head == "ae") {
            s.erase(0, 1);
        } else if (head == "wh") {
            s = "w" + s.substr(2);
        }
    }
    if (s[0] == 'x') s[0] = 's';

    std::string out;
    const std::size_t n = s.size();
    std::size_t i = 0;
    while (i < n) {
        const char c = s[i];
        const char prev = i > 0 ? s[i - 1] : '\0';
        const char nxt = i + 1 < n ? s[i + 1] : '\0';
        const char nxt2 = i + 2 < n ? s[i + 2] : '\0';

        // doubled letters collapse (except c); skip the first so the survivor
        // keeps the later right-context, e.g. "sayyad" -> SYT
        if (c == nxt && c != 'c') {
            ++i;
            continue;
        }

        switch (c) {
            case 'a': case 'e': case 'i': case 'o': case 'u':
                if (i == 0) out.push_back(static_cast<char>(std::toupper(c)));
                break;
            case 'b':
                if (!(i == n - 1 && prev == 'm')) out.push_back('B');
                break;
            case 'c':
                if (nxt == 'i' && nxt2 == 'a') {
                    out.push_back('X');
                } else if (nxt == 'h') {
                    out.push_back(prev == 's' ? 'K' : 'X');
                    ++i;
                } else if (nxt == 'i' || nxt == 'e' || nxt == 'y') {
                    out.push_back('S');
                } else {
                    out.push_back('K');
                }
                break;
            case 'd':
                if (nxt == 'g' && (nxt2 == 'i' || nxt2 == 'e' || nxt2 == 'y')) {
                    out.push_back('J');
                    ++i;
                } else {
                    out.push_back('T');
                }
                break;
            case 'f': case 'l': case 'm': case 'n': case 'r':
                out.push_back(static_cast<char>(std::toupper(c)));
                break;
            case 'g':
                if (nxt == 'h') {
                    if (i + 2 >= n || is_vowel(nxt2)) {
                        out.push_back('K');
                    }
                    ++i;  // gh handled as a unit; silent when not before a vowel
                } else if (nxt == 'n') {
                    // silent as in gnome/sign
                } else if (nxt == 'i' || nxt == 'e' || nxt == 'y') {
                    out.push_back('J');
                } else {
                    out.push_back('K');
                }
                break;
            case 'h':
                if (!(is_vowel(prev) && !is_vowel(nxt))) out.push_back('H');
                break;
            case 'j':
                out.push_back('J');
                break;
            case 'k':
                if (prev != 'c') out.push_back('K');
                break;
            case 'p':
                if (nxt == 'h') {
                    out.push_back('F');
                    ++i;
                } else {
                    out.push_back('P');
                }
                break;
            case 'q':
                out.push_back('K');
                break;
            case 's':
                if (nxt == 'h') {
                    out.push_back('X');
                    ++i;
                } else if (nxt == 'i' && (nxt2 == 'o' || nxt2 == 'a')) {
                    out.push_back('X');
                } else {
                    out.push_back('S');
                }
                break;
            case 't':
                if (nxt == 'h') {
                    out.push_back('0');
                    ++i;
                } else if (nxt == 'i' && (nxt2 == 'o' || nxt2 == 'a')) {
                    out.push_back('X');
                } else {
                    out.push_back('T');
                }
                break;
            case 'v':
                out.push_back('F');
                break;
            case 'w':
                if (is_vowel(nxt)) out.push_back('W');
                break;
            case 'x':
                out += "KS";
                break;
            case 'y':
                if (is_vowel(nxt)) out.push_back('Y');
                break;
            case 'z':
                out.push_back('S');
                break;
            default:
                break;
        }
        ++i;
    }
    return out;
}

std::string phonetic_key(std::string_view normalized_name) {
    std::string out;
    for (const auto& token : split_whitespace(normalized_name)) {
        const std::string code = metaphone(token);
        if (code.empty()) continue;
        if (!out.empty()) out.push_back(' ');
        out += code;
    }
    return out;
}

int levenshtein(std::string_view a, std::string_view b) {
    if (a.size() < b.size()) std::swap(a, b);
    std::vector<int> prev(b.size() + 1);
    std::vector<int> cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

int partial_ratio(std::string_view a, std::string_view b) {
    std::string_view shorter = a.size() <= b.size() ? a : b;
    std::string_view longer = a.size() <= b.size() ? b : a;
    if (shorter.empty()) return longer.empty() ? 100 : 0;

    const std::size_t m = shorter.size();
    double best = 0.0;
    for (std::size_t i = 0; i + m <= longer.size(); ++i) {
        const auto window = longer.substr(i, m);
        const int d = levenshtein(shorter, window);
        best = std::max(best, 1.0 - static_cast<double>(d) / static_cast<double>(m));
        if (best == 1.0) break;
    }
    return static_cast<int>(std::lround(100.0 * best));
}

namespace {

std::string token_sorted(std::string_view s) {
    auto tokens = split_whitespace(s);
    std::sort(tokens.begin(), tokens.end());
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

}  // namespace

int partial_token_sort_ratio(std::string_view a, std::string_view b) {
    return partial_ratio(token_sorted(a), token_sorted(b));
}

ClusterResult cluster_names(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& candidates,
    const ClusterOptions& options) {
    ClusterResult result;

    // corpus frequency of each normalized name
    std::map<std::string, long> freq;
    for (const auto& [video_id, names] : candidates) {
        for (const auto& raw : names) {
            try {
                ++freq[normalize_name(raw, options.honorifics)];
            } catch (const Error&) {
                result.skipped.push_back({0, "empty-after-normalization",
                                          video_id + ": '" + raw + "'"});
            }
        }
    }

    std::vector<std::pair<std::string, long>> order(freq.begin(), freq.end());
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second != b.second) return a.second > b.second;
                         return a.first < b.first;
                     });

    struct Founder {
        std::string name;
        std::string phonetic;
    };
    std::vector<Founder> founders;

    for (const auto& [name, count] : order) {
        const std::string phon = phonetic_key(name);
        int target = -1;
        for (std::size_t c = 0; c < founders.size(); ++c) {
            const bool fuzzy =
                partial_token_sort_ratio(name, founders[c].name) >= options.fuzzy_threshold;
            const bool phonetic = options.use_phonetic && !phon.empty() &&
                                  phon == founders[c].phonetic;
            if (fuzzy || phonetic) {
                target = static_cast<int>(c);
                break;
            }
        }
        if (target < 0) {
            target = static_cast<int>(founders.size());
            founders.push_back({name, phon});
            PanelistCluster cluster;
            cluster.cluster_id = target;
            result.clusters.push_back(std::move(cluster));
        }
        auto& cluster = result.clusters[static_cast<std::size_t>(target)];
        cluster.variants.insert(name);
        cluster.frequency += count;
        result.assignment[name] = target;
    }

    // canonical = most frequent variant, ties lexicographic
    for (auto& cluster : result.clusters) {
        long best_count = -1;
        for (const auto& v : cluster.variants) {
            const long c = freq.at(v);
            if (c > best_count || (c == best_count && v < cluster.canonical_name)) {
                best_count = c;
                cluster.canonical_name = v;
            }
        }
        cluster.low_confidence = cluster.frequency <= 1;
    }
    return result;
}

Parsed<std::vector<RosterRow>> parse_roster(std::string_view csv) {
    Parsed<std::vector<RosterRow>> result;
    const auto lines = split_lines(csv);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (trim(lines[i]).empty()) continue;
        const auto f = parse_csv_line(lines[i]);
        if (i == 0 && f.size() == 3 && f[0] == "canonical_name") continue;  // header
        if (f.size() != 3) {
            result.issue(i + 1, "malformed-row",
                         "expected 3 fields, got " + std::to_string(f.size()));
            continue;
        }
        RosterRow row;
        try {
            row.canonical_name = normalize_name(f[0]);
        } catch (const Error&) {
            result.issue(i + 1, "empty-after-normalization", f[0]);
            continue;
        }
        const std::string occ = trim(f[1]);
        if (!occ.empty() && to_lower(occ) != "none") {
            row.occupation = parse_occupation(occ);
            if (!row.occupation) {
                result.issue(i + 1, "unknown-occupation", occ);
                continue;
            }
        }
        const std::string aff = trim(f[2]);
        if (!aff.empty() && to_lower(aff) != "none") row.affiliation = aff;
        result.value.push_back(std::move(row));
    }
    return result;
}

RosterJoin attach_roster(std::vector<PanelistCluster> clusters,
                         const std::vector<RosterRow>& roster) {
    RosterJoin out;
    std::map<std::string, std::size_t> by_canonical;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
        by_canonical[clusters[i].canonical_name] = i;
    }
    for (const auto& row : roster) {
        auto it = by_canonical.find(row.canonical_name);
        if (it == by_canonical.end()) {
            out.unmatched.push_back(row);
            continue;
        }
        clusters[it->second].occupation = row.occupation;
        clusters[it->second].affiliation = row.affiliation;
    }
    out.clusters = std::move(clusters);
    return out;
}

}  // namespace debatekit
