#pragma once

#include "debatekit/model.hpp"
#include "debatekit/util.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace debatekit {

struct ToxicityScores {
    double toxicity = 0.0;
    double severe_toxicity = 0.0;
    double profanity = 0.0;
    double insult = 0.0;
    double threat = 0.0;
    double identity_attack = 0.0;

    double max_attribute() const;
};

inline constexpr std::array<const char*, 6> kToxicityAttributes = {
    "toxicity", "severe_toxicity", "profanity", "insult", "threat", "identity_attack"};

/// True iff any attribute strictly exceeds the threshold.
bool is_foul(const ToxicityScores& scores, double threshold = 0.5);

class ToxicityClient {
public:
    virtual ~ToxicityClient() = default;
    virtual ToxicityScores score(const std::string& text) = 0;
};

struct LexiconEntry {
    std::vector<std::string> term_tokens;  // lowercase, one or more words
    std::string attribute;
    double weight = 0.0;
};

/// CSV `term,attribute,weight`, weights in [0,1].
Parsed<std::vector<LexiconEntry>> parse_lexicon(std::string_view csv);

/// Deterministic offline scorer: per attribute 1 - prod(1 - w) over matched
/// word-boundary terms.
class LexiconScorer : public ToxicityClient {
public:
    explicit LexiconScorer(std::vector<LexiconEntry> entries);
    ToxicityScores score(const std::string& text) override;

private:
    std::vector<LexiconEntry> entries_;
};

/// Append-only JSONL score cache keyed by SHA-256 of the utterance text.
class ScoreCache {
public:
    explicit ScoreCache(std::filesystem::path path);
    std::optional<ToxicityScores> lookup(const std::string& text);
    void insert(const std::string& text, const ToxicityScores& scores);

private:
    std::filesystem::path path_;
    std::map<std::string, ToxicityScores> entries_;
    std::mutex mu_;
};

struct RemoteScorerOptions {
    std::string endpoint;  // e.g. http://host:port/score
    std::string api_key;
    int retries = 3;
    int backoff_base_ms = 1000;
    int max_in_flight = 4;
    std::filesystem::path cache_path;  // empty disables caching
};

/// HTTP scoring client: POST {"text": ...} -> JSON with the six attributes.
/// Retries with exponential backoff; persistent cache hit short-circuits the
/// network entirely. Throws Error("scoring-unavailable") after retries run
/// out.
class RemoteScorer : public ToxicityClient {
public:
    explicit RemoteScorer(RemoteScorerOptions options);
    ~RemoteScorer() override;
    ToxicityScores score(const std::string& text) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct VideoToxicity {
    double toxic_utterance_fraction = 0.0;
    bool has_toxic_speech = false;
};

/// Scores every segment with nonempty text; fraction = foul / scored.
VideoToxicity video_toxicity(const std::vector<TranscriptSegment>& segments,
                             ToxicityClient& client, double threshold = 0.5);

}  // namespace debatekit
