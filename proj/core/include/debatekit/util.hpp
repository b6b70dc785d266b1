#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace debatekit {

/// Error with a stable machine-readable code alongside the human message.
/// Codes are the kebab-case names used throughout the operation contracts
/// (e.g. "single-class-labels", "scoring-unavailable").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

/// One structured problem found while parsing an input file.
struct ParseIssue {
    std::size_t line = 0;  // 1-based; 0 when not line-addressable
    std::string code;
    std::string detail;
};

/// Parser output: a value plus any issues. Callers must treat the value as
/// unusable unless ok().
template <typename T>
struct Parsed {
    T value{};
    std::vector<ParseIssue> issues;

    bool ok() const { return issues.empty(); }
    void issue(std::size_t line, std::string code, std::string detail) {
        issues.push_back({line, std::move(code), std::move(detail)});
    }
};

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);

/// Unicode NFC normalization of UTF-8 text. Invalid UTF-8 passes through
/// with replacement characters rather than failing.
std::string nfc(const std::string& utf8);

/// One CSV record, handling quoted fields with embedded commas/quotes.
std::vector<std::string> parse_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

std::string read_file(const std::filesystem::path& p);
std::optional<std::string> read_file_if_exists(const std::filesystem::path& p);
/// Write via temp file + rename so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

std::string sha256_hex(std::string_view data);

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(std::string_view text);

/// Shortest float formatting that round-trips (printf %.17g pruned).
std::string format_double(double v);

/// Split text into lines, keeping line numbers stable; trailing newline does
/// not produce an empty final line.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace debatekit
