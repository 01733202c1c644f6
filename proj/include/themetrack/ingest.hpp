#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace themetrack {

struct YearMonth {
    int year = 0;
    int month = 1;

    auto operator<=>(const YearMonth&) const = default;
};

// Accepts "YYYY-MM". With allow_year_only, a bare "YYYY" maps to January
// (or December when as_end is set).
YearMonth parse_year_month(std::string_view text, bool allow_year_only = false, bool as_end = false);
std::string to_string(const YearMonth& ym);

struct Document {
    std::string id;
    std::string title;
    std::string abstract;
    int year = 0;
    std::optional<int> month;

    bool operator==(const Document&) const = default;
};

// Position used for timeframe assignment; year-only records count as January.
inline YearMonth date_key(const Document& doc) { return {doc.year, doc.month.value_or(1)}; }

// Month precision when the record has a month; year-only records are kept
// whenever their year lies within [from.year, to.year].
bool within_range(const Document& doc, const YearMonth& from, const YearMonth& to);

struct Corpus {
    std::vector<Document> documents;
    std::vector<std::string> query_phrases;
    YearMonth from{1990, 1};
    YearMonth to{2022, 2};
    std::string retrieved_at;
};

const std::vector<std::string>& default_query_phrases();

using InvertedAbstract = std::map<std::string, std::vector<std::int64_t>>;

/// Rebuilds running text from a word -> positions map. Gaps in the position
/// sequence are skipped. Throws ReconstructionError when two different words
/// claim one position.
std::string reconstruct_abstract(const InvertedAbstract& inverted);

// Lowercase + whitespace collapse, used for phrase matching.
std::string normalize_text(std::string_view text);

bool matches_query(const Document& doc, std::span<const std::string> phrases);

struct AssemblyStats {
    std::size_t records = 0;
    std::size_t duplicates = 0;
    std::size_t rejected_by_query = 0;
    std::size_t rejected_by_date = 0;
    std::size_t empty_abstracts = 0;
};

/// Deduplicates by id, re-checks query and date range locally and sorts by id.
/// The result does not depend on the order of the input records.
std::vector<Document> assemble_documents(std::span<const Document> records, std::span<const std::string> phrases,
                                         const YearMonth& from, const YearMonth& to,
                                         AssemblyStats* stats = nullptr);

// JSON Lines cache: one {"id","title","abstract","year","month"} object per line.
std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path);
std::string corpus_to_jsonl(std::span<const Document> documents);
void write_corpus_jsonl(const std::filesystem::path& path, std::span<const Document> documents);

struct TimeframeBoundary {
    std::string label;
    YearMonth start;
    YearMonth end;  // inclusive
};

const std::vector<TimeframeBoundary>& default_timeframes();

// "label=start..end[,label=start..end...]"; start/end are YYYY or YYYY-MM.
std::vector<TimeframeBoundary> parse_timeframes(std::string_view spec);

struct TimeframeBin {
    TimeframeBoundary boundary;
    std::vector<Document> documents;
};

struct TimeframePartition {
    std::vector<TimeframeBin> bins;
    std::size_t excluded = 0;
};

/// Assigns each document to the unique bin holding its date. Documents outside
/// every bin are tallied in `excluded`. Throws ConfigError on unordered or
/// overlapping boundaries.
TimeframePartition partition_timeframes(std::span<const Document> documents,
                                        std::span<const TimeframeBoundary> boundaries);

}  // namespace themetrack
