#include "themetrack/ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fmt/format.h>
#include <set>
#include <sstream>
#include <tuple>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"

namespace themetrack {

using nlohmann::json;

namespace {

std::optional<int> parse_int(std::string_view s) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

}  // namespace

YearMonth parse_year_month(std::string_view text, bool allow_year_only, bool as_end) {
    const auto dash = text.find('-');
    if (dash == std::string_view::npos) {
        auto year = parse_int(text);
        if (allow_year_only && year && text.size() == 4) return {*year, as_end ? 12 : 1};
        throw ConfigError(fmt::format("expected YYYY-MM, got '{}'", text));
    }
    auto year = parse_int(text.substr(0, dash));
    auto month = parse_int(text.substr(dash + 1));
    if (!year || !month || dash != 4 || *month < 1 || *month > 12) {
        throw ConfigError(fmt::format("expected YYYY-MM, got '{}'", text));
    }
    return {*year, *month};
}

std::string to_string(const YearMonth& ym) { return fmt::format("{:04d}-{:02d}", ym.year, ym.month); }

bool within_range(const Document& doc, const YearMonth& from, const YearMonth& to) {
    if (doc.month) {
        const YearMonth at{doc.year, *doc.month};
        return from <= at && at <= to;
    }
    return from.year <= doc.year && doc.year <= to.year;
}

const std::vector<std::string>& default_query_phrases() {
    static const std::vector<std::string> phrases{"artificial intelligence", "machine learning", "deep learning",
                                                  "data science"};
    return phrases;
}

std::string reconstruct_abstract(const InvertedAbstract& inverted) {
    std::vector<std::pair<std::int64_t, const std::string*>> placed;
    for (const auto& [word, positions] : inverted) {
        for (auto pos : positions) {
            if (pos < 0) throw ReconstructionError(pos);
            placed.emplace_back(pos, &word);
        }
    }
    std::sort(placed.begin(), placed.end(),
              [](const auto& a, const auto& b) { return std::tie(a.first, *a.second) < std::tie(b.first, *b.second); });
    std::string text;
    for (std::size_t i = 0; i < placed.size(); ++i) {
        if (i > 0 && placed[i].first == placed[i - 1].first) {
            if (*placed[i].second != *placed[i - 1].second) throw ReconstructionError(placed[i].first);
            continue;
        }
        if (!text.empty()) text.push_back(' ');
        text += *placed[i].second;
    }
    return text;
}

std::string normalize_text(std::string_view text) {
    std::string out;
    bool pending_space = false;
    for (char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isspace(uc)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(uc)));
    }
    return out;
}

bool matches_query(const Document& doc, std::span<const std::string> phrases) {
    const auto title = normalize_text(doc.title);
    const auto abstract = normalize_text(doc.abstract);
    return std::any_of(phrases.begin(), phrases.end(), [&](const std::string& phrase) {
        const auto needle = normalize_text(phrase);
        if (needle.empty()) return false;
        return title.find(needle) != std::string::npos || abstract.find(needle) != std::string::npos;
    });
}

std::vector<Document> assemble_documents(std::span<const Document> records, std::span<const std::string> phrases,
                                         const YearMonth& from, const YearMonth& to, AssemblyStats* stats) {
    AssemblyStats local;
    std::map<std::string, Document> unique;
    for (const auto& doc : records) {
        ++local.records;
        if (!within_range(doc, from, to)) {
            ++local.rejected_by_date;
            continue;
        }
        if (!matches_query(doc, phrases)) {
            ++local.rejected_by_query;
            continue;
        }
        auto [it, inserted] = unique.try_emplace(doc.id, doc);
        if (!inserted) {
            ++local.duplicates;
            // Keep the smaller variant so arrival order cannot change the result.
            auto key = [](const Document& d) { return std::tie(d.title, d.abstract, d.year, d.month); };
            if (key(doc) < key(it->second)) it->second = doc;
        }
    }
    std::vector<Document> documents;
    documents.reserve(unique.size());
    for (auto& [id, doc] : unique) {
        if (doc.abstract.empty()) ++local.empty_abstracts;
        documents.push_back(std::move(doc));
    }
    if (stats) *stats = local;
    return documents;
}

std::vector<Document> read_corpus_jsonl(const std::filesystem::path& path) {
    const auto content = io::read_file(path);
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    std::vector<Document> documents;
    std::set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Document doc;
        try {
            const auto j = json::parse(line);
            doc.id = j.at("id").get<std::string>();
            doc.title = j.value("title", "");
            doc.abstract = j.value("abstract", "");
            doc.year = j.at("year").get<int>();
            if (j.contains("month") && !j.at("month").is_null()) doc.month = j.at("month").get<int>();
        } catch (const json::exception& e) {
            throw LoadError(fmt::format("bad corpus record in {}: {}", path.string(), e.what()), line_no);
        }
        if (doc.id.empty()) throw LoadError("empty document id in " + path.string(), line_no);
        if (doc.year < 1000) throw LoadError("implausible year in " + path.string(), line_no);
        if (doc.month && (*doc.month < 1 || *doc.month > 12)) throw LoadError("month out of range", line_no);
        if (!seen.insert(doc.id).second) throw LoadError("duplicate document id " + doc.id, line_no);
        documents.push_back(std::move(doc));
    }
    std::sort(documents.begin(), documents.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return documents;
}

std::string corpus_to_jsonl(std::span<const Document> documents) {
    std::vector<const Document*> sorted;
    for (const auto& d : documents) sorted.push_back(&d);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->id < b->id; });
    std::string out;
    for (const auto* d : sorted) {
        json j{{"id", d->id}, {"title", d->title}, {"abstract", d->abstract}, {"year", d->year}};
        if (d->month) j["month"] = *d->month;
        out += j.dump();
        out.push_back('\n');
    }
    return out;
}

void write_corpus_jsonl(const std::filesystem::path& path, std::span<const Document> documents) {
    io::write_file_atomic(path, corpus_to_jsonl(documents));
}

const std::vector<TimeframeBoundary>& default_timeframes() {
    static const std::vector<TimeframeBoundary> bins{
        {"1990-94", {1990, 1}, {1994, 12}}, {"1995-99", {1995, 1}, {1999, 12}}, {"2000-04", {2000, 1}, {2004, 12}},
        {"2005-09", {2005, 1}, {2009, 12}}, {"2010-14", {2010, 1}, {2014, 12}}, {"2015-19", {2015, 1}, {2019, 12}},
        {"2020-22", {2020, 1}, {2022, 2}},
    };
    return bins;
}

std::vector<TimeframeBoundary> parse_timeframes(std::string_view spec) {
    std::vector<TimeframeBoundary> out;
    while (!spec.empty()) {
        const auto comma = spec.find(',');
        auto entry = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
        const auto eq = entry.find('=');
        const auto dots = entry.find("..");
        if (eq == std::string_view::npos || dots == std::string_view::npos || dots < eq || eq == 0) {
            throw ConfigError(fmt::format("bad timeframe '{}', expected label=start..end", entry));
        }
        out.push_back({std::string(entry.substr(0, eq)), parse_year_month(entry.substr(eq + 1, dots - eq - 1), true),
                       parse_year_month(entry.substr(dots + 2), true, true)});
    }
    if (out.empty()) throw ConfigError("empty timeframe specification");
    return out;
}

TimeframePartition partition_timeframes(std::span<const Document> documents,
                                        std::span<const TimeframeBoundary> boundaries) {
    std::set<std::string> labels;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const auto& b = boundaries[i];
        if (b.end < b.start) throw ConfigError("timeframe " + b.label + " ends before it starts");
        if (i > 0 && !(boundaries[i - 1].end < b.start)) {
            throw ConfigError("timeframes " + boundaries[i - 1].label + " and " + b.label + " overlap or are unordered");
        }
        if (!labels.insert(b.label).second) throw ConfigError("duplicate timeframe label " + b.label);
    }
    TimeframePartition partition;
    for (const auto& b : boundaries) partition.bins.push_back({b, {}});
    for (const auto& doc : documents) {
        const auto key = date_key(doc);
        auto it = std::find_if(partition.bins.begin(), partition.bins.end(), [&](const TimeframeBin& bin) {
            return bin.boundary.start <= key && key <= bin.boundary.end;
        });
        if (it == partition.bins.end()) {
            ++partition.excluded;
        } else {
            it->documents.push_back(doc);
        }
    }
    return partition;
}

}  // namespace themetrack
