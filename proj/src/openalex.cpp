#include <httplib.h>

#include "themetrack/openalex.hpp"

#include <json.hpp>

#include <fmt/format.h>

#include <ctime>
#include <set>
#include <thread>

#include "themetrack/errors.hpp"

namespace themetrack::openalex {

using nlohmann::json;

namespace {

class HttpTransport final : public Transport {
public:
    HttpTransport(const std::string& base_url, std::chrono::seconds timeout) : client_(base_url) {
        client_.set_connection_timeout(timeout);
        client_.set_read_timeout(timeout);
        client_.set_follow_location(true);
    }

    HttpResponse get(const std::string& target) override {
        auto result = client_.Get(target);
        if (!result) return {0, httplib::to_string(result.error())};
        return {result->status, result->body};
    }

private:
    httplib::Client client_;
};

bool transient(int status) { return status == 0 || status == 429 || status >= 500; }

int days_in_month(int year, int month) {
    static constexpr int days[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return month == 2 && leap ? 29 : days[month - 1];
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec);
}

}  // namespace

std::unique_ptr<Transport> make_http_transport(const std::string& base_url, std::chrono::seconds timeout) {
    return std::make_unique<HttpTransport>(base_url, timeout);
}

std::string percent_encode(std::string_view value) {
    std::string out;
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(static_cast<char>(c));
        } else {
            out += fmt::format("%{:02X}", c);
        }
    }
    return out;
}

std::string works_filter(const FetchOptions& options) {
    std::string search;
    for (const auto& phrase : options.phrases) {
        if (!search.empty()) search.push_back('|');
        search += '"' + phrase + '"';
    }
    return fmt::format("title_and_abstract.search:{},from_publication_date:{}-01,to_publication_date:{}-{:02d}",
                       search, to_string(options.from), to_string(options.to),
                       days_in_month(options.to.year, options.to.month));
}

std::string works_target(const FetchOptions& options, const std::string& cursor) {
    auto target = fmt::format("/works?filter={}&per-page={}&cursor={}", percent_encode(works_filter(options)),
                              options.page_size, percent_encode(cursor));
    if (options.mailto) target += "&mailto=" + percent_encode(*options.mailto);
    return target;
}

std::optional<std::string> parse_works_page(std::string_view body, std::vector<Document>& out, std::size_t* skipped) {
    json page;
    try {
        page = json::parse(body);
    } catch (const json::exception& e) {
        throw ProtocolError(std::string("works page is not JSON: ") + e.what());
    }
    if (!page.is_object() || !page.contains("results") || !page.at("results").is_array()) {
        throw ProtocolError("works page has no results array");
    }
    for (const auto& record : page.at("results")) {
        const auto year = record.find("publication_year");
        const auto id = record.find("id");
        if (year == record.end() || !year->is_number_integer() || id == record.end() || !id->is_string()) {
            if (skipped) ++*skipped;
            continue;
        }
        Document doc;
        doc.id = id->get<std::string>();
        doc.year = year->get<int>();
        for (const char* key : {"title", "display_name"}) {
            auto it = record.find(key);
            if (it != record.end() && it->is_string()) {
                doc.title = it->get<std::string>();
                break;
            }
        }
        if (auto date = record.find("publication_date"); date != record.end() && date->is_string()) {
            const auto text = date->get<std::string>();
            if (text.size() >= 7 && text[4] == '-') {
                const int month = std::atoi(text.substr(5, 2).c_str());
                if (month >= 1 && month <= 12) doc.month = month;
            }
        }
        if (auto inv = record.find("abstract_inverted_index"); inv != record.end() && inv->is_object()) {
            InvertedAbstract inverted;
            for (const auto& [word, positions] : inv->items()) {
                inverted[word] = positions.get<std::vector<std::int64_t>>();
            }
            doc.abstract = reconstruct_abstract(inverted);
        }
        out.push_back(std::move(doc));
    }
    const auto meta = page.find("meta");
    if (meta == page.end() || !meta->is_object()) return std::nullopt;
    const auto next = meta->find("next_cursor");
    if (next == meta->end() || !next->is_string() || page.at("results").empty()) return std::nullopt;
    return next->get<std::string>();
}

Corpus fetch_corpus(const FetchOptions& options, Transport& transport, const Sleeper& sleep, FetchStats* stats) {
    if (options.to < options.from) {
        throw ConfigError(fmt::format("--from {} is after --to {}", to_string(options.from), to_string(options.to)));
    }
    if (options.phrases.empty()) throw ConfigError("at least one query phrase is required");
    if (options.page_size <= 0) throw ConfigError("--page-size must be positive");

    const Sleeper pause = sleep ? sleep : Sleeper([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); });
    FetchStats local;
    std::vector<Document> records;
    std::set<std::string> seen_cursors;
    std::optional<std::string> cursor = "*";

    while (cursor) {
        if (!seen_cursors.insert(*cursor).second) throw ProtocolError("cursor '" + *cursor + "' returned twice");
        const auto target = works_target(options, *cursor);
        HttpResponse response;
        auto backoff = options.initial_backoff;
        for (int attempt = 1;; ++attempt) {
            response = transport.get(target);
            if (response.status == 200) break;
            if (!transient(response.status) || attempt >= options.max_attempts) {
                throw FetchError(fmt::format("GET {} failed after {} attempt(s) with status {}", target, attempt,
                                             response.status),
                                 response.status);
            }
            ++local.retries;
            pause(backoff);
            backoff *= 2;
        }
        ++local.pages;
        cursor = parse_works_page(response.body, records, &local.skipped_records);
        if (options.max_records && records.size() >= *options.max_records) break;
    }

    Corpus corpus;
    corpus.query_phrases = options.phrases;
    corpus.from = options.from;
    corpus.to = options.to;
    corpus.retrieved_at = utc_now();
    corpus.documents = assemble_documents(records, options.phrases, options.from, options.to, &local.assembly);
    if (stats) *stats = local;
    return corpus;
}

}  // namespace themetrack::openalex
