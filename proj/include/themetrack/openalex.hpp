#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "themetrack/ingest.hpp"

namespace themetrack::openalex {

struct HttpResponse {
    int status = 0;  // 0 means the connection itself failed
    std::string body;
};

// GET against the works endpoint; `target` is the path plus query string.
class Transport {
public:
    virtual ~Transport() = default;
    virtual HttpResponse get(const std::string& target) = 0;
};

// cpp-httplib backed client. `base_url` is scheme://host[:port].
std::unique_ptr<Transport> make_http_transport(const std::string& base_url,
                                               std::chrono::seconds timeout = std::chrono::seconds(30));

inline constexpr const char* kDefaultBaseUrl = "https://api.openalex.org";

struct FetchOptions {
    std::vector<std::string> phrases = default_query_phrases();
    YearMonth from{1990, 1};
    YearMonth to{2022, 2};
    int page_size = 200;
    std::optional<std::string> mailto;
    std::optional<std::size_t> max_records;
    int max_attempts = 5;
    std::chrono::milliseconds initial_backoff{500};
};

struct FetchStats {
    std::size_t pages = 0;
    std::size_t retries = 0;
    std::size_t skipped_records = 0;  // no id or no publication year
    AssemblyStats assembly;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

std::string percent_encode(std::string_view value);

// Filter expression: OR-ed title/abstract phrase search plus the publication date window.
std::string works_filter(const FetchOptions& options);
std::string works_target(const FetchOptions& options, const std::string& cursor);

/// Parses one works-endpoint page. Appends documents to `out` and returns the
/// next cursor (absent on the last page).
std::optional<std::string> parse_works_page(std::string_view body, std::vector<Document>& out,
                                            std::size_t* skipped = nullptr);

/// Walks every cursor page, reconstructs abstracts, deduplicates and re-checks
/// each record locally. Retries 429/5xx and connection failures with
/// exponential backoff up to max_attempts, then throws FetchError. A repeated
/// cursor throws ProtocolError.
Corpus fetch_corpus(const FetchOptions& options, Transport& transport, const Sleeper& sleep = {},
                    FetchStats* stats = nullptr);

}  // namespace themetrack::openalex
