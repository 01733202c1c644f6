#include <httplib.h>

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <deque>
#include <map>
#include <thread>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"
#include "themetrack/openalex.hpp"

using namespace themetrack;
using namespace themetrack::openalex;

namespace {

std::string fixture(const char* name) { return io::read_file(std::string(THEMETRACK_FIXTURE_DIR) + "/" + name); }

std::string cursor_of(const std::string& target) {
    const auto at = target.find("cursor=");
    if (at == std::string::npos) return {};
    const auto end = target.find('&', at);
    return target.substr(at + 7, end == std::string::npos ? std::string::npos : end - at - 7);
}

// Replays canned responses keyed by cursor; a queue per cursor allows scripted failures.
class ReplayTransport final : public Transport {
public:
    std::map<std::string, std::deque<HttpResponse>> script;
    std::vector<std::string> requests;

    HttpResponse get(const std::string& target) override {
        requests.push_back(target);
        auto& queue = script[cursor_of(target)];
        if (queue.empty()) return {404, "{}"};
        auto response = queue.front();
        if (queue.size() > 1) queue.pop_front();
        return response;
    }
};

FetchOptions small_options() {
    FetchOptions options;
    options.page_size = 3;
    return options;
}

}  // namespace

TEST_CASE("two-page fixture with one duplicate yields four documents") {
    ReplayTransport transport;
    transport.script["%2A"] = {{200, fixture("works_page1.json")}};
    transport.script["Ijc2MDg"] = {{200, fixture("works_page2.json")}};
    FetchStats stats;
    const auto corpus = fetch_corpus(small_options(), transport, {}, &stats);
    REQUIRE(corpus.documents.size() == 4);
    CHECK(stats.pages == 2);
    CHECK(stats.assembly.duplicates == 1);
    CHECK(corpus.documents[0].id == "https://openalex.org/W101");
    CHECK(corpus.documents[0].abstract == "We train neural networks");
    CHECK(corpus.documents[2].abstract.empty());
    CHECK(corpus.documents[3].title == "Data science workflows");
    CHECK(corpus.documents[3].abstract == "Reproducible pipelines");
    CHECK(corpus.documents[3].month == 2);
    for (const auto& doc : corpus.documents) CHECK(matches_query(doc, corpus.query_phrases));
}

TEST_CASE("page arrival order does not change the corpus") {
    std::vector<Document> first, second;
    parse_works_page(fixture("works_page1.json"), first);
    parse_works_page(fixture("works_page2.json"), second);
    std::vector<Document> ab = first, ba = second;
    ab.insert(ab.end(), second.begin(), second.end());
    ba.insert(ba.end(), first.begin(), first.end());
    const auto& phrases = default_query_phrases();
    CHECK(assemble_documents(ab, phrases, {1990, 1}, {2022, 2}) == assemble_documents(ba, phrases, {1990, 1}, {2022, 2}));
}

TEST_CASE("transient statuses are retried with exponential backoff") {
    ReplayTransport transport;
    transport.script["%2A"] = {{503, ""}, {429, ""}, {200, fixture("works_page2.json")}};
    std::vector<std::chrono::milliseconds> sleeps;
    FetchStats stats;
    const auto corpus =
        fetch_corpus(small_options(), transport, [&](std::chrono::milliseconds d) { sleeps.push_back(d); }, &stats);
    CHECK(corpus.documents.size() == 2);
    CHECK(stats.retries == 2);
    REQUIRE(sleeps.size() == 2);
    CHECK(sleeps[1] == 2 * sleeps[0]);
}

TEST_CASE("retries are bounded and permanent failures are not retried") {
    ReplayTransport transport;
    transport.script["%2A"] = {{500, ""}};
    try {
        fetch_corpus(small_options(), transport, [](auto) {});
        FAIL("expected FetchError");
    } catch (const FetchError& e) {
        CHECK(e.last_status() == 500);
    }
    CHECK(transport.requests.size() == 5);

    ReplayTransport denied;
    denied.script["%2A"] = {{403, ""}};
    CHECK_THROWS_AS(fetch_corpus(small_options(), denied, [](auto) {}), FetchError);
    CHECK(denied.requests.size() == 1);
}

TEST_CASE("a repeated cursor is a protocol error") {
    ReplayTransport transport;
    auto page = fixture("works_page1.json");
    transport.script["%2A"] = {{200, page}};
    std::string looping = page;
    looping.replace(looping.find("Ijc2MDg"), 7, "*");
    transport.script["Ijc2MDg"] = {{200, looping}};
    CHECK_THROWS_AS(fetch_corpus(small_options(), transport, [](auto) {}), ProtocolError);
}

TEST_CASE("invalid ranges are rejected before any request") {
    ReplayTransport transport;
    auto options = small_options();
    options.from = {2022, 3};
    options.to = {2022, 1};
    CHECK_THROWS_AS(fetch_corpus(options, transport), ConfigError);
    CHECK(transport.requests.empty());
}

TEST_CASE("works filter and target encode phrases, dates and contact") {
    FetchOptions options;
    options.to = {2024, 2};
    options.mailto = "me@example.org";
    const auto filter = works_filter(options);
    CHECK(filter.find("title_and_abstract.search:\"artificial intelligence\"|\"machine learning\"") == 0);
    CHECK(filter.find("from_publication_date:1990-01-01") != std::string::npos);
    CHECK(filter.find("to_publication_date:2024-02-29") != std::string::npos);
    const auto target = works_target(options, "*");
    CHECK(target.find("/works?filter=") == 0);
    CHECK(target.find("&per-page=200&cursor=%2A&mailto=me%40example.org") != std::string::npos);
}

TEST_CASE("HTTP transport walks cursor pages served over a socket") {
    httplib::Server server;
    std::atomic<int> hits{0};
    const auto page1 = fixture("works_page1.json");
    const auto page2 = fixture("works_page2.json");
    server.Get("/works", [&](const httplib::Request& req, httplib::Response& res) {
        const int n = ++hits;
        if (n == 1) {
            res.status = 503;
            return;
        }
        CHECK(req.get_param_value("mailto") == "ops@example.org");
        CHECK(req.get_param_value("per-page") == "3");
        res.set_content(req.get_param_value("cursor") == "*" ? page1 : page2, "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread worker([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    auto transport = make_http_transport("http://127.0.0.1:" + std::to_string(port), std::chrono::seconds(5));
    auto options = small_options();
    options.mailto = "ops@example.org";
    const auto corpus = fetch_corpus(options, *transport, [](auto) {});
    server.stop();
    worker.join();
    CHECK(corpus.documents.size() == 4);
    CHECK(hits == 3);
}
