#include "themetrack/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <vector>

#include "themetrack/errors.hpp"
#include "themetrack/io.hpp"

namespace themetrack {

namespace {

enum class Predicate { SuperTopicOf, RelatedEquivalent, PreferentialEquivalent, Other };

Predicate classify_predicate(std::string_view raw) {
    std::string key;
    for (char c : label_from_term(raw)) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    if (key == "supertopicof" || key == "supertopic") return Predicate::SuperTopicOf;
    if (key == "relatedequivalent") return Predicate::RelatedEquivalent;
    if (key == "preferentialequivalent") return Predicate::PreferentialEquivalent;
    return Predicate::Other;
}

bool keeps_final_s(std::string_view token) {
    if (token.size() < 4 || token.back() != 's') return true;
    const char before = token[token.size() - 2];
    return before == 's' || before == 'u' || before == 'i';
}

class DisjointSets {
public:
    std::size_t add(const std::string& label) {
        auto [it, inserted] = index_.try_emplace(label, parent_.size());
        if (inserted) parent_.push_back(parent_.size());
        return it->second;
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }

    const std::map<std::string, std::size_t>& index() const { return index_; }

private:
    std::map<std::string, std::size_t> index_;
    std::vector<std::size_t> parent_;
};

std::string percent_decode(std::string_view s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
            std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
            out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

std::string canonical_triple_dump(std::span<const Triple> triples) {
    std::vector<std::string> rows;
    rows.reserve(triples.size());
    for (const auto& t : triples) rows.push_back(io::csv_row({t.subject, t.predicate, t.object}));
    std::sort(rows.begin(), rows.end());
    return std::accumulate(rows.begin(), rows.end(), std::string{});
}

}  // namespace

std::string normalize_label(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.empty()) return;
        if (!keeps_final_s(current)) current.pop_back();
        tokens.push_back(std::move(current));
        current.clear();
    };
    for (char c : raw) {
        const auto uc = static_cast<unsigned char>(c);
        if (c == '-' || c == '_' || std::isspace(uc)) {
            flush();
        } else {
            current.push_back(static_cast<char>(std::tolower(uc)));
        }
    }
    flush();
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

std::string label_from_term(std::string_view term) {
    auto trimmed = term;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
    if (trimmed.size() >= 2 && trimmed.front() == '<' && trimmed.back() == '>') {
        trimmed = trimmed.substr(1, trimmed.size() - 2);
        const auto cut = trimmed.find_last_of("/#");
        if (cut != std::string_view::npos) trimmed = trimmed.substr(cut + 1);
        return percent_decode(trimmed);
    }
    return std::string(trimmed);
}

TopicOntology load_ontology(std::span<const Triple> triples) {
    TopicOntology ontology;
    DisjointSets classes;
    std::set<std::string> preferred;
    std::vector<std::pair<std::string, std::string>> super_pairs;  // (child, parent)

    for (const auto& t : triples) {
        ++ontology.stats.rows;
        const auto kind = classify_predicate(t.predicate);
        if (kind == Predicate::Other) {
            ++ontology.stats.skipped_predicates;
            continue;
        }
        auto subject = normalize_label(label_from_term(t.subject));
        auto object = normalize_label(label_from_term(t.object));
        if (subject.empty() || object.empty()) {
            ++ontology.stats.malformed_rows;
            continue;
        }
        const auto s = classes.add(subject);
        const auto o = classes.add(object);
        switch (kind) {
            case Predicate::SuperTopicOf:
                super_pairs.emplace_back(object, subject);
                break;
            case Predicate::PreferentialEquivalent:
                preferred.insert(object);
                classes.unite(s, o);
                break;
            case Predicate::RelatedEquivalent:
                classes.unite(s, o);
                break;
            case Predicate::Other:
                break;
        }
    }

    if (classes.index().empty()) throw ConfigError("ontology is empty after parsing");

    // Labels iterate in sorted order, so the first label seen for a class is its smallest.
    std::map<std::size_t, TopicId> smallest;
    std::map<std::size_t, TopicId> smallest_preferred;
    for (const auto& [label, id] : classes.index()) {
        const auto root = classes.find(id);
        smallest.try_emplace(root, label);
        if (preferred.contains(label)) smallest_preferred.try_emplace(root, label);
    }
    for (const auto& [label, id] : classes.index()) {
        const auto root = classes.find(id);
        auto it = smallest_preferred.find(root);
        const auto& canonical = it != smallest_preferred.end() ? it->second : smallest.at(root);
        ontology.label_index.emplace(label, canonical);
        ontology.topics.insert(canonical);
    }
    for (const auto& [child, parent] : super_pairs) {
        const auto& c = ontology.label_index.at(child);
        const auto& p = ontology.label_index.at(parent);
        if (c != p) ontology.super_topics[c].insert(p);
    }

    ontology.source_checksum = io::sha256_hex(canonical_triple_dump(triples));
    return ontology;
}

TopicOntology load_ontology_csv(const std::filesystem::path& path) {
    const auto content = io::read_file(path);
    std::vector<Triple> triples;
    std::size_t malformed = 0;
    std::istringstream in(content);
    std::string line;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (!io::split_csv_line(line, fields)) throw LoadError("unterminated quote in " + path.string(), line_no);
        if (fields.size() != 3) {
            ++malformed;
            continue;
        }
        triples.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
    }
    auto ontology = load_ontology(triples);
    ontology.stats.malformed_rows += malformed;
    ontology.source_checksum = io::sha256_hex(content);
    return ontology;
}

std::optional<TopicId> canonical_topic(const TopicOntology& ontology, std::string_view label) {
    auto it = ontology.label_index.find(normalize_label(label));
    if (it == ontology.label_index.end()) return std::nullopt;
    return it->second;
}

}  // namespace themetrack
