#pragma once

#include <stdexcept>
#include <string>

namespace themetrack {

// Invalid flags, unreadable or empty configuration inputs. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ontology or corpus file that cannot be parsed.
class LoadError : public ConfigError {
public:
    LoadError(const std::string& what, std::size_t line)
        : ConfigError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Remote retrieval failures. CLI exit code 3.
class FetchError : public std::runtime_error {
public:
    FetchError(const std::string& what, int last_status = 0)
        : std::runtime_error(what), last_status_(last_status) {}
    int last_status() const noexcept { return last_status_; }

private:
    int last_status_;
};

// The remote source broke the pagination contract.
class ProtocolError : public FetchError {
public:
    using FetchError::FetchError;
};

class ReconstructionError : public FetchError {
public:
    explicit ReconstructionError(long long position)
        : FetchError("abstract position " + std::to_string(position) + " claimed twice"),
          position_(position) {}
    long long position() const noexcept { return position_; }

private:
    long long position_;
};

// Failures inside the analysis stages. CLI exit code 4.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numeric routine was called outside its domain.
class DomainError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

}  // namespace themetrack
