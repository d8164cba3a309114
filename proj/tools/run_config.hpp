#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace kmlab::cli {

/// Raised for anything wrong with a config document; maps to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat key = value document. Values are numbers, words, or whitespace
/// separated numeric tables. Keys are consumed on access; unconsumed keys are
/// reported as unknown when the command finalizes (fail-fast).
class Config {
  public:
    static Config load(const std::string& path);
    static Config parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const;

    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    long long integer(const std::string& key);
    long long integer_or(const std::string& key, long long fallback);
    std::string word(const std::string& key);
    std::string word_or(const std::string& key, const std::string& fallback);
    std::vector<double> table(const std::string& key);
    std::optional<std::vector<double>> table_if_present(const std::string& key);

    /// Throws if any key was never consumed.
    void finalize() const;

  private:
    std::string raw(const std::string& key);
    std::string origin_;
    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

} // namespace kmlab::cli
