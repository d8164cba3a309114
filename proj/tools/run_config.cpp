#include "run_config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace kmlab::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& text, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("key '" + key + "' is not a number: '" + text + "'");
    return v;
}

} // namespace

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Config Config::parse(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (cfg.entries_.count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        cfg.entries_[key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& key) const {
    return entries_.count(key) > 0;
}

std::string Config::raw(const std::string& key) {
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("missing required key '" + key + "'");
    consumed_.insert(key);
    return it->second;
}

double Config::number(const std::string& key) {
    return parse_double(raw(key), key);
}

double Config::number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
}

long long Config::integer(const std::string& key) {
    const std::string text = raw(key);
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError("key '" + key + "' is not an integer: '" + text + "'");
    return v;
}

long long Config::integer_or(const std::string& key, long long fallback) {
    return has(key) ? integer(key) : fallback;
}

std::string Config::word(const std::string& key) {
    return raw(key);
}

std::string Config::word_or(const std::string& key, const std::string& fallback) {
    return has(key) ? word(key) : fallback;
}

std::vector<double> Config::table(const std::string& key) {
    std::istringstream in(raw(key));
    std::vector<double> values;
    std::string token;
    while (in >> token)
        values.push_back(parse_double(token, key));
    if (values.empty())
        throw ConfigError("key '" + key + "' holds an empty table");
    return values;
}

std::optional<std::vector<double>> Config::table_if_present(const std::string& key) {
    if (!has(key))
        return std::nullopt;
    return table(key);
}

void Config::finalize() const {
    for (const auto& [key, value] : entries_)
        if (!consumed_.count(key))
            throw ConfigError("unknown key '" + key + "' in " + origin_);
}

} // namespace kmlab::cli
