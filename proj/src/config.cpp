#include "ifm/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ifm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& in, const std::string& origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unterminated [section]");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty section name");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        if (!cfg.sections_[section].emplace(key, value).second) {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                              section + "." + key + "'");
        }
        cfg.order_.emplace_back(section.empty() ? key : section + "." + key, value);
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

void ConfigFile::missing(const std::string& section, const std::string& key) const {
    throw ConfigError(origin_ + ": missing required key '" + section + "." + key + "'");
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
    if (!has(section, key)) missing(section, key);
    return sections_.at(section).at(key);
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
    return has(section, key) ? sections_.at(section).at(key) : fallback;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != raw.size()) {
        throw ConfigError(origin_ + ": key '" + section + "." + key + "' is not a number: '" +
                          raw + "'");
    }
    return value;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key) const {
    const std::string raw = get_string(section, key);
    std::size_t used = 0;
    long long value = 0;
    try {
        value = std::stoll(raw, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != raw.size()) {
        throw ConfigError(origin_ + ": key '" + section + "." + key + "' is not an integer: '" +
                          raw + "'");
    }
    return value;
}

long long ConfigFile::get_int(const std::string& section, const std::string& key,
                              long long fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string raw = lower(get_string(section, key));
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError(origin_ + ": key '" + section + "." + key + "' is not a boolean: '" + raw +
                      "'");
}

void ConfigFile::require_known(const std::map<std::string, std::set<std::string>>& allowed) const {
    for (const auto& [section, keys] : sections_) {
        const auto it = allowed.find(section);
        if (it == allowed.end()) {
            throw ConfigError(origin_ + ": unknown section '[" + section + "]'");
        }
        for (const auto& [key, value] : keys) {
            (void)value;
            if (it->second.count(key) == 0) {
                throw ConfigError(origin_ + ": unknown key '" + section + "." + key + "'");
            }
        }
    }
}

std::vector<std::pair<std::string, std::string>> ConfigFile::flattened() const {
    return order_;
}

}  // namespace ifm
