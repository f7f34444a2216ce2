#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ifm {

class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` configuration grouped into [section] blocks. Keys
/// carry explicit unit suffixes (delta_l_um, lambda_min_nm) by convention.
/// `#` starts a comment; duplicate or unknown keys are rejected.
class ConfigFile {
  public:
    static ConfigFile parse(std::istream& in, const std::string& origin = "<stream>");
    static ConfigFile load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long long get_int(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key,
                      long long fallback) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

    /// Rejects any key outside the allowed per-section sets (typo guard).
    void require_known(const std::map<std::string, std::set<std::string>>& allowed) const;

    /// "section.key" -> value pairs in file order, for manifest snapshots.
    std::vector<std::pair<std::string, std::string>> flattened() const;

  private:
    std::string origin_;
    // section -> key -> value; insertion order kept separately for flattening
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::vector<std::pair<std::string, std::string>> order_;

    [[noreturn]] void missing(const std::string& section, const std::string& key) const;
};

}  // namespace ifm
