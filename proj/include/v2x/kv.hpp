#pragma once

#include <map>
#include <string>
#include <vector>

namespace v2x {

// Flat "key = value" text: one pair per line, '#' starts a comment, values
// keep everything after '=' (trimmed, surrounding quotes stripped).  Later
// duplicates overwrite earlier ones.
class KvFile {
  public:
    static KvFile parse(const std::string& text, const std::string& origin);
    static KvFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::string& origin() const { return origin_; }
    const std::map<std::string, std::string>& values() const { return values_; }

    // Typed getters: return the fallback when the key is absent, throw
    // ConfigError (with origin and key in the message) on malformed values.
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    // Comma-separated list of doubles; absent key yields the fallback.
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& fallback) const;

    // Throws ConfigError if any key is outside the allowed set.
    void reject_unknown(const std::vector<std::string>& allowed) const;

  private:
    std::string origin_;
    std::map<std::string, std::string> values_;
};

}  // namespace v2x
