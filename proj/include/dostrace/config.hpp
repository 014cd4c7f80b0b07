#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dostrace::config {

// Schema violation (unknown key, bad value); the CLI maps it to exit 2.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key = value document with dotted namespaces. '#' starts a comment.
class Config {
  public:
    Config() = default;
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    // "key=value" override from the command line.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // comma-separated doubles
    std::vector<double> get_list(const std::string& key,
                                 const std::vector<double>& fallback) const;

    // Throws SchemaError naming the first key outside the allowed set.
    void restrict_keys(const std::vector<std::string>& allowed) const;

    // FNV-1a over the sorted canonical "key=value" lines.
    std::uint64_t hash() const;
    std::string hash_hex() const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

  private:
    std::map<std::string, std::string> kv_;
};

}  // namespace dostrace::config
