#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace quanv {

/// Ordered key=value pairs; the on-disk form is one `key=value` line per
/// entry, '#' lines and blank lines ignored. Keys are unique.
class Manifest {
public:
    void set(const std::string& key, std::string value);
    bool has(const std::string& key) const;
    /// Throws data_error if the key is absent.
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, std::string fallback) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string serialize() const;
    static Manifest parse(const std::string& text);

    void save(const std::filesystem::path& path) const;
    static Manifest load(const std::filesystem::path& path);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace quanv
