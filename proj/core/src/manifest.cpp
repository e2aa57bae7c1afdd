#include "quanv/manifest.hpp"

#include <cstdio>
#include <sstream>

#include "quanv/errors.hpp"

namespace quanv {

void Manifest::set(const std::string& key, std::string value) {
    if (key.empty() || key.find('=') != std::string::npos || key.find('\n') != std::string::npos) {
        throw config_error("bad manifest key '" + key + "'");
    }
    if (value.find('\n') != std::string::npos) {
        throw config_error("manifest value for '" + key + "' contains a newline");
    }
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(key, std::move(value));
}

bool Manifest::has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

const std::string& Manifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    throw data_error("manifest is missing key '" + key + "'");
}

std::string Manifest::get_or(const std::string& key, std::string fallback) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return fallback;
}

std::string Manifest::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

Manifest Manifest::parse(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw data_error("manifest line " + std::to_string(lineno) + " is not key=value");
        }
        m.set(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
}

void Manifest::save(const std::filesystem::path& path) const {
    const std::string out = serialize();
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw data_error("cannot write " + path.string());
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (written != out.size()) throw data_error("short write to " + path.string());
}

Manifest Manifest::load(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw data_error("cannot read " + path.string());
    std::string text;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);
    try {
        return parse(text);
    } catch (const data_error& e) {
        throw data_error(path.string() + ": " + e.what());
    }
}

} // namespace quanv
