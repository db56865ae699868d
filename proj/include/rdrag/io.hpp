#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rdrag::io {

/// Shortest-roundtrip-safe rendering with 17 significant digits.
std::string format_double(double x);

/// Writes `content` verbatim (LF line endings are the caller's). Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view content);

std::string read_text_file(const std::filesystem::path& path);

/// Pretty JSON with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& doc);

/// Strict reader over a JSON object: every key must be consumed before
/// `finish()`, otherwise ConfigError names the unknown keys.
class StrictObject {
public:
    StrictObject(const nlohmann::json& obj, std::string context);

    bool has(const std::string& key) const;
    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    bool boolean_or(const std::string& key, bool fallback);
    std::string string(const std::string& key);
    std::string string_or(const std::string& key, const std::string& fallback);
    const nlohmann::json& array(const std::string& key);
    StrictObject object(const std::string& key);
    const nlohmann::json& raw(const std::string& key);

    void finish() const;

private:
    const nlohmann::json& at(const std::string& key);

    const nlohmann::json& obj_;
    std::string context_;
    std::set<std::string> used_;
};

}  // namespace rdrag::io
