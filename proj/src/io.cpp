#include "rdrag/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rdrag/errors.hpp"

namespace rdrag::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string dump_json(const nlohmann::json& doc) {
    // nlohmann::json stores objects in std::map, so keys come out sorted.
    return doc.dump(2) + "\n";
}

StrictObject::StrictObject(const nlohmann::json& obj, std::string context)
    : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object()) throw ConfigError(context_ + ": expected a JSON object");
}

bool StrictObject::has(const std::string& key) const { return obj_.contains(key); }

const nlohmann::json& StrictObject::at(const std::string& key) {
    if (!obj_.contains(key)) throw ConfigError(context_ + ": missing key '" + key + "'");
    used_.insert(key);
    return obj_.at(key);
}

double StrictObject::number(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(context_ + "." + key + ": expected a number");
    return v.get<double>();
}

double StrictObject::number_or(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
}

bool StrictObject::boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigError(context_ + "." + key + ": expected a boolean");
    return v.get<bool>();
}

std::string StrictObject::string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(context_ + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::string StrictObject::string_or(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
}

const nlohmann::json& StrictObject::array(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_array()) throw ConfigError(context_ + "." + key + ": expected an array");
    return v;
}

StrictObject StrictObject::object(const std::string& key) {
    return StrictObject(at(key), context_ + "." + key);
}

const nlohmann::json& StrictObject::raw(const std::string& key) { return at(key); }

void StrictObject::finish() const {
    std::string unknown;
    for (const auto& [key, value] : obj_.items()) {
        if (!used_.contains(key)) unknown += (unknown.empty() ? "" : ",") + key;
    }
    if (!unknown.empty()) throw ConfigError(context_ + ": unknown key(s) " + unknown);
}

}  // namespace rdrag::io
