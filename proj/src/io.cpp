#include "secular/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace secular {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    const size_t p = line.find_first_of("#;");
    return p == std::string::npos ? line : line.substr(0, p);
}

double parse_double(const std::string& key, const std::string& raw) {
    try {
        size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size())
            throw ConfigError("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse '" + raw +
                          "' as a number");
    }
}

}  // namespace

bool Config::has(const std::string& key) const { return kv.count(key) > 0; }

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : parse_double(key, it->second);
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    const double v = parse_double(key, it->second);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw ConfigError("config key '" + key + "': expected an integer, got '" +
                          it->second + "'");
    return i;
}

double Config::require_double(const std::string& key) const {
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ConfigError("config: missing required key '" + key + "'");
    return parse_double(key, it->second);
}

std::vector<double> Config::get_double_list(
    const std::string& key, std::vector<double> fallback) const {
    const auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    std::string s = it->second;
    for (char& c : s)
        if (c == ',') c = ' ';
    std::istringstream in(s);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) out.push_back(parse_double(key, tok));
    if (out.empty())
        throw ConfigError("config key '" + key + "': empty list");
    return out;
}

Config parse_config(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": empty key");
        c.kv[section.empty() ? key : section + "." + key] = val;
    }
    return c;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const Config& c) {
    std::string canon;
    for (const auto& [k, v] : c.kv) {  // std::map: sorted, deterministic
        canon += k;
        canon += '=';
        canon += v;
        canon += '\n';
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canon)));
    return buf;
}

std::string metadata_block(
    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [k, v] : entries) {
        out += "# ";
        out += k;
        out += ": ";
        out += v;
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file '" + path + "'");
    out << content;
    if (!out)
        throw ConfigError("write failed for '" + path + "'");
}

}  // namespace secular
