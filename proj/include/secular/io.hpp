#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "secular/types.hpp"

// Config parsing, canonical hashing, and deterministic formatting (module
// "io"). Data files are reproducible byte-for-byte: fixed %.17g formatting,
// fixed iteration orders, and a metadata header derived from the canonical
// form of the config.

namespace secular {

// Flat key-value file with [section] headers; '#' or ';' start comments.
// Keys are addressed as "section.key" ("" section for keys before any
// header). Parsing throws ConfigError with the offending line number.
struct Config {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    double require_double(const std::string& key) const;
    // Comma- and/or whitespace-separated list of doubles.
    std::vector<double> get_double_list(const std::string& key,
                                        std::vector<double> fallback) const;
};

Config parse_config(const std::string& text);
Config load_config_file(const std::string& path);

// Fixed 17-significant-digit representation used in every data file.
std::string format_g17(double v);

std::uint64_t fnv1a64(std::string_view data);

// FNV-1a 64 over the canonical "key=value\n" serialization (keys sorted),
// rendered as 16 lowercase hex digits.
std::string config_hash(const Config& c);

// "# key: value" comment block prepended to every output file.
std::string metadata_block(
    const std::vector<std::pair<std::string, std::string>>& entries);

void write_file(const std::string& path, const std::string& content);

}  // namespace secular
