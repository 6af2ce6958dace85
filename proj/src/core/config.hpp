#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphlb {

// Flat key/value configuration:
//
//   # comment
//   [section]
//   key = value
//   [section:profile]     overrides for one profile
//
// Keys are looked up in "section:profile" first, then in "section".
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  bool has_section(const std::string& section) const;
  std::vector<std::string> sections() const;
  // Keys visible in `section` under `profile`, sorted.
  std::vector<std::string> keys(const std::string& section, const std::string& profile) const;

  std::optional<std::string> find(const std::string& section, const std::string& profile,
                                  const std::string& key) const;
  void set(const std::string& section, const std::string& key, std::string value);

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// The resolved key/value view of one section, with typed getters.
class Params {
 public:
  Params() = default;
  Params(const Config& config, const std::string& section, const std::string& profile);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key,
                                      std::vector<std::uint64_t> fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       std::vector<std::string> fallback) const;

 private:
  std::string section_;
  std::map<std::string, std::string> values_;
};

// Splits on commas and trims; empty input gives an empty list.
std::vector<std::string> split_list(std::string_view text);

double parse_double(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);

}  // namespace graphlb
