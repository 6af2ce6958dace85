#include "core/config.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace graphlb {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.' || c == ':';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

Config Config::parse(std::string_view text) {
  Config config;
  std::string current;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::kParse, where + ": unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) fail(ErrorCode::kParse, where + ": bad section name");
      current = std::string(name);
      config.sections_[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::kParse, where + ": expected key = value");
    if (current.empty()) fail(ErrorCode::kParse, where + ": key outside of any section");
    const auto key = trim(line.substr(0, eq));
    if (!valid_name(key) || key.find(':') != std::string_view::npos)
      fail(ErrorCode::kParse, where + ": bad key");
    auto& section = config.sections_[current];
    if (section.count(std::string(key)))
      fail(ErrorCode::kParse, where + ": duplicate key '" + std::string(key) + "'");
    section[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return config;
}

Config Config::load(const std::string& path) { return parse(read_text_file(path)); }

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : sections_) out.push_back(name);
  return out;
}

std::vector<std::string> Config::keys(const std::string& section,
                                      const std::string& profile) const {
  std::map<std::string, int> seen;
  if (auto it = sections_.find(section); it != sections_.end())
    for (const auto& [k, _] : it->second) seen[k];
  if (!profile.empty())
    if (auto it = sections_.find(section + ":" + profile); it != sections_.end())
      for (const auto& [k, _] : it->second) seen[k];
  std::vector<std::string> out;
  for (const auto& [k, _] : seen) out.push_back(k);
  return out;
}

std::optional<std::string> Config::find(const std::string& section, const std::string& profile,
                                        const std::string& key) const {
  if (!profile.empty()) {
    if (auto it = sections_.find(section + ":" + profile); it != sections_.end())
      if (auto kv = it->second.find(key); kv != it->second.end()) return kv->second;
  }
  if (auto it = sections_.find(section); it != sections_.end())
    if (auto kv = it->second.find(key); kv != it->second.end()) return kv->second;
  return std::nullopt;
}

void Config::set(const std::string& section, const std::string& key, std::string value) {
  sections_[section][key] = std::move(value);
}

Params::Params(const Config& config, const std::string& section, const std::string& profile)
    : section_(section) {
  for (const auto& key : config.keys(section, profile))
    values_[key] = *config.find(section, profile, key);
}

std::string Params::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Params::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(it->second, section_ + "." + key);
}

std::uint64_t Params::get_u64(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_u64(it->second, section_ + "." + key);
}

bool Params::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
  if (it->second == "false" || it->second == "0" || it->second == "no") return false;
  fail(ErrorCode::kParse, section_ + "." + key + ": expected a boolean, got '" + it->second + "'");
}

std::vector<double> Params::get_doubles(const std::string& key,
                                        std::vector<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second))
    out.push_back(parse_double(item, section_ + "." + key));
  return out;
}

std::vector<std::uint64_t> Params::get_u64s(const std::string& key,
                                            std::vector<std::uint64_t> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(it->second))
    out.push_back(parse_u64(item, section_ + "." + key));
  return out;
}

std::vector<std::string> Params::get_strings(const std::string& key,
                                             std::vector<std::string> fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : split_list(it->second);
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (item.empty()) fail(ErrorCode::kParse, "empty item in list");
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  text = trim(text);
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
    fail(ErrorCode::kParse, std::string(what) + ": expected a number, got '" + std::string(text) + "'");
  return value;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    fail(ErrorCode::kParse,
         std::string(what) + ": expected a non-negative integer, got '" + std::string(text) + "'");
  return value;
}

}  // namespace graphlb
