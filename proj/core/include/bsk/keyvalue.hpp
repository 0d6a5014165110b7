#pragma once

// Flat key-value text files, used for experiment configs, solver parameter
// files and reports.
//
//   # comment
//   key = value
//
// Keys are [A-Za-z0-9_.-]+; whitespace around keys and values is trimmed;
// a repeated key is an error.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace bsk {

class KeyValues {
 public:
  static KeyValues parse(std::istream& in);
  static KeyValues load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& entries() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  /// Throws if any key is not in `known`.
  void require_known(const std::set<std::string>& known) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest text that reads back as exactly `v` ("nan"/"inf" for non-finite values).
std::string format_real(double v);

}  // namespace bsk
