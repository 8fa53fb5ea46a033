#ifndef EAW_CONFIG_HPP
#define EAW_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

#include "eaw/errors.hpp"

namespace eaw {

/// Sectioned key/value text configuration:
///   [section]
///   key = value        # comment
/// Repeated keys accumulate (used for term lists). Keys are addressed as
/// "section.key"; keys before any section header have no prefix.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const;
  const std::vector<std::string>& all(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, const std::string& value);

 private:
  std::map<std::string, std::vector<std::string>> values_;
};

}  // namespace eaw

#endif
