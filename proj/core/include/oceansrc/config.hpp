#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oceansrc {

// Plain-text sections of "key = value" lines; '#' starts a comment.
//
//   [waveguide]
//   depth = 100
//   density = 1000, 1500, 3000
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

class ConfigDocument {
 public:
  static ConfigDocument parse(std::istream& in);
  static ConfigDocument parse_string(const std::string& text);

  const std::vector<ConfigEntry>& entries() const { return entries_; }
  void add(std::string section, std::string key, std::string value);

  void write(std::ostream& out) const;

 private:
  std::vector<ConfigEntry> entries_;
};

}  // namespace oceansrc
