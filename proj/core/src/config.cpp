#include "oceansrc/config.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "oceansrc/error.hpp"
#include "oceansrc/numeric_io.hpp"

namespace oceansrc {
namespace {

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

ConfigDocument ConfigDocument::parse(std::istream& in) {
  ConfigDocument doc;
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError(line, "unterminated section header");
      const auto name = trim(text.substr(1, text.size() - 2));
      if (!valid_name(name)) throw ConfigError(line, "invalid section name");
      section = std::string(name);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line, "expected 'key = value'");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(line, "invalid key '" + std::string(key) + "'");
    if (section.empty()) throw ConfigError(line, "key '" + std::string(key) + "' outside any section");
    if (value.empty()) throw ConfigError(line, "missing value for '" + std::string(key) + "'");
    doc.entries_.push_back({section, std::string(key), std::string(value), line});
  }
  return doc;
}

ConfigDocument ConfigDocument::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

void ConfigDocument::add(std::string section, std::string key, std::string value) {
  entries_.push_back({std::move(section), std::move(key), std::move(value), 0});
}

void ConfigDocument::write(std::ostream& out) const {
  std::string section;
  bool first = true;
  for (const auto& e : entries_) {
    if (first || e.section != section) {
      if (!first) out << '\n';
      out << '[' << e.section << "]\n";
      section = e.section;
      first = false;
    }
    out << e.key << " = " << e.value << '\n';
  }
}

}  // namespace oceansrc
