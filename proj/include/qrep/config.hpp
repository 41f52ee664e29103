#pragma once

#include <map>
#include <string>

namespace qrep {

// Flat key=value store. Section headers [name] prefix following keys as
// "name.key"; everything from '#' to the end of a line is a comment.
struct ConfigMap {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

}  // namespace qrep
