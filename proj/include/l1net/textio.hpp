#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

namespace l1net {

// Shortest representation that round-trips a double exactly.
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline bool try_parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* p = s.c_str();
  char* end = nullptr;
  out = std::strtod(p, &end);
  return end == p + s.size();
}

inline bool try_parse_long(const std::string& s, long long& out) {
  if (s.empty()) return false;
  const char* p = s.c_str();
  char* end = nullptr;
  out = std::strtoll(p, &end, 10);
  return end == p + s.size();
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace l1net
