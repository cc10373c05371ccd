#pragma once

#include <cstdio>
#include <string>

namespace mclearn::detail {

inline std::string fmt(const char* f, auto... args) {
  char buf[320];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace mclearn::detail
