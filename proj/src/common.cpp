#include "lord/common.hpp"

#include <cstdio>
#include <cstdlib>

namespace lord {

std::string repr_double(double v) {
  char buf[48];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace lord
