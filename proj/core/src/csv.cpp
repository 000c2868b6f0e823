#include "switchopt/csv.hpp"

#include <charconv>

namespace switchopt {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace switchopt
