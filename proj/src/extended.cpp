#include "rcbound/extended.hpp"

#include <charconv>

namespace rcb {

std::string Extended::to_string() const {
  if (infinite_) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
  return std::string(buf, ptr);
}

}  // namespace rcb
