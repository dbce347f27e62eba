#include "ctmdp/format.hpp"

#include <array>
#include <charconv>

namespace ctmdp {

std::string format_number(double value, int digits) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, digits);
  return {buf.data(), res.ptr};
}

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return {buf.data(), res.ptr};
}

}  // namespace ctmdp
