#ifndef AQUASIFT_SRC_UTF8_H_
#define AQUASIFT_SRC_UTF8_H_

#include <string>
#include <string_view>
#include <vector>

namespace aquasift::utf8 {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// One decoded unit. Invalid bytes decode to kInvalid and keep their original
// byte so that re-encoding is lossless.
struct Unit {
  char32_t cp;
  std::string_view bytes;
};

std::vector<Unit> decode(std::string_view s);

void append(std::string& out, char32_t cp);

std::string encode(const std::vector<Unit>& units);

}  // namespace aquasift::utf8

#endif  // AQUASIFT_SRC_UTF8_H_
