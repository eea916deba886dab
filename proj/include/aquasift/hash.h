#ifndef AQUASIFT_HASH_H_
#define AQUASIFT_HASH_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace aquasift {

// 64-bit FNV-1a. Stable across platforms; used for content fingerprints and
// hashed tokenization, never for security.
class Fnv1a {
 public:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;

  Fnv1a& update(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= kPrime;
    }
    return *this;
  }
  Fnv1a& update(std::string_view s) { return update(s.data(), s.size()); }

  std::uint64_t digest() const { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = kOffset;
};

inline std::uint64_t fnv1a(std::string_view s) {
  return Fnv1a().update(s).digest();
}

}  // namespace aquasift

#endif  // AQUASIFT_HASH_H_
