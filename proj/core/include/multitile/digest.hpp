#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace multitile {

/// 64-bit FNV-1a. Used for scheme identity and output fingerprints, never for
/// anything security related.
class Fnv1a {
public:
  void update(std::string_view bytes) {
    for (const char c : bytes) {
      state_ ^= static_cast<unsigned char>(c);
      state_ *= 1099511628211ull;
    }
  }
  std::uint64_t value() const { return state_; }

private:
  std::uint64_t state_ = 14695981039346656037ull;
};

inline std::uint64_t fnv1a64(std::string_view bytes) {
  Fnv1a h;
  h.update(bytes);
  return h.value();
}

std::string hex64(std::uint64_t value);

}  // namespace multitile
