#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsc/structure.hpp"

namespace rsc {

/// Root seed plus a derivation path. The 64-bit key is a hash of both, so
/// sibling children are independent streams and replays are exact.
class Seed {
 public:
  explicit Seed(std::uint64_t root = 0);

  Seed child(std::uint64_t label) const;
  Seed child(std::string_view label) const;

  std::uint64_t root() const noexcept { return root_; }
  const std::vector<std::string>& path() const noexcept { return path_; }
  std::uint64_t key() const noexcept { return key_; }
  /// "root/label/label".
  std::string describe() const;

 private:
  Seed(std::uint64_t root, std::vector<std::string> path, std::uint64_t key);

  std::uint64_t root_;
  std::vector<std::string> path_;
  std::uint64_t key_;
};

std::uint64_t mix64(std::uint64_t z);
/// Keyed hash of a sorted vertex set.
std::uint64_t prf(std::uint64_t key, std::span<const Vertex> set);
/// Fair coin for `set`: the top bit of its hash.
inline bool prf_coin(std::uint64_t key, std::span<const Vertex> set) { return prf(key, set) >> 63; }
/// Uniform index in [0, count) via the high half of hash * count.
inline std::size_t prf_index(std::uint64_t hash, std::size_t count) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(hash) * count) >> 64);
}

}  // namespace rsc
