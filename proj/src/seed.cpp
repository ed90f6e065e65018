#include "rsc/seed.hpp"

namespace rsc {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t hash_bytes(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return mix64(h);
}
}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z += kGolden;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t prf(std::uint64_t key, std::span<const Vertex> set) {
  std::uint64_t h = mix64(key ^ (0x5851f42d4c957f2dULL * (set.size() + 1)));
  for (Vertex v : set) h = mix64(h ^ (static_cast<std::uint64_t>(v) * kGolden + 0x632be59bd9b4e019ULL));
  return mix64(h);
}

Seed::Seed(std::uint64_t root) : root_(root), key_(mix64(root ^ 0x243f6a8885a308d3ULL)) {}

Seed::Seed(std::uint64_t root, std::vector<std::string> path, std::uint64_t key)
    : root_(root), path_(std::move(path)), key_(key) {}

Seed Seed::child(std::uint64_t label) const {
  auto path = path_;
  path.push_back(std::to_string(label));
  return Seed(root_, std::move(path), mix64(key_ ^ mix64(label ^ 0x13198a2e03707344ULL)));
}

Seed Seed::child(std::string_view label) const {
  auto path = path_;
  path.emplace_back(label);
  return Seed(root_, std::move(path), mix64(key_ ^ hash_bytes(label) ^ 0xa4093822299f31d0ULL));
}

std::string Seed::describe() const {
  std::string s = std::to_string(root_);
  for (const auto& p : path_) s += "/" + p;
  return s;
}

}  // namespace rsc
