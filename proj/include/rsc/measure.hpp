#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rsc/local_class.hpp"

namespace rsc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kDefaultEnumerationCap = 7;

/// The open set of structures whose restriction to |anchor| has the same
/// level-frame as the anchor. `ambient` is the universe size i, or nullopt
/// for the countable limit.
struct BaseSet {
  Structure anchor;
  int level = 0;
  std::optional<std::size_t> ambient;
};

/// Number of admissible (k+1)-frames on |s| over the k-frame of s, as a
/// product of per-subset choice counts.
BigInt count_frame_extensions(const Structure& s, int k, const LocalClassSpec& spec);
/// Choice count on a single (k+1)-subset; the factor of the product above.
std::size_t count_subset_choices(const Structure& s, const VertexSet& x, const LocalClassSpec& spec);

/// Frame counts N(anchor, 0..level-1).
std::vector<BigInt> frame_counts(const Structure& anchor, int level, const LocalClassSpec& spec);

/// Exact measure of the base set: product of 1/N(anchor, j) for j < level.
Rational mu_base(const BaseSet& b, const LocalClassSpec& spec);

struct FrameExtensionFamily {
  VertexSet ambient;
  int target_level = 0;
  Structure anchor;
  int anchor_level = 0;
  std::vector<Structure> members;
};

/// All target-level frames of class members on `x` whose restriction to
/// |anchor| has the anchor's `anchor_level`-frame. Members are distinct and
/// listed in the order of a lexicographic choice enumeration.
FrameExtensionFamily enumerate_frame_extensions(const VertexSet& x, int target_level,
                                                const Structure& anchor, int anchor_level,
                                                const LocalClassSpec& spec,
                                                std::size_t cap = kDefaultEnumerationCap);

/// Every class member on {0..n-1} with its singleton measure.
std::vector<std::pair<Structure, Rational>> exact_distribution(
    std::size_t n, const LocalClassSpec& spec, std::size_t cap = kDefaultEnumerationCap);

}  // namespace rsc
