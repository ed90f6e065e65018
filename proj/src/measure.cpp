#include "rsc/measure.hpp"

#include <algorithm>
#include <functional>

#include "rsc/errors.hpp"

namespace rsc {

std::size_t count_subset_choices(const Structure& s, const VertexSet& x, const LocalClassSpec& spec) {
  return admissible_assignments(spec, s, x).size();
}

BigInt count_frame_extensions(const Structure& s, int k, const LocalClassSpec& spec) {
  require_member(s, spec, "structure");
  if (k < 0) throw InvalidArgument("frame level must be nonnegative");
  BigInt n = 1;
  const auto m = static_cast<std::size_t>(k) + 1;
  if (m > s.size()) return n;
  for_each_subset_of_size(s.universe(), m, [&](const VertexSet& x) {
    n *= count_subset_choices(s, x, spec);
  });
  return n;
}

std::vector<BigInt> frame_counts(const Structure& anchor, int level, const LocalClassSpec& spec) {
  require_member(anchor, spec, "anchor");
  std::vector<BigInt> out;
  // Levels past |anchor| contribute factor 1.
  const int effective = std::min(level, static_cast<int>(anchor.size()));
  for (int j = 0; j < level; ++j) {
    out.push_back(j < effective ? count_frame_extensions(anchor, j, spec) : BigInt(1));
  }
  return out;
}

Rational mu_base(const BaseSet& b, const LocalClassSpec& spec) {
  if (b.level < 0) throw InvalidArgument("level must be nonnegative");
  if (b.ambient && !b.anchor.universe().empty() && b.anchor.universe().back() >= *b.ambient) {
    throw InvalidArgument("anchor universe does not fit in the ambient {0..i-1}");
  }
  Rational mu = 1;
  for (const auto& n : frame_counts(b.anchor, b.level, spec)) mu /= Rational(n);
  return mu;
}

FrameExtensionFamily enumerate_frame_extensions(const VertexSet& x_raw, int target_level,
                                                const Structure& anchor, int anchor_level,
                                                const LocalClassSpec& spec, std::size_t cap) {
  const VertexSet x = make_vertex_set(x_raw);
  if (x.size() > cap) {
    throw SizeLimit("enumeration over " + std::to_string(x.size()) + " vertices exceeds the cap of " +
                    std::to_string(cap));
  }
  if (!is_subset(anchor.universe(), x)) throw NotASubset("|A| is not contained in X");
  if (anchor_level < 0 || target_level < anchor_level) {
    throw InvalidArgument("levels must satisfy 0 <= k <= l");
  }
  require_member(anchor, spec, "anchor");

  const int top = std::min(target_level, static_cast<int>(x.size()));
  const Structure fixed = k_frame(anchor, anchor_level);
  std::vector<VertexSet> order;
  for (int m = 1; m <= top; ++m) {
    for_each_subset_of_size(x, static_cast<std::size_t>(m), [&](const VertexSet& y) { order.push_back(y); });
  }

  FrameExtensionFamily fam{x, target_level, anchor, anchor_level, {}};
  Structure current(spec.signature_ptr(), x);
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    if (i == order.size()) {
      fam.members.push_back(current);
      return;
    }
    const VertexSet& y = order[i];
    const auto slots = slots_on(spec.signature(), y);
    if (static_cast<int>(y.size()) <= anchor_level && is_subset(y, anchor.universe())) {
      const Assignment forced = assignment_of(fixed, slots);
      const auto options = admissible_assignments(spec, current, y);
      if (!std::binary_search(options.begin(), options.end(), forced)) return;
      apply_assignment(current, slots, forced);
      dfs(i + 1);
      apply_assignment(current, slots, 0);
      return;
    }
    for (Assignment a : admissible_assignments(spec, current, y)) {
      apply_assignment(current, slots, a);
      dfs(i + 1);
    }
    apply_assignment(current, slots, 0);
  };
  dfs(0);
  return fam;
}

std::vector<std::pair<Structure, Rational>> exact_distribution(std::size_t n,
                                                               const LocalClassSpec& spec,
                                                               std::size_t cap) {
  if (n > cap) {
    throw SizeLimit("exact distribution on " + std::to_string(n) + " vertices exceeds the cap of " +
                    std::to_string(cap));
  }
  const VertexSet universe = range_set(static_cast<Vertex>(n));
  auto fam = enumerate_frame_extensions(universe, static_cast<int>(n), spec.empty_structure({}), 0,
                                        spec, cap);
  std::vector<std::pair<Structure, Rational>> out;
  out.reserve(fam.members.size());
  for (auto& s : fam.members) {
    Rational mu = mu_base({s, static_cast<int>(n), n}, spec);
    out.emplace_back(std::move(s), std::move(mu));
  }
  return out;
}

}  // namespace rsc
