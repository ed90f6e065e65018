#pragma once

#include <map>
#include <string>
#include <vector>

#include "rsc/json_io.hpp"
#include "rsc/measure.hpp"
#include "rsc/sampler.hpp"
#include "rsc/simplicial.hpp"

namespace rsc {

/// Piecewise-linear map of a complex into R^ambient_dim, affine on each face
/// and fixed by exact rational vertex images.
struct PLChart {
  SimplicialComplex complex;
  int ambient_dim = 0;
  std::map<Vertex, std::vector<Rational>> coords;

  std::vector<double> point(Vertex v) const;
};

/// The i-th vertex goes to the i-th unit vector; the complex is the full simplex.
PLChart standard_chart(const VertexSet& vertices);

struct VerificationReport {
  bool injective_on_vertices = false;
  std::vector<double> cell_volumes;
  double volume_sum_error = 0;
  std::size_t coverage_failures = 0;
  std::size_t samples = 0;
  /// Samples within the boundary band of some cell, left out of the count.
  std::size_t boundary_samples = 0;
};

inline constexpr double kBoundaryBand = 1e-7;
inline constexpr double kDegenerateVolume = 1e-12;

/// Compares the chart's maximal cells with the standard n-simplex (the hull
/// of the unit vectors of R^(n+1)): Gram-determinant volumes against the
/// simplex volume, and `samples` uniform points each of which must lie in
/// the interior of exactly one cell. Throws PreconditionFailed if a maximal
/// face is not n-dimensional, DegenerateCell if a cell is flat.
VerificationReport verify_chart(const PLChart& chart, int n, std::size_t samples,
                                std::uint64_t sample_seed = 0);

/// Cone over `chart` with apex v: old images gain a zero coordinate, v goes
/// to the new unit vector. `sc2` must be `sc` plus v, inducing `sc`.
PLChart cone_extend(const SimplicialComplex& sc2, const SimplicialComplex& sc, Vertex v,
                    const PLChart& chart);

struct FillResult {
  SimplicialComplex complex;
  PLChart chart;
  /// Faces F of the base with F + v missing, in order of increasing size.
  std::vector<VertexSet> deficient;
  /// cone_vertices[i] subdivides the cone over deficient[i].
  std::vector<Vertex> cone_vertices;
};

/// Subdivides the cone from v over the rest of `sc` so that the result is a
/// triangulated standard simplex. Each deficient face F gets a new vertex at
/// the barycentre of v and F, coned over the already triangulated boundary
/// of the cone over F. New vertices are numbered from `first_new` (default:
/// one past the largest vertex). Throws PreconditionFailed unless v maps to
/// the last unit vector and the rest of the chart is a standard simplex in
/// the hyperplane where the last coordinate vanishes.
FillResult fill_to_simplex(const SimplicialComplex& sc, Vertex v, const PLChart& chart,
                           std::optional<Vertex> first_new = std::nullopt,
                           std::size_t check_samples = 2000);

struct ChainStage {
  SimplicialComplex complex;
  PLChart chart;
  Vertex apex = 0;
  /// Oracle vertices found for the fill vertices, in fill order.
  std::vector<Vertex> fill_vertices;
  std::size_t candidates_tried = 0;
};

/// Stage 0 is the least oracle vertex at (1). Stage n adds the least unused
/// oracle vertex as a cone apex, fills the cone to a simplex and realises
/// the fill vertices in the oracle by witness search, in fill order.
std::vector<ChainStage> realize_chain(LazyLimit& l, std::size_t steps);

/// True iff every vertex of `earlier` has, in `later`, its earlier image with
/// zeros appended (exact rational comparison).
bool restricts_to(const PLChart& later, const PLChart& earlier);

Json chart_to_json(const PLChart& chart);
Json report_to_json(const VerificationReport& report);
/// OFF mesh of the maximal cells (3-cells contribute their triangles);
/// coordinates padded to 3, or 4OFF when the ambient dimension is 4.
std::string to_off(const PLChart& chart);

}  // namespace rsc
