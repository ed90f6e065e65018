#include "rsc/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "rsc/errors.hpp"
#include "rsc/parallel.hpp"

namespace rsc {

std::vector<double> PLChart::point(Vertex v) const {
  std::vector<double> out;
  for (const auto& c : coords.at(v)) out.push_back(static_cast<double>(c));
  return out;
}

PLChart standard_chart(const VertexSet& vertices) {
  PLChart chart;
  chart.complex = SimplicialComplex::from_facets(vertices, {vertices});
  chart.ambient_dim = static_cast<int>(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    std::vector<Rational> p(vertices.size(), Rational(0));
    p[i] = 1;
    chart.coords[vertices[i]] = std::move(p);
  }
  return chart;
}

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

struct Cell {
  Eigen::MatrixXd a;      // vertex images as columns, plus a row of ones
  Eigen::MatrixXd pinv;   // least-squares barycentric solve
  Eigen::VectorXd lo, hi;  // bounding box
};

}  // namespace

VerificationReport verify_chart(const PLChart& chart, int n, std::size_t samples,
                                std::uint64_t sample_seed) {
  const int d = chart.ambient_dim;
  if (n < 0 || d != n + 1) throw PreconditionFailed("the chart must live in R^(n+1)");
  for (Vertex v : chart.complex.vertices) {
    auto it = chart.coords.find(v);
    if (it == chart.coords.end() || static_cast<int>(it->second.size()) != d) {
      throw PreconditionFailed("vertex " + std::to_string(v) + " has no image of the right dimension");
    }
  }
  VerificationReport report;
  std::set<std::vector<Rational>> images;
  for (Vertex v : chart.complex.vertices) images.insert(chart.coords.at(v));
  report.injective_on_vertices = images.size() == chart.complex.vertices.size();

  std::vector<Cell> cells;
  for (const auto& face : chart.complex.maximal_faces()) {
    if (static_cast<int>(face.size()) != n + 1) {
      throw PreconditionFailed("maximal face of size " + std::to_string(face.size()) + " in an n = " +
                               std::to_string(n) + " chart");
    }
    Cell c;
    c.a.resize(d + 1, n + 1);
    for (int j = 0; j <= n; ++j) {
      const auto p = chart.point(face[static_cast<std::size_t>(j)]);
      for (int i = 0; i < d; ++i) c.a(i, j) = p[static_cast<std::size_t>(i)];
      c.a(d, j) = 1;
    }
    const Eigen::MatrixXd pts = c.a.topRows(d);
    double volume = 1;
    if (n > 0) {
      Eigen::MatrixXd w(d, n);
      for (int j = 1; j <= n; ++j) w.col(j - 1) = pts.col(j) - pts.col(0);
      volume = std::sqrt(std::max(0.0, (w.transpose() * w).determinant())) / factorial(n);
    }
    if (volume < kDegenerateVolume) {
      throw DegenerateCell("cell with volume " + std::to_string(volume) + " below tolerance");
    }
    report.cell_volumes.push_back(volume);
    c.pinv = c.a.completeOrthogonalDecomposition().pseudoInverse();
    c.lo = pts.rowwise().minCoeff();
    c.hi = pts.rowwise().maxCoeff();
    cells.push_back(std::move(c));
  }
  double total = 0;
  for (double v : report.cell_volumes) total += v;
  report.volume_sum_error = std::abs(total - std::sqrt(static_cast<double>(n + 1)) / factorial(n));

  constexpr std::size_t kBatch = 1000;
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<std::size_t> failures(batches, 0), boundary(batches, 0);
  parallel_for(batches, [&](std::size_t b) {
    std::mt19937_64 rng(mix64(sample_seed ^ mix64(b + 1)));
    std::exponential_distribution<double> expo(1.0);
    const std::size_t count = std::min(kBatch, samples - b * kBatch);
    Eigen::VectorXd rhs(d + 1);
    for (std::size_t s = 0; s < count; ++s) {
      double sum = 0;
      for (int i = 0; i < d; ++i) {
        rhs(i) = expo(rng);
        sum += rhs(i);
      }
      for (int i = 0; i < d; ++i) rhs(i) /= sum;
      rhs(d) = 1;
      std::size_t inside = 0;
      bool near = false;
      for (const auto& c : cells) {
        bool in_box = true;
        for (int i = 0; i < d && in_box; ++i) {
          in_box = rhs(i) >= c.lo(i) - kBoundaryBand && rhs(i) <= c.hi(i) + kBoundaryBand;
        }
        if (!in_box) continue;
        const Eigen::VectorXd lambda = c.pinv * rhs;
        if ((c.a * lambda - rhs).norm() > 1e-9) continue;
        const double m = lambda.minCoeff();
        if (m > kBoundaryBand) {
          ++inside;
        } else if (m >= -kBoundaryBand) {
          near = true;
        }
      }
      if (near) {
        ++boundary[b];
      } else if (inside != 1) {
        ++failures[b];
      }
    }
  });
  report.samples = samples;
  for (std::size_t b = 0; b < batches; ++b) {
    report.coverage_failures += failures[b];
    report.boundary_samples += boundary[b];
  }
  return report;
}

PLChart cone_extend(const SimplicialComplex& sc2, const SimplicialComplex& sc, Vertex v,
                    const PLChart& chart) {
  if (std::binary_search(sc.vertices.begin(), sc.vertices.end(), v)) {
    throw VertexClash("cone apex " + std::to_string(v) + " is already a vertex");
  }
  VertexSet expected = sc.vertices;
  expected.insert(std::upper_bound(expected.begin(), expected.end(), v), v);
  if (sc2.vertices != expected) throw PreconditionFailed("the extended complex must add exactly the apex");
  if (!(sc2.induced(sc.vertices) == sc)) {
    throw PreconditionFailed("the smaller complex is not the induced subcomplex");
  }
  PLChart out;
  out.complex = sc2;
  out.ambient_dim = chart.ambient_dim + 1;
  for (Vertex u : sc.vertices) {
    auto it = chart.coords.find(u);
    if (it == chart.coords.end()) throw PreconditionFailed("chart misses vertex " + std::to_string(u));
    auto p = it->second;
    p.push_back(0);
    out.coords[u] = std::move(p);
  }
  std::vector<Rational> apex(static_cast<std::size_t>(out.ambient_dim), Rational(0));
  apex.back() = 1;
  out.coords[v] = std::move(apex);
  return out;
}

FillResult fill_to_simplex(const SimplicialComplex& sc, Vertex v, const PLChart& chart,
                           std::optional<Vertex> first_new, std::size_t check_samples) {
  if (!std::binary_search(sc.vertices.begin(), sc.vertices.end(), v)) {
    throw PreconditionFailed("apex is not a vertex of the complex");
  }
  const int d = chart.ambient_dim;
  for (Vertex u : sc.vertices) {
    auto it = chart.coords.find(u);
    if (it == chart.coords.end() || static_cast<int>(it->second.size()) != d) {
      throw PreconditionFailed("chart misses vertex " + std::to_string(u));
    }
  }
  const auto& apex = chart.coords.at(v);
  for (int i = 0; i < d; ++i) {
    if (apex[static_cast<std::size_t>(i)] != (i == d - 1 ? 1 : 0)) {
      throw PreconditionFailed("apex must map to the last unit vector");
    }
  }
  VertexSet base;
  for (Vertex u : sc.vertices) {
    if (u != v) base.push_back(u);
  }
  const SimplicialComplex k = sc.induced(base);
  if (!base.empty()) {
    PLChart lower;
    lower.complex = k;
    lower.ambient_dim = d - 1;
    for (Vertex u : base) {
      auto p = chart.coords.at(u);
      if (p.back() != 0) throw PreconditionFailed("base vertex " + std::to_string(u) + " leaves the hyperplane");
      p.pop_back();
      lower.coords[u] = std::move(p);
    }
    try {
      const auto r = verify_chart(lower, d - 2, check_samples);
      if (!r.injective_on_vertices || r.volume_sum_error >= 1e-9 || r.coverage_failures != 0) {
        throw PreconditionFailed("base chart is not a standard simplex");
      }
    } catch (const DegenerateCell& e) {
      throw PreconditionFailed(std::string("base chart is degenerate: ") + e.what());
    } catch (const PreconditionFailed& e) {
      throw PreconditionFailed(std::string("base chart check failed: ") + e.what());
    }
  }

  std::vector<VertexSet> faces;
  for (Vertex u : base) faces.push_back({u});
  for (const auto& f : k.faces) faces.push_back(f);
  std::stable_sort(faces.begin(), faces.end(),
                   [](const VertexSet& a, const VertexSet& b) { return a.size() < b.size(); });
  auto with = [](VertexSet x, Vertex w) {
    x.insert(std::upper_bound(x.begin(), x.end(), w), w);
    return x;
  };

  FillResult out;
  Vertex next = first_new.value_or(sc.vertices.empty() ? 0 : sc.vertices.back() + 1);
  out.chart = chart;
  std::map<VertexSet, std::vector<VertexSet>> tri;
  auto cone_over = [&](const VertexSet& f) -> std::vector<VertexSet> {
    auto it = tri.find(f);
    if (it != tri.end()) return it->second;
    return {with(f, v)};
  };
  std::vector<VertexSet> facets = sc.maximal_faces();
  for (const auto& f : faces) {
    if (sc.is_face(with(f, v))) continue;
    if (std::binary_search(sc.vertices.begin(), sc.vertices.end(), next)) {
      throw VertexClash("new vertex label " + std::to_string(next) + " is taken");
    }
    const Vertex c = next++;
    std::vector<VertexSet> boundary{f};
    for (std::size_t drop = 0; drop < f.size(); ++drop) {
      VertexSet g = f;
      g.erase(g.begin() + static_cast<long>(drop));
      for (auto& s : cone_over(g)) boundary.push_back(std::move(s));
    }
    std::vector<VertexSet> cells;
    for (const auto& s : boundary) cells.push_back(with(s, c));
    facets.insert(facets.end(), cells.begin(), cells.end());
    tri[f] = std::move(cells);

    std::vector<Rational> b = chart.coords.at(v);
    for (Vertex u : f) {
      const auto& p = chart.coords.at(u);
      for (std::size_t i = 0; i < b.size(); ++i) b[i] += p[i];
    }
    for (auto& x : b) x /= static_cast<int>(f.size() + 1);
    out.chart.coords[c] = std::move(b);
    out.deficient.push_back(f);
    out.cone_vertices.push_back(c);
  }
  VertexSet vertices = sc.vertices;
  for (Vertex c : out.cone_vertices) vertices = with(vertices, c);
  out.complex = SimplicialComplex::from_facets(vertices, facets);
  out.chart.complex = out.complex;
  return out;
}

std::vector<ChainStage> realize_chain(LazyLimit& l, std::size_t steps) {
  if (steps == 0) throw InvalidArgument("realize_chain needs at least one step");
  if (l.spec().kind() != ClassKind::SimplicialComplex) {
    throw InvalidArgument("realize_chain needs a simplicial oracle");
  }
  std::vector<ChainStage> stages;
  ChainStage first;
  first.apex = 0;
  first.chart = standard_chart({0});
  first.complex = first.chart.complex;
  stages.push_back(std::move(first));

  for (std::size_t n = 1; n < steps; ++n) {
    const ChainStage& prev = stages.back();
    VertexSet current = prev.complex.vertices;
    Vertex u = 0;
    while (std::binary_search(current.begin(), current.end(), u)) ++u;
    VertexSet with = current;
    with.insert(std::upper_bound(with.begin(), with.end(), u), u);
    const auto cone = SimplicialComplex::from_structure(l.induced(with));
    const PLChart coned = cone_extend(cone, prev.complex, u, prev.chart);
    const FillResult fill = fill_to_simplex(cone, u, coned);

    // Realise the fill vertices in the oracle, in fill order.
    const Structure pattern = fill.complex.to_structure();
    std::map<Vertex, Vertex> emb;
    for (Vertex x : with) emb[x] = x;
    VertexSet placed = with;
    ChainStage stage;
    stage.apex = u;
    for (Vertex c : fill.cone_vertices) {
      VertexSet next = placed;
      next.insert(std::upper_bound(next.begin(), next.end(), c), c);
      const auto r = find_witness(l, emb, induced_substructure(pattern, next));
      emb[c] = r.vertex;
      stage.fill_vertices.push_back(r.vertex);
      stage.candidates_tried += r.candidates_tried;
      placed = std::move(next);
    }
    VertexSet image;
    for (const auto& [x, y] : emb) image.push_back(y);
    std::sort(image.begin(), image.end());
    stage.complex = SimplicialComplex::from_structure(l.induced(image));
    stage.chart.complex = stage.complex;
    stage.chart.ambient_dim = fill.chart.ambient_dim;
    for (const auto& [x, p] : fill.chart.coords) stage.chart.coords[emb.at(x)] = p;
    stages.push_back(std::move(stage));
  }
  return stages;
}

bool restricts_to(const PLChart& later, const PLChart& earlier) {
  if (later.ambient_dim < earlier.ambient_dim) return false;
  for (const auto& [v, p] : earlier.coords) {
    auto it = later.coords.find(v);
    if (it == later.coords.end()) return false;
    const auto& q = it->second;
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] != (i < p.size() ? p[i] : Rational(0))) return false;
    }
  }
  return true;
}

Json chart_to_json(const PLChart& chart) {
  Json j;
  j["format_version"] = kFormatVersion;
  j["ambient_dim"] = chart.ambient_dim;
  j["vertices"] = chart.complex.vertices;
  j["cells"] = chart.complex.maximal_faces();
  Json coords = Json::array();
  for (const auto& [v, p] : chart.coords) {
    std::vector<std::string> exact;
    for (const auto& x : p) exact.push_back(x.str());
    coords.push_back({{"vertex", v}, {"exact", exact}, {"point", chart.point(v)}});
  }
  j["coordinates"] = coords;
  return j;
}

Json report_to_json(const VerificationReport& r) {
  return Json{{"injective_on_vertices", r.injective_on_vertices},
              {"cell_volumes", r.cell_volumes},
              {"volume_sum_error", r.volume_sum_error},
              {"coverage_failures", r.coverage_failures},
              {"samples", r.samples},
              {"boundary_samples", r.boundary_samples}};
}

std::string to_off(const PLChart& chart) {
  const auto& vs = chart.complex.vertices;
  std::map<Vertex, std::size_t> index;
  for (std::size_t i = 0; i < vs.size(); ++i) index[vs[i]] = i;
  std::set<std::vector<std::size_t>> polys;
  for (const auto& cell : chart.complex.maximal_faces()) {
    std::vector<std::size_t> ids;
    for (Vertex v : cell) ids.push_back(index.at(v));
    if (ids.size() <= 3) {
      polys.insert(ids);
      continue;
    }
    for_each_subset_of_size(VertexSet(ids.begin(), ids.end()), 3, [&](const VertexSet& t) {
      polys.insert(std::vector<std::size_t>(t.begin(), t.end()));
    });
  }
  const int width = chart.ambient_dim <= 3 ? 3 : chart.ambient_dim;
  std::ostringstream out;
  out << (width == 3 ? "OFF" : std::to_string(width) + "OFF") << "\n";
  out << vs.size() << " " << polys.size() << " 0\n";
  char buf[64];
  for (Vertex v : vs) {
    const auto p = chart.point(v);
    for (int i = 0; i < width; ++i) {
      std::snprintf(buf, sizeof buf, "%.10g", i < static_cast<int>(p.size()) ? p[static_cast<std::size_t>(i)] : 0.0);
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  }
  for (const auto& poly : polys) {
    out << poly.size();
    for (std::size_t i : poly) out << " " << i;
    out << "\n";
  }
  return out.str();
}

}  // namespace rsc
