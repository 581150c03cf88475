#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "support.hpp"
#include "tiered/move_engine.hpp"
#include "tiered/verify.hpp"

using namespace tiered;
using namespace tiered::testing;

namespace {

Labeling decode_code(GridDims d, int K, std::uint64_t code) {
  Labeling f(d, 0);
  for (int p = d.size() - 1; p >= 0; --p) {
    f[p] = static_cast<Label>(code % K);
    code /= K;
  }
  return f;
}

// Column-wise run test written against the raw labeling: for each label and
// column, the rows carrying that label inside one connected component must
// be contiguous. Components are found by repeated relaxation.
bool tiered_consistent_reference(const Labeling& f) {
  const GridDims& d = f.dims;
  std::vector<int> comp(static_cast<std::size_t>(d.size()));
  for (int p = 0; p < d.size(); ++p) comp[p] = p;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int e = 0; e < d.num_edges(); ++e) {
      const Edge pq = d.edge(e);
      if (f[pq.p] != f[pq.q]) continue;
      const int lo = std::min(comp[pq.p], comp[pq.q]);
      if (comp[pq.p] != lo || comp[pq.q] != lo) {
        comp[pq.p] = comp[pq.q] = lo;
        changed = true;
      }
    }
  }
  for (int k = 0; k < d.cols; ++k) {
    std::set<int> closed;
    int prev = -1;
    for (int r = 0; r < d.rows; ++r) {
      const int c = comp[d.pixel(r, k)];
      if (c != prev) {
        if (closed.count(c)) return false;
        if (prev >= 0) closed.insert(prev);
        prev = c;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("constant labeling is one region without boundary") {
  const Labeling f(GridDims(3, 4), 2);
  const auto rs = regions(f);
  REQUIRE(rs.size() == 1);
  CHECK(rs[0].label == 2);
  CHECK(rs[0].pixels.size() == 12);
  CHECK(rs[0].interior_edges.size() == static_cast<std::size_t>(f.dims.num_edges()));
  CHECK(rs[0].boundary_edges.empty());
  CHECK(shared_boundary(f).empty());
  CHECK(is_tiered_consistent(f));
}

TEST_CASE("checkerboard has four singleton regions and four boundary edges") {
  const Labeling f(GridDims(2, 2), {0, 1, 1, 0});
  const auto rs = regions(f);
  CHECK(rs.size() == 4);
  for (const Region& r : rs) {
    CHECK(r.pixels.size() == 1);
    CHECK(r.interior_edges.empty());
    CHECK(r.boundary_edges.size() == 2);
  }
  CHECK(shared_boundary(f).size() == 4);
}

TEST_CASE("touching same-label components merge into one region") {
  // 1 1 1
  // 1 0 1
  // 0 0 1
  const Labeling f(GridDims(3, 3), {1, 1, 1, 1, 0, 1, 0, 0, 1});
  const auto rs = regions(f);
  REQUIRE(rs.size() == 2);
  int ones = 0;
  for (const Region& r : rs)
    if (r.label == 1) ones = static_cast<int>(r.pixels.size());
  CHECK(ones == 6);
}

TEST_CASE("region structure partitions pixels and edges") {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const GridDims d(uniform_int(rng, 1, 5), uniform_int(rng, 1, 5));
    const Labeling f = random_labeling(rng, d, uniform_int(rng, 1, 3));
    std::vector<int> pixel_hits(static_cast<std::size_t>(d.size()), 0);
    std::vector<int> interior_hits(static_cast<std::size_t>(d.num_edges()), 0);
    std::vector<int> boundary_hits(static_cast<std::size_t>(d.num_edges()), 0);
    for (const Region& r : regions(f)) {
      for (int p : r.pixels) {
        ++pixel_hits[p];
        CHECK(f[p] == r.label);
      }
      for (const Edge& e : r.interior_edges) ++interior_hits[*d.edge_id(e.p, e.q)];
      for (const Edge& e : r.boundary_edges) {
        CHECK(f[e.p] != f[e.q]);
        ++boundary_hits[*d.edge_id(e.p, e.q)];
      }
    }
    const auto shared = shared_boundary(f);
    std::vector<int> shared_hits(static_cast<std::size_t>(d.num_edges()), 0);
    for (const Edge& e : shared) ++shared_hits[*d.edge_id(e.p, e.q)];
    for (int p = 0; p < d.size(); ++p) CHECK(pixel_hits[p] == 1);
    for (int e = 0; e < d.num_edges(); ++e) {
      const Edge pq = d.edge(e);
      const bool same = f[pq.p] == f[pq.q];
      CHECK(interior_hits[e] == (same ? 1 : 0));
      CHECK(boundary_hits[e] == (same ? 0 : 2));
      CHECK(shared_hits[e] == (same ? 0 : 1));
    }
  }
}

TEST_CASE("interior and shared boundary restrictions sum to the energy") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const GridDims d(3, 3);
    const EnergyModel m = random_model(rng, d, 3);
    const Labeling f = random_labeling(rng, d, 3);
    double total = restricted_energy(m, f, {}, shared_boundary(f));
    for (const Region& r : regions(f)) total += restricted_energy(m, f, r.pixels, r.interior_edges);
    CHECK(total == energy(m, f));
  }
}

TEST_CASE("tiered consistency examples") {
  const GridDims d(3, 2);
  CHECK(is_tiered_consistent(Labeling(d, 1)));
  CHECK_FALSE(is_tiered_consistent(Labeling::from_column_major(d, std::vector<Label>{1, 0, 1, 1, 1, 1})));
  // A U-shaped region whose second column is split by another label.
  // 0 0
  // 1 0
  // 0 0
  CHECK_FALSE(is_tiered_consistent(Labeling(d, {0, 0, 1, 0, 0, 0})));
  // Same column split by two different regions is fine.
  CHECK(is_tiered_consistent(Labeling(GridDims(3, 1), {0, 1, 0})));
}

TEST_CASE("tiered consistency agrees with a reference on every small labeling") {
  for (const GridDims d : {GridDims(2, 3), GridDims(3, 3), GridDims(4, 2)}) {
    std::uint64_t total = 1;
    for (int p = 0; p < d.size(); ++p) total *= 3;
    for (std::uint64_t code = 0; code < total; ++code) {
      const Labeling f = decode_code(d, 3, code);
      CHECK(is_tiered_consistent(f) == tiered_consistent_reference(f));
    }
  }
}

TEST_CASE("worst-case instance enumeration facts") {
  for (double q : {2.0, 10.0, 100.0}) {
    const EnergyModel m = worst_case_instance(q, 3.0);
    const Labeling f_star = Labeling::from_column_major(m.dims(), std::vector<Label>{1, 0, 1, 1, 1, 1});
    const Labeling zeros(m.dims(), 0);
    for (std::uint64_t code = 0; code < 64; ++code) {
      const Labeling f = decode_code(m.dims(), 2, code);
      const double e = direct_energy(m, f);
      if (f == f_star) CHECK(e == 3.0);
      else if (f == zeros) CHECK(e == 3.0 * q);
      else CHECK(e >= 3.0 * 2.0 * q);
    }
    const OptimumResult global = brute_optimum(m);
    CHECK(global.labeling == f_star);
    CHECK(global.energy == 3.0);
    const OptimumResult tiered = brute_tiered_optimum(m);
    CHECK(tiered.labeling == zeros);
    CHECK(tiered.energy == 3.0 * q);
  }
  CHECK(energy(worst_case_instance(10), Labeling(GridDims(3, 2), 0)) == doctest::Approx(10.0));
  CHECK_THROWS_AS(worst_case_instance(1.0), ModelError);
  CHECK_THROWS_AS(worst_case_instance(0.5), ModelError);
  CHECK_THROWS_AS(worst_case_instance(10, 0.0), ModelError);
}

TEST_CASE("brute optimum with zero unaries under Potts is a constant labeling") {
  const GridDims d(2, 3);
  const EnergyModel m(d, 3, std::vector<double>(18, 0.0), PairwisePotential::potts(2));
  const OptimumResult r = brute_optimum(m);
  CHECK(r.energy == 0.0);
  CHECK(r.labeling == Labeling(d, 0));
}

TEST_CASE("brute optima agree with direct enumeration") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const GridDims d(uniform_int(rng, 1, 3), uniform_int(rng, 1, 3));
    const int K = uniform_int(rng, 1, 3);
    const EnergyModel m = random_model(rng, d, K);
    std::uint64_t total = 1;
    for (int p = 0; p < d.size(); ++p) total *= K;
    double best = kInfinity;
    double best_tiered = kInfinity;
    for (std::uint64_t code = 0; code < total; ++code) {
      const Labeling f = decode_code(d, K, code);
      const double e = direct_energy(m, f);
      best = std::min(best, e);
      if (tiered_consistent_reference(f)) best_tiered = std::min(best_tiered, e);
    }
    const OptimumResult g = brute_optimum(m);
    const OptimumResult t = brute_tiered_optimum(m);
    CHECK(g.energy == best);
    CHECK(t.energy == best_tiered);
    CHECK(energy(m, g.labeling) == g.energy);
    CHECK(is_tiered_consistent(t.labeling));
    if (is_tiered_consistent(g.labeling)) CHECK(t.energy == g.energy);
  }
}

TEST_CASE("enumeration budget is enforced") {
  const GridDims d(5, 5);
  const EnergyModel m(d, 2, std::vector<double>(50, 0.0), PairwisePotential::potts(1));
  CHECK_THROWS_AS(brute_optimum(m), ModelError);
  CHECK_THROWS_AS(brute_tiered_optimum(m), ModelError);
}

TEST_CASE("bound report on the worst-case instance") {
  const EnergyModel m = worst_case_instance(10);
  const Labeling zeros(m.dims(), 0);

  const BoundReport global = check_bound(m, zeros, KappaMode::Global);
  CHECK(global.energy_local == doctest::Approx(10.0));
  CHECK(global.energy_tiered == doctest::Approx(10.0));
  CHECK(global.energy_global == doctest::Approx(1.0));
  CHECK(global.kappa == doctest::Approx(60.0));
  CHECK(2.0 * global.kappa * global.energy_tiered == doctest::Approx(1200.0));
  CHECK(global.bound_holds);
  CHECK_FALSE(global.optimum_tiered_consistent);
  CHECK(global.unary_shift == 0.0);

  const BoundReport edge = check_bound(m, zeros);
  CHECK(edge.kappa == 1.0);
  CHECK(edge.bound_holds);
  CHECK_FALSE(edge.global_bound_holds);

  const std::string kv = global.to_key_value();
  CHECK(kv.find("bound_holds=true\n") != std::string::npos);
  CHECK(kv.find("kappa_mode=global\n") != std::string::npos);
  CHECK(kv.find("optimum_tiered_consistent=false\n") != std::string::npos);
}

TEST_CASE("bound check shifts negative unaries") {
  const GridDims d(2, 2);
  std::vector<double> unary{-3, 1, 0, 2, 4, -1, 0, 0};
  const EnergyModel m(d, 2, unary, PairwisePotential::potts(1));
  const BoundReport r = check_bound(m, Labeling(d, 0));
  CHECK(r.unary_shift == 3.0);
  CHECK(r.energy_local == energy(m, Labeling(d, 0)) + 12.0);
  CHECK(r.energy_global <= r.energy_tiered);
}

TEST_CASE("bound check names violated preconditions") {
  const GridDims d(2, 2);
  const std::vector<double> unary(8, 0.0);
  CHECK_THROWS_WITH_AS(check_bound(EnergyModel(d, 2, unary, PairwisePotential::general_table({1, 1, 1, 0})),
                                   Labeling(d, 0)),
                       doctest::Contains("diagonal"), ModelError);
  CHECK_THROWS_WITH_AS(check_bound(EnergyModel(d, 2, unary, PairwisePotential::general_table({0, 0, 1, 0})),
                                   Labeling(d, 0)),
                       doctest::Contains("strictly positive"), ModelError);
  CHECK_THROWS_AS(check_bound(EnergyModel(d, 1, std::vector<double>(4, 0.0), PairwisePotential::potts(1)),
                              Labeling(d, 0)),
                  ModelError);
}

TEST_CASE("converged tiered moves satisfy the approximation bound") {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const EnergyModel m = random_model(rng, GridDims(3, 3), 3, FamilyMix::PositiveOffDiagonal, 1, 20);
    SolverConfig c;
    c.init = InitKind::Random;
    c.seed = trial;
    const SolveTrace t = run(m, c);
    REQUIRE(t.converged);
    const BoundReport r = check_bound(m, t.labeling);
    CHECK(r.bound_holds);
    if (r.optimum_tiered_consistent) {
      CHECK(r.energy_tiered == r.energy_global);
      CHECK(r.global_bound_holds);
    }
  }
}
