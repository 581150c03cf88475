#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tiered/grid_energy.hpp"

namespace tiered {

// Maximal 4-connected set of pixels sharing one label.
struct Region {
  Label label = 0;
  std::vector<int> pixels;          // ascending
  std::vector<Edge> interior_edges; // both ends in the region
  std::vector<Edge> boundary_edges; // exactly one end in the region
};

std::vector<Region> regions(const Labeling& f);

// Edges joining different regions, each listed once in edge-id order.
std::vector<Edge> shared_boundary(const Labeling& f);

// True iff every maximal region meets every column in one contiguous run of rows.
bool is_tiered_consistent(const Labeling& f);

struct OptimumResult {
  Labeling labeling;
  double energy = 0.0;
};

// Labelings beyond this many are refused by the enumeration oracles.
inline constexpr std::uint64_t kEnumerationBudget = std::uint64_t{1} << 22;

// Global optimum by enumerating all K^(rows*cols) labelings. Ties go to the
// labeling with the smallest row-major base-K code.
OptimumResult brute_optimum(const EnergyModel& model);

// Optimum over tiered consistent labelings, same enumeration order.
OptimumResult brute_tiered_optimum(const EnergyModel& model);

struct BoundReport {
  double energy_local = 0.0;    // E(f^)
  double energy_tiered = 0.0;   // E(f dagger)
  double energy_global = 0.0;   // E(f*)
  double kappa = 1.0;
  double unary_shift = 0.0;     // constant added to every unary before checking
  bool bound_holds = false;     // E(f^) <= 2 kappa E(f dagger)
  bool optimum_tiered_consistent = false;
  bool global_bound_holds = false;  // E(f^) <= 2 kappa E(f*)
  KappaMode kappa_mode = KappaMode::EdgeWise;

  // Flat "key=value" lines.
  std::string to_key_value() const;
};

// Checks the 2-kappa approximation bound for a local minimum f_hat of tiered
// moves. Requires every pairwise table to be zero on the diagonal and
// strictly positive off it. Negative unaries are lifted by a constant
// (reported as unary_shift); all energies in the report refer to the shifted
// model. Throws ModelError naming the first violated precondition.
BoundReport check_bound(const EnergyModel& model, const Labeling& f_hat,
                        KappaMode mode = KappaMode::EdgeWise);

// 3 x 2 binary model on which the optimal tiered consistent labeling (all
// zeros, energy Q) is far from the global optimum {1,0,1,1,1,1} (energy 1),
// listed column-major. Every cost is multiplied by `scale`; scale = 3 makes
// all costs integers.
EnergyModel worst_case_instance(double q, double scale = 1.0);

}  // namespace tiered
