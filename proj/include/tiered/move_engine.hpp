#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tiered/grid_energy.hpp"
#include "tiered/tiered_dp.hpp"

namespace tiered {

// Energy of a tiered move t applied to the current labeling f. T and B mean
// "keep f_p"; a middle label l means "switch to l". For every move t,
// augmented_energy(MoveEnergy, t) == energy(model, apply_move(f, t)).
class MoveEnergy final : public AugmentedEnergy {
 public:
  MoveEnergy(const EnergyModel& model, const Labeling& current);

  GridDims dims() const override { return model_->dims(); }
  int num_middle_labels() const override { return model_->num_labels(); }

  double unary(int r, int k, int a) const override {
    const int p = model_->dims().pixel(r, k);
    return model_->unary(p, resolve(p, a));
  }
  double vertical(int r, int k, int a, int b) const override {
    const GridDims& d = model_->dims();
    const int p = d.pixel(r, k);
    return model_->pair(d.vertical_edge(r, k), resolve(p, a), resolve(p + d.cols, b));
  }
  double horizontal(int r, int k, int a, int b) const override {
    const GridDims& d = model_->dims();
    const int p = d.pixel(r, k);
    return model_->pair(d.horizontal_edge(r, k), resolve(p, a), resolve(p + 1, b));
  }

 private:
  Label resolve(int p, int a) const { return a < model_->num_labels() ? a : (*current_)[p]; }

  const EnergyModel* model_;
  const Labeling* current_;
};

// Switches every pixel whose move entry is a middle label; T/B pixels keep
// their label. Throws ModelError if the move is not tiered.
Labeling apply_move(const Labeling& f, std::span<const int> move, int num_labels);

enum class Direction { Vertical, Horizontal };
const char* to_string(Direction d);

struct MoveResult {
  Labeling labeling;
  TieredSolution move;  // in the solved orientation (transposed for Horizontal)
  double energy = 0.0;  // energy(model, labeling)
};

enum class DpKernel { Fast, Naive };

// Optimal tiered move from f. Horizontal moves are solved on the transposed
// problem. `transposed` may pass a precomputed transpose(model).
MoveResult best_move(const EnergyModel& model, const Labeling& f, Direction direction,
                     DpKernel kernel = DpKernel::Fast, const EnergyModel* transposed = nullptr);

enum class InitKind { UnaryArgmin, Uniform, Random, Given };
enum class Schedule { VerticalOnly, AlternateVH };

struct SolverConfig {
  InitKind init = InitKind::UnaryArgmin;
  Label uniform_label = 0;
  std::uint64_t seed = 0;
  std::optional<Labeling> given;
  Schedule schedule = Schedule::VerticalOnly;
  int max_moves = 1000;
  double epsilon = 0.0;  // a move is accepted iff E_old - E_new > epsilon
  DpKernel kernel = DpKernel::Fast;
};

struct MoveRecord {
  int index = 0;
  Direction direction = Direction::Vertical;
  double energy_before = 0.0;
  double energy_after = 0.0;
  bool accepted = false;
  double ms = 0.0;
};

struct SolveTrace {
  std::vector<MoveRecord> moves;  // every attempted move
  Labeling labeling;
  double initial_energy = 0.0;
  double final_energy = 0.0;
  bool converged = false;
  int accepted_moves() const;
};

Labeling initial_labeling(const EnergyModel& model, const SolverConfig& config);

// Tiered move making: repeat the best tiered move while it strictly lowers the
// energy. VerticalOnly stops at the first rejected move; AlternateVH
// alternates directions (vertical first) and stops once a vertical and a
// horizontal attempt in a row are both rejected. At most max_moves moves are
// accepted; hitting that cap without a fixed point leaves converged false.
SolveTrace run(const EnergyModel& model, const SolverConfig& config);

// Iterated conditional modes: raster sweeps of single-pixel best responses
// (strict improvement only) until a sweep changes nothing. max_moves bounds
// the number of sweeps. Each sweep is one trace record.
SolveTrace run_icm(const EnergyModel& model, const SolverConfig& config);

}  // namespace tiered
