#include "tiered/move_engine.hpp"

#include <algorithm>
#include <chrono>
#include <random>

namespace tiered {

MoveEnergy::MoveEnergy(const EnergyModel& model, const Labeling& current)
    : model_(&model), current_(&current) {
  check_labeling(model, current);
}

Labeling apply_move(const Labeling& f, std::span<const int> move, int num_labels) {
  if (!check_tiered(move, f.dims, num_labels)) throw ModelError("move violates the tiered constraints");
  Labeling out = f;
  for (std::size_t p = 0; p < move.size(); ++p)
    if (move[p] < num_labels) out.labels[p] = move[p];
  return out;
}

const char* to_string(Direction d) { return d == Direction::Vertical ? "V" : "H"; }

MoveResult best_move(const EnergyModel& model, const Labeling& f, Direction direction, DpKernel kernel,
                     const EnergyModel* transposed) {
  const int K = model.num_labels();
  auto solve = [&](const EnergyModel& m, const Labeling& g) {
    const MoveEnergy move_energy(m, g);
    const ChainEnergy chain(move_energy);
    TieredResult r = kernel == DpKernel::Fast ? solve_fast(chain) : solve_naive(chain);
    const std::vector<int> t = decode(r.solution, m.dims(), K);
    return std::pair{apply_move(g, t, K), std::move(r.solution)};
  };

  MoveResult result;
  if (direction == Direction::Vertical) {
    auto [labeling, move] = solve(model, f);
    result.labeling = std::move(labeling);
    result.move = std::move(move);
  } else {
    std::optional<EnergyModel> local;
    if (transposed == nullptr) transposed = &local.emplace(transpose(model));
    auto [labeling, move] = solve(*transposed, transpose(f));
    result.labeling = transpose(labeling);
    result.move = std::move(move);
  }
  result.energy = energy(model, result.labeling);
  return result;
}

int SolveTrace::accepted_moves() const {
  return static_cast<int>(std::count_if(moves.begin(), moves.end(), [](const MoveRecord& r) { return r.accepted; }));
}

Labeling initial_labeling(const EnergyModel& model, const SolverConfig& config) {
  const GridDims& d = model.dims();
  const int K = model.num_labels();
  switch (config.init) {
    case InitKind::UnaryArgmin: {
      Labeling f(d, 0);
      for (int p = 0; p < d.size(); ++p) {
        Label best = 0;
        for (Label l = 1; l < K; ++l)
          if (model.unary(p, l) < model.unary(p, best)) best = l;
        f[p] = best;
      }
      return f;
    }
    case InitKind::Uniform:
      if (config.uniform_label < 0 || config.uniform_label >= K) throw ModelError("uniform label out of range");
      return Labeling(d, config.uniform_label);
    case InitKind::Random: {
      std::mt19937_64 rng(config.seed);
      std::uniform_int_distribution<Label> pick(0, K - 1);
      Labeling f(d, 0);
      for (Label& l : f.labels) l = pick(rng);
      return f;
    }
    case InitKind::Given:
      if (!config.given) throw ModelError("init=given without a labeling");
      check_labeling(model, *config.given);
      return *config.given;
  }
  throw ModelError("unknown init kind");
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

SolveTrace run(const EnergyModel& model, const SolverConfig& config) {
  if (config.max_moves < 1) throw ModelError("max_moves must be at least 1");
  SolveTrace trace;
  trace.labeling = initial_labeling(model, config);
  trace.initial_energy = energy(model, trace.labeling);
  double current = trace.initial_energy;

  std::optional<EnergyModel> transposed;
  if (config.schedule == Schedule::AlternateVH) transposed.emplace(transpose(model));

  int accepted = 0;
  int rejected_in_a_row = 0;
  const int rejections_to_converge = config.schedule == Schedule::VerticalOnly ? 1 : 2;
  Direction direction = Direction::Vertical;

  while (accepted < config.max_moves) {
    const auto start = Clock::now();
    MoveResult move = best_move(model, trace.labeling, direction, config.kernel,
                                transposed ? &*transposed : nullptr);
    MoveRecord rec;
    rec.index = static_cast<int>(trace.moves.size()) + 1;
    rec.direction = direction;
    rec.energy_before = current;
    rec.energy_after = move.energy;
    rec.accepted = current - move.energy > config.epsilon;
    rec.ms = elapsed_ms(start);
    trace.moves.push_back(rec);

    if (rec.accepted) {
      trace.labeling = std::move(move.labeling);
      current = move.energy;
      ++accepted;
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row >= rejections_to_converge) {
      trace.converged = true;
      break;
    }
    if (config.schedule == Schedule::AlternateVH) {
      direction = direction == Direction::Vertical ? Direction::Horizontal : Direction::Vertical;
    }
  }
  trace.final_energy = current;
  return trace;
}

SolveTrace run_icm(const EnergyModel& model, const SolverConfig& config) {
  if (config.max_moves < 1) throw ModelError("max_moves must be at least 1");
  const GridDims& d = model.dims();
  const int K = model.num_labels();
  SolveTrace trace;
  trace.labeling = initial_labeling(model, config);
  trace.initial_energy = energy(model, trace.labeling);
  double current = trace.initial_energy;
  Labeling& f = trace.labeling;

  auto local_cost = [&](int p, Label l) {
    const int r = d.row_of(p);
    const int k = d.col_of(p);
    double c = model.unary(p, l);
    if (k > 0) c += model.pair(d.horizontal_edge(r, k - 1), f[p - 1], l);
    if (k + 1 < d.cols) c += model.pair(d.horizontal_edge(r, k), l, f[p + 1]);
    if (r > 0) c += model.pair(d.vertical_edge(r - 1, k), f[p - d.cols], l);
    if (r + 1 < d.rows) c += model.pair(d.vertical_edge(r, k), l, f[p + d.cols]);
    return c;
  };

  for (int sweep = 0; sweep < config.max_moves; ++sweep) {
    const auto start = Clock::now();
    bool changed = false;
    for (int p = 0; p < d.size(); ++p) {
      Label best = f[p];
      double best_cost = local_cost(p, best);
      for (Label l = 0; l < K; ++l) {
        const double c = local_cost(p, l);
        if (c < best_cost) {
          best_cost = c;
          best = l;
        }
      }
      if (best != f[p]) {
        f[p] = best;
        changed = true;
      }
    }
    const double after = energy(model, f);
    MoveRecord rec;
    rec.index = sweep + 1;
    rec.energy_before = current;
    rec.energy_after = after;
    rec.accepted = changed;
    rec.ms = elapsed_ms(start);
    trace.moves.push_back(rec);
    current = after;
    if (!changed) {
      trace.converged = true;
      break;
    }
  }
  trace.final_energy = current;
  return trace;
}

}  // namespace tiered
