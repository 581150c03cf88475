#pragma once

#include <compare>
#include <span>
#include <vector>

#include "tiered/grid_energy.hpp"

namespace tiered {

// Augmented alphabet of a tiered solve: middle labels 0..K-1, then the two
// sentinels T (= K) and B (= K + 1).
inline constexpr int top_label(int num_middle) { return num_middle; }
inline constexpr int bottom_label(int num_middle) { return num_middle + 1; }

// Energy over the augmented alphabet. Pairwise terms must be finite; unary
// terms may be +inf.
class AugmentedEnergy {
 public:
  virtual ~AugmentedEnergy() = default;

  virtual GridDims dims() const = 0;
  virtual int num_middle_labels() const = 0;
  virtual double unary(int r, int k, int a) const = 0;
  // Edge (r,k)-(r+1,k), a labels the upper pixel.
  virtual double vertical(int r, int k, int a, int b) const = 0;
  // Edge (r,k)-(r,k+1), a labels the left pixel.
  virtual double horizontal(int r, int k, int a, int b) const = 0;
};

// Explicit tables, used for plain tiered labeling problems and tests.
class DenseAugmentedEnergy final : public AugmentedEnergy {
 public:
  DenseAugmentedEnergy(GridDims dims, int num_middle);

  GridDims dims() const override { return dims_; }
  int num_middle_labels() const override { return num_middle_; }
  double unary(int r, int k, int a) const override { return unary_[unary_index(r, k, a)]; }
  double vertical(int r, int k, int a, int b) const override {
    return vertical_[pair_index(r * dims_.cols + k, a, b)];
  }
  double horizontal(int r, int k, int a, int b) const override {
    return horizontal_[pair_index(r * (dims_.cols - 1) + k, a, b)];
  }

  double& unary(int r, int k, int a) { return unary_[unary_index(r, k, a)]; }
  double& vertical(int r, int k, int a, int b) { return vertical_[pair_index(r * dims_.cols + k, a, b)]; }
  double& horizontal(int r, int k, int a, int b) {
    return horizontal_[pair_index(r * (dims_.cols - 1) + k, a, b)];
  }

 private:
  std::size_t unary_index(int r, int k, int a) const {
    return (static_cast<std::size_t>(dims_.pixel(r, k))) * alphabet_ + a;
  }
  std::size_t pair_index(int edge, int a, int b) const {
    return (static_cast<std::size_t>(edge) * alphabet_ + a) * alphabet_ + b;
  }

  GridDims dims_;
  int num_middle_;
  int alphabet_;
  std::vector<double> unary_;
  std::vector<double> vertical_;
  std::vector<double> horizontal_;
};

// One column of a tiered labeling: rows [0, i) are T, rows [i, j) take the
// middle label l and rows [j, m) are B. When i == j, l is 0.
struct ColumnState {
  int i = 0;
  int j = 0;
  int l = 0;
  auto operator<=>(const ColumnState&) const = default;
};

struct TieredSolution {
  std::vector<ColumnState> states;
};

// Dense numbering of the valid column states of an m-row column with K
// middle labels, in lexicographic (i, j, l) order.
class StateSpace {
 public:
  StateSpace(int rows, int num_middle);

  int rows() const { return rows_; }
  int num_middle() const { return num_middle_; }
  int size() const { return size_; }

  int index(ColumnState s) const {
    return offset_[s.i] + (s.j == s.i ? 0 : 1 + (s.j - s.i - 1) * num_middle_ + s.l);
  }
  ColumnState state(int index) const { return states_[index]; }
  bool valid(ColumnState s) const;

 private:
  int rows_;
  int num_middle_;
  int size_;
  std::vector<int> offset_;
  std::vector<ColumnState> states_;
};

// Column-chain form of an augmented energy. Column costs U_k and cross-column
// costs H_k are read from per-column prefix sums in O(1).
class ChainEnergy {
 public:
  explicit ChainEnergy(const AugmentedEnergy& energy);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int num_middle() const { return num_middle_; }
  const StateSpace& states() const { return space_; }

  // Cost of pixels and vertical edges of column k under state s.
  double column_cost(int k, ColumnState s) const;
  // Cost of horizontal edges between column k (state left) and k+1 (state right).
  double transition_cost(int k, ColumnState left, ColumnState right) const;

  // Sum over rows [from, to) of unary(r, k, a); +inf if any term is +inf.
  double unary_band(int k, int a, int from, int to) const;
  // Sum over rows [from, to) of horizontal(r, k, a, b).
  double horizontal_band(int k, int a, int b, int from, int to) const {
    const double* p = horizontal_prefix(k, a, b);
    return p[to] - p[from];
  }
  // Prefix array (rows + 1 entries) of horizontal(r, k, a, b).
  const double* horizontal_prefix(int k, int a, int b) const {
    return &hprefix_[((static_cast<std::size_t>(k) * alphabet_ + a) * alphabet_ + b) * (rows_ + 1)];
  }

 private:
  std::size_t column_slot(int k, int a) const {
    return (static_cast<std::size_t>(k) * alphabet_ + a) * (rows_ + 1);
  }

  int rows_;
  int cols_;
  int num_middle_;
  int alphabet_;
  StateSpace space_;
  std::vector<double> unary_finite_;  // finite part of unary prefix sums
  std::vector<int> unary_infinite_;   // count of +inf terms
  std::vector<double> same_vertical_; // prefix of vertical(r, k, a, a)
  std::vector<double> top_to_;        // vertical(r, k, T, b)
  std::vector<double> to_bottom_;     // vertical(r, k, a, B)
  std::vector<double> hprefix_;
};

struct TieredResult {
  TieredSolution solution;
  double energy = 0.0;
};

// Minimizes the chain by dynamic programming, scanning every predecessor
// state for each state: O(n m^4 K^2). Serial reference implementation.
TieredResult solve_naive(const ChainEnergy& chain);

// Same optimum with O(n m^2 K^2) transitions. For each label pair the
// predecessor search is split by the relative order of the four break rows
// and each case reduces to running minima over one or two rows of the
// predecessor table. The argmin is then re-scored through the chain so the
// returned energy follows the same arithmetic as solve_naive. Parallel over
// current-column labels.
TieredResult solve_fast(const ChainEnergy& chain);

// Row-major labeling over the augmented alphabet.
std::vector<int> decode(const TieredSolution& solution, const GridDims& dims, int num_middle);

// True if every column reads T..T l..l B..B with a single middle label l.
bool check_tiered(std::span<const int> augmented, const GridDims& dims, int num_middle);

// Direct evaluation of an augmented energy on a labeling over the augmented alphabet.
double augmented_energy(const AugmentedEnergy& energy, std::span<const int> augmented);

}  // namespace tiered
