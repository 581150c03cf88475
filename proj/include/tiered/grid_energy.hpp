#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tiered {

using Label = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Thrown for malformed models, mismatched dimensions and similar caller errors.
class ModelError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Grid of rows x cols pixels, row-major pixel ids p = r * cols + k.
//
// Edge ids: horizontal edges (r,k)-(r,k+1) come first, numbered
// r * (cols - 1) + k; vertical edges (r,k)-(r+1,k) follow, numbered
// num_horizontal_edges() + r * cols + k. Each edge is stored once with the
// lower pixel id first.
struct GridDims {
  int rows = 0;
  int cols = 0;

  GridDims() = default;
  GridDims(int rows_, int cols_);

  int size() const { return rows * cols; }
  int pixel(int r, int k) const { return r * cols + k; }
  int row_of(int p) const { return p / cols; }
  int col_of(int p) const { return p % cols; }

  int num_horizontal_edges() const { return rows * (cols - 1); }
  int num_vertical_edges() const { return (rows - 1) * cols; }
  int num_edges() const { return num_horizontal_edges() + num_vertical_edges(); }
  int horizontal_edge(int r, int k) const { return r * (cols - 1) + k; }
  int vertical_edge(int r, int k) const { return num_horizontal_edges() + r * cols + k; }

  struct Edge {
    int p;
    int q;
    auto operator<=>(const Edge&) const = default;
  };
  Edge edge(int id) const;
  // Edge id joining p and q (either order), or nullopt if they are not
  // 4-neighbours.
  std::optional<int> edge_id(int p, int q) const;

  GridDims transposed() const { return {cols, rows}; }

  bool operator==(const GridDims&) const = default;
};

using Edge = GridDims::Edge;

enum class PairwiseFamily : std::uint32_t {
  Potts = 0,
  Linear = 1,
  Quadratic = 2,
  TruncatedLinear = 3,
  TruncatedQuadratic = 4,
  GeneralTable = 5,
  EdgeTables = 6,  // one K x K table per edge
};

const char* to_string(PairwiseFamily family);

// Pairwise potential V(a, b) with an optional per-edge multiplier.
//
// Parametric families:
//   Potts               v * [a != b]
//   Linear              w * |a - b|
//   Quadratic           w * (a - b)^2
//   TruncatedLinear     w * min(|a - b|, tau)
//   TruncatedQuadratic  w * min((a - b)^2, tau)
// GeneralTable holds one row-major K x K table shared by all edges, indexed
// [first pixel label][second pixel label]; EdgeTables holds one per edge.
class PairwisePotential {
 public:
  static PairwisePotential potts(double v);
  static PairwisePotential linear(double w);
  static PairwisePotential quadratic(double w);
  static PairwisePotential truncated_linear(double w, double tau);
  static PairwisePotential truncated_quadratic(double w, double tau);
  static PairwisePotential general_table(std::vector<double> table);
  static PairwisePotential edge_tables(std::vector<double> tables);

  // Per-edge scale, indexed by edge id. Empty means 1.0 everywhere.
  PairwisePotential with_scales(std::vector<double> scales) const;

  PairwiseFamily family() const { return family_; }
  double weight() const { return weight_; }
  double truncation() const { return truncation_; }
  const std::vector<double>& table() const { return table_; }
  const std::vector<double>& scales() const { return scales_; }

  // Unscaled value of a parametric family.
  double base(Label a, Label b) const;

 private:
  PairwiseFamily family_ = PairwiseFamily::Potts;
  double weight_ = 1.0;
  double truncation_ = 0.0;
  std::vector<double> table_;
  std::vector<double> scales_;
};

class EnergyModel {
 public:
  // unary is pixel-major: unary[p * num_labels + l].
  EnergyModel(GridDims dims, int num_labels, std::vector<double> unary,
              PairwisePotential pairwise);

  const GridDims& dims() const { return dims_; }
  int num_labels() const { return num_labels_; }
  const PairwisePotential& pairwise() const { return pairwise_; }
  std::span<const double> unary_costs() const { return unary_; }

  double unary(int p, Label l) const { return unary_[static_cast<std::size_t>(p) * num_labels_ + l]; }

  double edge_scale(int edge) const { return scale_[edge]; }

  double pair(int edge, Label a, Label b) const {
    const std::size_t ab = static_cast<std::size_t>(a) * num_labels_ + b;
    if (!edge_tables_.empty()) {
      return scale_[edge] * edge_tables_[static_cast<std::size_t>(edge) * num_labels_ * num_labels_ + ab];
    }
    return scale_[edge] * dense_[ab];
  }

  // Returns a copy with every unary shifted by `offset`.
  EnergyModel with_unary_offset(double offset) const;

 private:
  GridDims dims_;
  int num_labels_;
  std::vector<double> unary_;
  PairwisePotential pairwise_;
  std::vector<double> dense_;        // K x K, parametric and GeneralTable
  std::vector<double> edge_tables_;  // E x K x K, EdgeTables only
  std::vector<double> scale_;        // E
};

// One label per pixel, row-major.
struct Labeling {
  GridDims dims;
  std::vector<Label> labels;

  Labeling() = default;
  Labeling(GridDims d, Label fill) : dims(d), labels(static_cast<std::size_t>(d.size()), fill) {}
  Labeling(GridDims d, std::vector<Label> l);

  Label operator[](int p) const { return labels[p]; }
  Label& operator[](int p) { return labels[p]; }
  Label at(int r, int k) const { return labels[dims.pixel(r, k)]; }

  // Builds a labeling from values listed column by column, top to bottom.
  static Labeling from_column_major(GridDims d, std::span<const Label> values);

  bool operator==(const Labeling&) const = default;
};

// Throws ModelError if f does not fit the model (size or label range).
void check_labeling(const EnergyModel& model, const Labeling& f);

// Sum of unaries plus scaled pairwise terms. Rows are summed independently
// (in parallel) and the row totals are added in row order, so the result does
// not depend on the thread count.
double energy(const EnergyModel& model, const Labeling& f);

// Energy restricted to the given pixels and edges. Edges must be 4-neighbour
// pairs of the grid.
double restricted_energy(const EnergyModel& model, const Labeling& f, std::span<const int> pixels,
                         std::span<const Edge> edges);

enum class KappaMode {
  EdgeWise,  // max over edges of (max off-diagonal / min off-diagonal) on that edge
  Global,    // max off-diagonal over all edges / min off-diagonal over all edges
};

// Ratio of largest to smallest off-diagonal pairwise cost. Throws ModelError
// if K < 2 or any scaled off-diagonal value is <= 0.
double kappa(const EnergyModel& model, KappaMode mode = KappaMode::EdgeWise);

// Swaps rows and columns. Edge orientation (lower pixel first) is preserved:
// a horizontal edge becomes a vertical edge with the same first pixel.
EnergyModel transpose(const EnergyModel& model);
Labeling transpose(const Labeling& f);

}  // namespace tiered
