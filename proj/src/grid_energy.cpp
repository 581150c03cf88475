#include "tiered/grid_energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tiered {

GridDims::GridDims(int rows_, int cols_) : rows(rows_), cols(cols_) {
  if (rows < 1 || cols < 1) {
    throw ModelError("grid dimensions must be positive, got " + std::to_string(rows) + "x" +
                     std::to_string(cols));
  }
}

Edge GridDims::edge(int id) const {
  const int nh = num_horizontal_edges();
  if (id < nh) {
    const int r = id / (cols - 1);
    const int k = id % (cols - 1);
    return {pixel(r, k), pixel(r, k + 1)};
  }
  id -= nh;
  const int r = id / cols;
  const int k = id % cols;
  return {pixel(r, k), pixel(r + 1, k)};
}

std::optional<int> GridDims::edge_id(int p, int q) const {
  if (p < 0 || q < 0 || p >= size() || q >= size()) return std::nullopt;
  if (p > q) std::swap(p, q);
  const int rp = row_of(p), kp = col_of(p);
  const int rq = row_of(q), kq = col_of(q);
  if (rp == rq && kq == kp + 1) return horizontal_edge(rp, kp);
  if (kp == kq && rq == rp + 1) return vertical_edge(rp, kp);
  return std::nullopt;
}

const char* to_string(PairwiseFamily family) {
  switch (family) {
    case PairwiseFamily::Potts: return "potts";
    case PairwiseFamily::Linear: return "linear";
    case PairwiseFamily::Quadratic: return "quadratic";
    case PairwiseFamily::TruncatedLinear: return "truncated-linear";
    case PairwiseFamily::TruncatedQuadratic: return "truncated-quadratic";
    case PairwiseFamily::GeneralTable: return "general-table";
    case PairwiseFamily::EdgeTables: return "edge-tables";
  }
  return "unknown";
}

PairwisePotential PairwisePotential::potts(double v) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::Potts;
  out.weight_ = v;
  return out;
}

PairwisePotential PairwisePotential::linear(double w) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::Linear;
  out.weight_ = w;
  return out;
}

PairwisePotential PairwisePotential::quadratic(double w) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::Quadratic;
  out.weight_ = w;
  return out;
}

PairwisePotential PairwisePotential::truncated_linear(double w, double tau) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::TruncatedLinear;
  out.weight_ = w;
  out.truncation_ = tau;
  return out;
}

PairwisePotential PairwisePotential::truncated_quadratic(double w, double tau) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::TruncatedQuadratic;
  out.weight_ = w;
  out.truncation_ = tau;
  return out;
}

PairwisePotential PairwisePotential::general_table(std::vector<double> table) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::GeneralTable;
  out.table_ = std::move(table);
  return out;
}

PairwisePotential PairwisePotential::edge_tables(std::vector<double> tables) {
  PairwisePotential out;
  out.family_ = PairwiseFamily::EdgeTables;
  out.table_ = std::move(tables);
  return out;
}

PairwisePotential PairwisePotential::with_scales(std::vector<double> scales) const {
  PairwisePotential out = *this;
  out.scales_ = std::move(scales);
  return out;
}

double PairwisePotential::base(Label a, Label b) const {
  const double d = std::abs(static_cast<double>(a) - static_cast<double>(b));
  switch (family_) {
    case PairwiseFamily::Potts: return a == b ? 0.0 : weight_;
    case PairwiseFamily::Linear: return weight_ * d;
    case PairwiseFamily::Quadratic: return weight_ * d * d;
    case PairwiseFamily::TruncatedLinear: return weight_ * std::min(d, truncation_);
    case PairwiseFamily::TruncatedQuadratic: return weight_ * std::min(d * d, truncation_);
    case PairwiseFamily::GeneralTable:
    case PairwiseFamily::EdgeTables: break;
  }
  throw ModelError(std::string("base() is undefined for the ") + to_string(family_) + " family");
}

EnergyModel::EnergyModel(GridDims dims, int num_labels, std::vector<double> unary,
                         PairwisePotential pairwise)
    : dims_(dims), num_labels_(num_labels), unary_(std::move(unary)), pairwise_(std::move(pairwise)) {
  if (dims_.rows < 1 || dims_.cols < 1) throw ModelError("empty grid");
  if (num_labels_ < 1) throw ModelError("need at least one label");
  const std::size_t K = static_cast<std::size_t>(num_labels_);
  const std::size_t E = static_cast<std::size_t>(dims_.num_edges());
  if (unary_.size() != static_cast<std::size_t>(dims_.size()) * K) {
    throw ModelError("unary field has " + std::to_string(unary_.size()) + " entries, expected " +
                     std::to_string(static_cast<std::size_t>(dims_.size()) * K));
  }
  for (double u : unary_) {
    if (std::isnan(u) || u == -kInfinity) throw ModelError("unary costs must be finite or +inf");
  }

  switch (pairwise_.family()) {
    case PairwiseFamily::GeneralTable:
      if (pairwise_.table().size() != K * K) throw ModelError("general table must be K x K");
      dense_ = pairwise_.table();
      break;
    case PairwiseFamily::EdgeTables:
      if (pairwise_.table().size() != E * K * K) {
        throw ModelError("edge tables must hold one K x K table per edge");
      }
      edge_tables_ = pairwise_.table();
      break;
    default:
      if (!std::isfinite(pairwise_.weight()) || !std::isfinite(pairwise_.truncation())) {
        throw ModelError("pairwise parameters must be finite");
      }
      dense_.resize(K * K);
      for (int a = 0; a < num_labels_; ++a)
        for (int b = 0; b < num_labels_; ++b) dense_[a * K + b] = pairwise_.base(a, b);
  }
  for (double v : dense_)
    if (!std::isfinite(v)) throw ModelError("pairwise costs must be finite");
  for (double v : edge_tables_)
    if (!std::isfinite(v)) throw ModelError("pairwise costs must be finite");

  if (pairwise_.scales().empty()) {
    scale_.assign(E, 1.0);
  } else {
    if (pairwise_.scales().size() != E) {
      throw ModelError("per-edge scales have " + std::to_string(pairwise_.scales().size()) +
                       " entries, expected " + std::to_string(E));
    }
    scale_ = pairwise_.scales();
    for (double s : scale_)
      if (!std::isfinite(s)) throw ModelError("edge scales must be finite");
  }
}

EnergyModel EnergyModel::with_unary_offset(double offset) const {
  std::vector<double> shifted = unary_;
  for (double& u : shifted) u += offset;
  return EnergyModel(dims_, num_labels_, std::move(shifted), pairwise_);
}

Labeling::Labeling(GridDims d, std::vector<Label> l) : dims(d), labels(std::move(l)) {
  if (labels.size() != static_cast<std::size_t>(dims.size())) {
    throw ModelError("labeling size does not match grid");
  }
}

Labeling Labeling::from_column_major(GridDims d, std::span<const Label> values) {
  if (values.size() != static_cast<std::size_t>(d.size())) {
    throw ModelError("labeling size does not match grid");
  }
  Labeling f(d, 0);
  std::size_t i = 0;
  for (int k = 0; k < d.cols; ++k)
    for (int r = 0; r < d.rows; ++r) f[d.pixel(r, k)] = values[i++];
  return f;
}

void check_labeling(const EnergyModel& model, const Labeling& f) {
  if (!(f.dims == model.dims()) || f.labels.size() != static_cast<std::size_t>(model.dims().size())) {
    throw ModelError("labeling dimensions do not match the model");
  }
  for (Label l : f.labels) {
    if (l < 0 || l >= model.num_labels()) {
      throw ModelError("label " + std::to_string(l) + " outside 0.." +
                       std::to_string(model.num_labels() - 1));
    }
  }
}

double energy(const EnergyModel& model, const Labeling& f) {
  check_labeling(model, f);
  const GridDims& d = model.dims();
  std::vector<double> row_total(static_cast<std::size_t>(d.rows), 0.0);

#pragma omp parallel for schedule(static)
  for (int r = 0; r < d.rows; ++r) {
    double s = 0.0;
    for (int k = 0; k < d.cols; ++k) {
      const int p = d.pixel(r, k);
      s += model.unary(p, f[p]);
      if (k + 1 < d.cols) s += model.pair(d.horizontal_edge(r, k), f[p], f[p + 1]);
      if (r + 1 < d.rows) s += model.pair(d.vertical_edge(r, k), f[p], f[p + d.cols]);
    }
    row_total[r] = s;
  }

  double total = 0.0;
  for (double s : row_total) total += s;
  return total;
}

double restricted_energy(const EnergyModel& model, const Labeling& f, std::span<const int> pixels,
                         std::span<const Edge> edges) {
  check_labeling(model, f);
  const GridDims& d = model.dims();
  double total = 0.0;
  for (int p : pixels) {
    if (p < 0 || p >= d.size()) throw ModelError("pixel " + std::to_string(p) + " outside the grid");
    total += model.unary(p, f[p]);
  }
  for (const Edge& e : edges) {
    const auto id = d.edge_id(e.p, e.q);
    if (!id) {
      throw ModelError("(" + std::to_string(e.p) + "," + std::to_string(e.q) +
                       ") is not a neighbour pair");
    }
    const Edge canonical = d.edge(*id);
    total += model.pair(*id, f[canonical.p], f[canonical.q]);
  }
  return total;
}

double kappa(const EnergyModel& model, KappaMode mode) {
  const int K = model.num_labels();
  if (K < 2) throw ModelError("kappa needs at least two labels");
  double global_max = -kInfinity;
  double global_min = kInfinity;
  double worst = 1.0;
  for (int e = 0; e < model.dims().num_edges(); ++e) {
    double hi = -kInfinity;
    double lo = kInfinity;
    for (Label a = 0; a < K; ++a) {
      for (Label b = 0; b < K; ++b) {
        if (a == b) continue;
        const double v = model.pair(e, a, b);
        if (!(v > 0.0)) {
          throw ModelError("off-diagonal pairwise cost " + std::to_string(v) + " on edge " +
                           std::to_string(e) + " is not strictly positive");
        }
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
    worst = std::max(worst, hi / lo);
    global_max = std::max(global_max, hi);
    global_min = std::min(global_min, lo);
  }
  if (model.dims().num_edges() == 0) return 1.0;
  return mode == KappaMode::EdgeWise ? worst : global_max / global_min;
}

EnergyModel transpose(const EnergyModel& model) {
  const GridDims d = model.dims();
  const GridDims t = d.transposed();
  const int K = model.num_labels();
  const std::size_t KK = static_cast<std::size_t>(K) * K;

  std::vector<double> unary(model.unary_costs().size());
  for (int r = 0; r < d.rows; ++r)
    for (int k = 0; k < d.cols; ++k)
      std::copy_n(model.unary_costs().begin() + static_cast<std::ptrdiff_t>(d.pixel(r, k)) * K, K,
                  unary.begin() + static_cast<std::ptrdiff_t>(t.pixel(k, r)) * K);

  // Map every edge id of d to its image in t.
  std::vector<int> image(static_cast<std::size_t>(d.num_edges()));
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    const int tp = t.pixel(d.col_of(pq.p), d.row_of(pq.p));
    const int tq = t.pixel(d.col_of(pq.q), d.row_of(pq.q));
    image[e] = *t.edge_id(tp, tq);
  }

  const PairwisePotential& pw = model.pairwise();
  std::vector<double> scales;
  if (!pw.scales().empty()) {
    scales.resize(pw.scales().size());
    for (int e = 0; e < d.num_edges(); ++e) scales[image[e]] = pw.scales()[e];
  }
  PairwisePotential moved = pw;
  if (pw.family() == PairwiseFamily::EdgeTables) {
    std::vector<double> tables(pw.table().size());
    for (int e = 0; e < d.num_edges(); ++e)
      std::copy_n(pw.table().begin() + static_cast<std::ptrdiff_t>(e * KK), KK,
                  tables.begin() + static_cast<std::ptrdiff_t>(image[e] * KK));
    moved = PairwisePotential::edge_tables(std::move(tables));
  }
  return EnergyModel(t, K, std::move(unary), moved.with_scales(std::move(scales)));
}

Labeling transpose(const Labeling& f) {
  const GridDims t = f.dims.transposed();
  Labeling out(t, 0);
  for (int r = 0; r < f.dims.rows; ++r)
    for (int k = 0; k < f.dims.cols; ++k) out[t.pixel(k, r)] = f.at(r, k);
  return out;
}

}  // namespace tiered
