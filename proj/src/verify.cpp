#include "tiered/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tiered {

namespace {

// Component id per pixel (4-connected, equal labels), numbered in order of
// first pixel.
std::vector<int> component_ids(const Labeling& f, int* count) {
  const GridDims& d = f.dims;
  std::vector<int> id(static_cast<std::size_t>(d.size()), -1);
  std::vector<int> stack;
  int next = 0;
  for (int seed = 0; seed < d.size(); ++seed) {
    if (id[seed] >= 0) continue;
    id[seed] = next;
    stack.push_back(seed);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int r = d.row_of(p);
      const int k = d.col_of(p);
      const int nbr[4] = {k > 0 ? p - 1 : -1, k + 1 < d.cols ? p + 1 : -1, r > 0 ? p - d.cols : -1,
                          r + 1 < d.rows ? p + d.cols : -1};
      for (int q : nbr) {
        if (q >= 0 && id[q] < 0 && f[q] == f[p]) {
          id[q] = next;
          stack.push_back(q);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return id;
}

bool columns_contiguous(const GridDims& d, const std::vector<int>& id, std::vector<int>& seen_in_column) {
  for (int k = 0; k < d.cols; ++k) {
    // seen_in_column[c] == k once component c has appeared in column k.
    int previous = -1;
    for (int r = 0; r < d.rows; ++r) {
      const int c = id[d.pixel(r, k)];
      if (c == previous) continue;
      if (seen_in_column[c] == k) return false;
      seen_in_column[c] = k;
      previous = c;
    }
  }
  return true;
}

double direct_energy(const EnergyModel& model, const std::vector<Label>& f) {
  const GridDims& d = model.dims();
  double total = 0.0;
  for (int r = 0; r < d.rows; ++r) {
    for (int k = 0; k < d.cols; ++k) {
      const int p = d.pixel(r, k);
      total += model.unary(p, f[p]);
      if (k + 1 < d.cols) total += model.pair(d.horizontal_edge(r, k), f[p], f[p + 1]);
      if (r + 1 < d.rows) total += model.pair(d.vertical_edge(r, k), f[p], f[p + d.cols]);
    }
  }
  return total;
}

template <typename Accept>
OptimumResult enumerate(const EnergyModel& model, Accept accept) {
  const GridDims& d = model.dims();
  const int K = model.num_labels();
  const int P = d.size();
  std::uint64_t total = 1;
  for (int p = 0; p < P; ++p) {
    if (total > kEnumerationBudget / static_cast<std::uint64_t>(K)) {
      throw ModelError("enumeration budget exceeded: " + std::to_string(K) + "^" + std::to_string(P) +
                       " labelings");
    }
    total *= static_cast<std::uint64_t>(K);
  }

  double best_value = kInfinity;
  std::uint64_t best_code = total;

#pragma omp parallel
  {
    double local_value = kInfinity;
    std::uint64_t local_code = total;
    std::vector<Label> f(static_cast<std::size_t>(P));
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(total); ++c) {
      std::uint64_t code = static_cast<std::uint64_t>(c);
      for (int p = P - 1; p >= 0; --p) {
        f[p] = static_cast<Label>(code % K);
        code /= K;
      }
      if (!accept(f)) continue;
      const double e = direct_energy(model, f);
      if (local_code == total || e < local_value) {
        local_value = e;
        local_code = static_cast<std::uint64_t>(c);
      }
    }
#pragma omp critical
    {
      if (local_code != total &&
          (best_code == total || local_value < best_value ||
           (local_value == best_value && local_code < best_code))) {
        best_value = local_value;
        best_code = local_code;
      }
    }
  }

  if (best_code == total) throw ModelError("no labeling satisfied the enumeration filter");
  OptimumResult out;
  out.labeling = Labeling(d, 0);
  std::uint64_t code = best_code;
  for (int p = P - 1; p >= 0; --p) {
    out.labeling[p] = static_cast<Label>(code % K);
    code /= K;
  }
  out.energy = best_value;
  return out;
}

}  // namespace

std::vector<Region> regions(const Labeling& f) {
  const GridDims& d = f.dims;
  int count = 0;
  const std::vector<int> id = component_ids(f, &count);
  std::vector<Region> out(static_cast<std::size_t>(count));
  for (int p = 0; p < d.size(); ++p) {
    out[id[p]].label = f[p];
    out[id[p]].pixels.push_back(p);
  }
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    if (id[pq.p] == id[pq.q]) {
      out[id[pq.p]].interior_edges.push_back(pq);
    } else {
      out[id[pq.p]].boundary_edges.push_back(pq);
      out[id[pq.q]].boundary_edges.push_back(pq);
    }
  }
  return out;
}

std::vector<Edge> shared_boundary(const Labeling& f) {
  const GridDims& d = f.dims;
  const std::vector<int> id = component_ids(f, nullptr);
  std::vector<Edge> out;
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    if (id[pq.p] != id[pq.q]) out.push_back(pq);
  }
  return out;
}

bool is_tiered_consistent(const Labeling& f) {
  int count = 0;
  const std::vector<int> id = component_ids(f, &count);
  std::vector<int> seen(static_cast<std::size_t>(count), -1);
  return columns_contiguous(f.dims, id, seen);
}

OptimumResult brute_optimum(const EnergyModel& model) {
  return enumerate(model, [](const std::vector<Label>&) { return true; });
}

OptimumResult brute_tiered_optimum(const EnergyModel& model) {
  const GridDims d = model.dims();
  return enumerate(model, [d](const std::vector<Label>& f) { return is_tiered_consistent(Labeling(d, f)); });
}

std::string BoundReport::to_key_value() const {
  std::ostringstream out;
  out.precision(17);
  out << "energy_local=" << energy_local << '\n'
      << "energy_tiered_optimum=" << energy_tiered << '\n'
      << "energy_global_optimum=" << energy_global << '\n'
      << "kappa=" << kappa << '\n'
      << "kappa_mode=" << (kappa_mode == KappaMode::EdgeWise ? "edge-wise" : "global") << '\n'
      << "unary_shift=" << unary_shift << '\n'
      << "bound=" << 2.0 * kappa * energy_tiered << '\n'
      << "bound_holds=" << (bound_holds ? "true" : "false") << '\n'
      << "optimum_tiered_consistent=" << (optimum_tiered_consistent ? "true" : "false") << '\n'
      << "global_bound_holds=" << (global_bound_holds ? "true" : "false") << '\n';
  return out.str();
}

BoundReport check_bound(const EnergyModel& model, const Labeling& f_hat, KappaMode mode) {
  check_labeling(model, f_hat);
  const int K = model.num_labels();
  if (K < 2) throw ModelError("bound check needs at least two labels");
  for (int e = 0; e < model.dims().num_edges(); ++e) {
    for (Label a = 0; a < K; ++a) {
      for (Label b = 0; b < K; ++b) {
        const double v = model.pair(e, a, b);
        if (a == b && v != 0.0) {
          throw ModelError("pairwise cost V(" + std::to_string(a) + "," + std::to_string(b) + ") on edge " +
                           std::to_string(e) + " must be zero on the diagonal");
        }
        if (a != b && !(v > 0.0)) {
          throw ModelError("pairwise cost V(" + std::to_string(a) + "," + std::to_string(b) + ") on edge " +
                           std::to_string(e) + " must be strictly positive off the diagonal");
        }
      }
    }
  }

  BoundReport report;
  report.kappa_mode = mode;
  double lowest = kInfinity;
  for (double u : model.unary_costs()) lowest = std::min(lowest, u);
  report.unary_shift = lowest < 0.0 ? -lowest : 0.0;
  const EnergyModel shifted = report.unary_shift > 0.0 ? model.with_unary_offset(report.unary_shift) : model;

  report.energy_local = energy(shifted, f_hat);
  const OptimumResult global = brute_optimum(shifted);
  const OptimumResult tiered = brute_tiered_optimum(shifted);
  report.energy_global = global.energy;
  report.energy_tiered = tiered.energy;
  report.kappa = kappa(shifted, mode);
  report.bound_holds = report.energy_local <= 2.0 * report.kappa * report.energy_tiered;
  report.optimum_tiered_consistent = is_tiered_consistent(global.labeling);
  report.global_bound_holds = report.energy_local <= 2.0 * report.kappa * report.energy_global;
  return report;
}

EnergyModel worst_case_instance(double q, double scale) {
  if (!(q > 1.0)) throw ModelError("worst-case instance needs Q > 1");
  if (!(scale > 0.0)) throw ModelError("scale must be positive");
  const GridDims d(3, 2);
  // 1-based column-major pixel number -> row-major pixel id.
  auto px = [&d](int n) { return d.pixel((n - 1) % 3, (n - 1) / 3); };

  std::vector<double> unary(static_cast<std::size_t>(d.size()) * 2, 0.0);
  unary[px(1) * 2 + 0] = scale * q / 2.0;
  unary[px(3) * 2 + 0] = scale * q / 2.0;
  unary[px(2) * 2 + 1] = scale * 2.0 * q;

  std::vector<double> scales(static_cast<std::size_t>(d.num_edges()), 0.0);
  auto set = [&](int a, int b, double v) { scales[*d.edge_id(px(a), px(b))] = v; };
  const double weak = scale / 3.0;
  const double strong = scale * 2.0 * q;
  set(1, 2, weak);
  set(2, 3, weak);
  set(2, 5, weak);
  set(1, 4, strong);
  set(4, 5, strong);
  set(5, 6, strong);
  set(3, 6, strong);
  return EnergyModel(d, 2, std::move(unary), PairwisePotential::potts(1.0).with_scales(std::move(scales)));
}

}  // namespace tiered
