// Random instance generators and enumeration oracles shared by the test
// binaries. Oracles here deliberately avoid the library's chain/DP code.
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tiered/grid_energy.hpp"
#include "tiered/tiered_dp.hpp"

namespace tiered::testing {

using Rng = std::mt19937_64;

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

enum class FamilyMix { Any, PositiveOffDiagonal };

// Integer-valued random pairwise potential. With PositiveOffDiagonal the
// diagonal is zero and off-diagonal entries are >= 1 on every edge.
inline PairwisePotential random_pairwise(Rng& rng, GridDims d, int K, FamilyMix mix) {
  const int pick = uniform_int(rng, 0, 6);
  const double w = uniform_int(rng, 1, 4);
  PairwisePotential pw = PairwisePotential::potts(w);
  switch (pick) {
    case 0: break;
    case 1: pw = PairwisePotential::linear(w); break;
    case 2: pw = PairwisePotential::quadratic(w); break;
    case 3: pw = PairwisePotential::truncated_linear(w, uniform_int(rng, 1, 3)); break;
    case 4: pw = PairwisePotential::truncated_quadratic(w, uniform_int(rng, 1, 4)); break;
    case 5: {
      std::vector<double> t(static_cast<std::size_t>(K) * K);
      for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b)
          t[a * K + b] = mix == FamilyMix::Any ? uniform_int(rng, -3, 9) : (a == b ? 0 : uniform_int(rng, 1, 9));
      pw = PairwisePotential::general_table(std::move(t));
      break;
    }
    default: {
      const std::size_t KK = static_cast<std::size_t>(K) * K;
      std::vector<double> t(static_cast<std::size_t>(d.num_edges()) * KK);
      for (int e = 0; e < d.num_edges(); ++e)
        for (int a = 0; a < K; ++a)
          for (int b = 0; b < K; ++b)
            t[e * KK + a * K + b] =
                mix == FamilyMix::Any ? uniform_int(rng, 0, 9) : (a == b ? 0 : uniform_int(rng, 1, 9));
      pw = PairwisePotential::edge_tables(std::move(t));
    }
  }
  if (uniform_int(rng, 0, 1) == 1) {
    std::vector<double> s(static_cast<std::size_t>(d.num_edges()));
    for (double& v : s) v = uniform_int(rng, 1, 3);
    pw = pw.with_scales(std::move(s));
  }
  return pw;
}

inline EnergyModel random_model(Rng& rng, GridDims d, int K, FamilyMix mix = FamilyMix::Any, int unary_lo = 0,
                                int unary_hi = 20) {
  std::vector<double> unary(static_cast<std::size_t>(d.size()) * K);
  for (double& u : unary) u = uniform_int(rng, unary_lo, unary_hi);
  return EnergyModel(d, K, std::move(unary), random_pairwise(rng, d, K, mix));
}

inline Labeling random_labeling(Rng& rng, GridDims d, int K) {
  Labeling f(d, 0);
  for (Label& l : f.labels) l = uniform_int(rng, 0, K - 1);
  return f;
}

// Random labeling over the augmented alphabet satisfying the tiered constraints.
inline std::vector<int> random_tiered_move(Rng& rng, GridDims d, int K) {
  std::vector<int> t(static_cast<std::size_t>(d.size()));
  for (int k = 0; k < d.cols; ++k) {
    int i = uniform_int(rng, 0, d.rows);
    int j = uniform_int(rng, 0, d.rows);
    if (i > j) std::swap(i, j);
    const int l = uniform_int(rng, 0, K - 1);
    for (int r = 0; r < d.rows; ++r) t[d.pixel(r, k)] = r < i ? K : (r < j ? l : K + 1);
  }
  return t;
}

inline DenseAugmentedEnergy random_augmented(Rng& rng, GridDims d, int K, int lo = -5, int hi = 9) {
  DenseAugmentedEnergy e(d, K);
  const int A = K + 2;
  for (int r = 0; r < d.rows; ++r) {
    for (int k = 0; k < d.cols; ++k) {
      for (int a = 0; a < A; ++a) {
        e.unary(r, k, a) = uniform_int(rng, lo, hi);
        for (int b = 0; b < A; ++b) {
          if (r + 1 < d.rows) e.vertical(r, k, a, b) = uniform_int(rng, lo, hi);
          if (k + 1 < d.cols) e.horizontal(r, k, a, b) = uniform_int(rng, lo, hi);
        }
      }
    }
  }
  return e;
}

// Column patterns T^a x^b B^c over the augmented alphabet, found by
// filtering all (K+2)^m columns.
inline std::vector<std::vector<int>> tiered_columns(int m, int K) {
  const int A = K + 2;
  std::vector<std::vector<int>> out;
  std::vector<int> col(static_cast<std::size_t>(m), 0);
  long total = 1;
  for (int r = 0; r < m; ++r) total *= A;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int r = m - 1; r >= 0; --r) {
      col[r] = static_cast<int>(c % A);
      c /= A;
    }
    int r = 0;
    while (r < m && col[r] == K) ++r;
    if (r < m && col[r] < K) {
      const int mid = col[r];
      while (r < m && col[r] == mid) ++r;
    }
    while (r < m && col[r] == K + 1) ++r;
    if (r == m) out.push_back(col);
  }
  return out;
}

struct TieredOracle {
  double energy = 0.0;
  std::vector<int> labeling;  // augmented, row-major
};

// Exhaustive minimum over all tiered labelings. Per-column and
// column-pair costs are summed directly from the energy's terms; every tuple
// of column patterns is then scored.
inline TieredOracle brute_tiered_labeling(const AugmentedEnergy& e) {
  const GridDims d = e.dims();
  const int K = e.num_middle_labels();
  const auto cols = tiered_columns(d.rows, K);
  const int C = static_cast<int>(cols.size());

  std::vector<double> own(static_cast<std::size_t>(d.cols) * C);
  for (int k = 0; k < d.cols; ++k) {
    for (int c = 0; c < C; ++c) {
      double s = 0.0;
      for (int r = 0; r < d.rows; ++r) {
        s += e.unary(r, k, cols[c][r]);
        if (r + 1 < d.rows) s += e.vertical(r, k, cols[c][r], cols[c][r + 1]);
      }
      own[static_cast<std::size_t>(k) * C + c] = s;
    }
  }
  std::vector<double> cross(static_cast<std::size_t>(std::max(d.cols - 1, 0)) * C * C);
  for (int k = 0; k + 1 < d.cols; ++k) {
    for (int a = 0; a < C; ++a) {
      for (int b = 0; b < C; ++b) {
        double s = 0.0;
        for (int r = 0; r < d.rows; ++r) s += e.horizontal(r, k, cols[a][r], cols[b][r]);
        cross[(static_cast<std::size_t>(k) * C + a) * C + b] = s;
      }
    }
  }

  std::vector<int> pick(static_cast<std::size_t>(d.cols), 0);
  std::vector<int> best_pick;
  double best = kInfinity;
  bool first = true;
  while (true) {
    double s = 0.0;
    for (int k = 0; k < d.cols; ++k) {
      s += own[static_cast<std::size_t>(k) * C + pick[k]];
      if (k + 1 < d.cols) s += cross[(static_cast<std::size_t>(k) * C + pick[k]) * C + pick[k + 1]];
    }
    if (first || s < best) {
      best = s;
      best_pick = pick;
      first = false;
    }
    int k = d.cols - 1;
    while (k >= 0 && ++pick[k] == C) pick[k--] = 0;
    if (k < 0) break;
  }

  TieredOracle out;
  out.energy = best;
  out.labeling.resize(static_cast<std::size_t>(d.size()));
  for (int k = 0; k < d.cols; ++k)
    for (int r = 0; r < d.rows; ++r) out.labeling[d.pixel(r, k)] = cols[best_pick[k]][r];
  return out;
}

// Straight double loop over the grid, independent of tiered::energy.
inline double direct_energy(const EnergyModel& m, const Labeling& f) {
  const GridDims& d = m.dims();
  double s = 0.0;
  for (int p = 0; p < d.size(); ++p) s += m.unary(p, f[p]);
  for (int e = 0; e < d.num_edges(); ++e) {
    const Edge pq = d.edge(e);
    s += m.pair(e, f[pq.p], f[pq.q]);
  }
  return s;
}

}  // namespace tiered::testing
