#include "tiered/tiered_dp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tiered {

DenseAugmentedEnergy::DenseAugmentedEnergy(GridDims dims, int num_middle)
    : dims_(dims), num_middle_(num_middle), alphabet_(num_middle + 2) {
  if (num_middle < 1) throw ModelError("need at least one middle label");
  const std::size_t A = static_cast<std::size_t>(alphabet_);
  unary_.assign(static_cast<std::size_t>(dims_.size()) * A, 0.0);
  vertical_.assign(static_cast<std::size_t>(dims_.num_vertical_edges()) * A * A, 0.0);
  horizontal_.assign(static_cast<std::size_t>(dims_.num_horizontal_edges()) * A * A, 0.0);
}

StateSpace::StateSpace(int rows, int num_middle) : rows_(rows), num_middle_(num_middle) {
  offset_.resize(static_cast<std::size_t>(rows_) + 1);
  int next = 0;
  for (int i = 0; i <= rows_; ++i) {
    offset_[i] = next;
    states_.push_back({i, i, 0});
    for (int j = i + 1; j <= rows_; ++j)
      for (int l = 0; l < num_middle_; ++l) states_.push_back({i, j, l});
    next = static_cast<int>(states_.size());
  }
  size_ = next;
}

bool StateSpace::valid(ColumnState s) const {
  if (s.i < 0 || s.i > s.j || s.j > rows_) return false;
  if (s.i == s.j) return s.l == 0;
  return s.l >= 0 && s.l < num_middle_;
}

ChainEnergy::ChainEnergy(const AugmentedEnergy& energy)
    : rows_(energy.dims().rows),
      cols_(energy.dims().cols),
      num_middle_(energy.num_middle_labels()),
      alphabet_(num_middle_ + 2),
      space_(rows_, num_middle_) {
  const int m = rows_;
  const int n = cols_;
  const int A = alphabet_;
  const std::size_t slots = static_cast<std::size_t>(n) * A * (m + 1);
  unary_finite_.assign(slots, 0.0);
  unary_infinite_.assign(slots, 0);
  same_vertical_.assign(slots, 0.0);
  top_to_.assign(static_cast<std::size_t>(n) * m * A, 0.0);
  to_bottom_.assign(static_cast<std::size_t>(n) * m * A, 0.0);
  hprefix_.assign(static_cast<std::size_t>(std::max(n - 1, 0)) * A * A * (m + 1), 0.0);

  const int T = top_label(num_middle_);
  const int B = bottom_label(num_middle_);

#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    for (int a = 0; a < A; ++a) {
      double* fin = &unary_finite_[column_slot(k, a)];
      int* inf = &unary_infinite_[column_slot(k, a)];
      double* sv = &same_vertical_[column_slot(k, a)];
      for (int r = 0; r < m; ++r) {
        const double u = energy.unary(r, k, a);
        const bool is_inf = std::isinf(u) && u > 0;
        fin[r + 1] = fin[r] + (is_inf ? 0.0 : u);
        inf[r + 1] = inf[r] + (is_inf ? 1 : 0);
        if (r + 1 < m) {
          const double v = energy.vertical(r, k, a, a);
          sv[r + 1] = sv[r] + v;
        }
      }
    }
    for (int r = 0; r + 1 < m; ++r) {
      for (int b = 0; b < A; ++b) {
        top_to_[(static_cast<std::size_t>(k) * m + r) * A + b] = energy.vertical(r, k, T, b);
        to_bottom_[(static_cast<std::size_t>(k) * m + r) * A + b] = energy.vertical(r, k, b, B);
      }
    }
    if (k + 1 < n) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < A; ++b) {
          double* h = &hprefix_[((static_cast<std::size_t>(k) * A + a) * A + b) * (m + 1)];
          for (int r = 0; r < m; ++r) h[r + 1] = h[r] + energy.horizontal(r, k, a, b);
        }
      }
    }
  }

  // Pairwise terms feed prefix-sum differences; an infinity there would turn
  // into inf - inf.
  auto finite = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
  };
  if (!finite(same_vertical_) || !finite(top_to_) || !finite(to_bottom_) || !finite(hprefix_)) {
    throw ModelError("augmented pairwise costs must be finite");
  }
}

double ChainEnergy::unary_band(int k, int a, int from, int to) const {
  const std::size_t slot = column_slot(k, a);
  if (unary_infinite_[slot + to] != unary_infinite_[slot + from]) return kInfinity;
  return unary_finite_[slot + to] - unary_finite_[slot + from];
}

double ChainEnergy::column_cost(int k, ColumnState s) const {
  const int m = rows_;
  const int T = top_label(num_middle_);
  const int B = bottom_label(num_middle_);
  const int A = alphabet_;

  double u = unary_band(k, T, 0, s.i) + unary_band(k, s.l, s.i, s.j) + unary_band(k, B, s.j, m);

  const double* svT = &same_vertical_[column_slot(k, T)];
  const double* svL = &same_vertical_[column_slot(k, s.l)];
  const double* svB = &same_vertical_[column_slot(k, B)];
  if (s.i >= 2) u += svT[s.i - 1];
  if (s.j - s.i >= 2) u += svL[s.j - 1] - svL[s.i];
  if (m - s.j >= 2) u += svB[m - 1] - svB[s.j];

  if (s.i > 0 && s.i < m) {
    u += top_to_[(static_cast<std::size_t>(k) * m + (s.i - 1)) * A + (s.i < s.j ? s.l : B)];
  }
  if (s.i < s.j && s.j < m) {
    u += to_bottom_[(static_cast<std::size_t>(k) * m + (s.j - 1)) * A + s.l];
  }
  return u;
}

double ChainEnergy::transition_cost(int k, ColumnState left, ColumnState right) const {
  const int T = top_label(num_middle_);
  const int B = bottom_label(num_middle_);
  std::array<int, 6> cuts{0, left.i, left.j, right.i, right.j, rows_};
  std::sort(cuts.begin(), cuts.end());
  auto label_at = [T, B](ColumnState s, int r) { return r < s.i ? T : (r < s.j ? s.l : B); };

  double h = 0.0;
  for (int t = 0; t + 1 < 6; ++t) {
    const int from = cuts[t];
    const int to = cuts[t + 1];
    if (from == to) continue;
    h += horizontal_band(k, label_at(left, from), label_at(right, from), from, to);
  }
  return h;
}

namespace {

TieredResult backtrack(const ChainEnergy& chain, const std::vector<double>& last,
                       const std::vector<int>& back) {
  const StateSpace& space = chain.states();
  const int S = space.size();
  const int n = chain.cols();
  int arg = 0;
  for (int s = 1; s < S; ++s)
    if (last[s] < last[arg]) arg = s;

  TieredResult result;
  result.energy = last[arg];
  result.solution.states.resize(static_cast<std::size_t>(n));
  for (int k = n - 1; k >= 0; --k) {
    result.solution.states[k] = space.state(arg);
    if (k > 0) arg = back[static_cast<std::size_t>(k - 1) * S + arg];
  }
  return result;
}

std::vector<double> first_column(const ChainEnergy& chain) {
  const StateSpace& space = chain.states();
  std::vector<double> cost(static_cast<std::size_t>(space.size()));
#pragma omp parallel for schedule(static)
  for (int s = 0; s < space.size(); ++s) cost[s] = chain.column_cost(0, space.state(s));
  return cost;
}

constexpr int kNoState = std::numeric_limits<int>::max();

struct Candidate {
  double value = kInfinity;
  int index = kNoState;
};

inline bool better(const Candidate& a, const Candidate& b) {
  return a.value < b.value || (a.value == b.value && a.index < b.index);
}

inline void keep_better(Candidate& acc, const Candidate& c) {
  if (better(c, acc)) acc = c;
}

// Per-thread buffers for the transition of one current label.
struct Scratch {
  explicit Scratch(int m)
      : side(m + 1),
        best(static_cast<std::size_t>(side) * side),
        r2(best.size()),
        r3(best.size()),
        r4(best.size()),
        r5(best.size()),
        r1(side),
        r6(side),
        w2(side),
        w3(side),
        v5(side) {
    for (auto* f : {&fa, &fb, &fc, &fd}) f->assign(6 * static_cast<std::size_t>(side), 0.0);
  }

  int side;
  std::vector<Candidate> best, r2, r3, r4, r5;
  std::vector<Candidate> r1, r6, w2, w3, v5;
  // fa/fb: predecessor break-row terms, fc/fd: current break-row terms; six
  // cases of side entries each.
  std::vector<double> fa, fb, fc, fd;
};

// Folds into s.best, for every current (i, j), the best predecessor with
// label lp. prev_value/prev_index are the predecessor table for label lp laid
// out as [i' * (m + 1) + j'].
void relax_label_pair(const ChainEnergy& chain, int k, int lp, int l, const double* prev_value,
                      const int* prev_index, Scratch& s) {
  const int m = chain.rows();
  const int side = s.side;
  const int K = chain.num_middle();
  const int T = top_label(K);
  const int B = bottom_label(K);
  const int left = k - 1;

  const double* TT = chain.horizontal_prefix(left, T, T);
  const double* PT = chain.horizontal_prefix(left, lp, T);
  const double* BT = chain.horizontal_prefix(left, B, T);
  const double* BL = chain.horizontal_prefix(left, B, l);
  const double* BB = chain.horizontal_prefix(left, B, B);
  const double* PL = chain.horizontal_prefix(left, lp, l);
  const double* PB = chain.horizontal_prefix(left, lp, B);
  const double* TL = chain.horizontal_prefix(left, T, l);
  const double* TB = chain.horizontal_prefix(left, T, B);

  // Each breakpoint x contributes P_before(x) - P_after(x), where "before"
  // and "after" are the label pairs of the two segments it separates.
  double* a[6];
  double* b[6];
  double* c[6];
  double* d[6];
  for (int t = 0; t < 6; ++t) {
    a[t] = &s.fa[static_cast<std::size_t>(t) * side];
    b[t] = &s.fb[static_cast<std::size_t>(t) * side];
    c[t] = &s.fc[static_cast<std::size_t>(t) * side];
    d[t] = &s.fd[static_cast<std::size_t>(t) * side];
  }
  for (int x = 0; x <= m; ++x) {
    // i' <= j' <= i <= j : TT | PT | BT | BL | BB
    a[0][x] = TT[x] - PT[x]; b[0][x] = PT[x] - BT[x]; c[0][x] = BT[x] - BL[x]; d[0][x] = BL[x] - BB[x];
    // i' <= i <= j' <= j : TT | PT | PL | BL | BB
    a[1][x] = TT[x] - PT[x]; b[1][x] = PL[x] - BL[x]; c[1][x] = PT[x] - PL[x]; d[1][x] = BL[x] - BB[x];
    // i' <= i <= j <= j' : TT | PT | PL | PB | BB
    a[2][x] = TT[x] - PT[x]; b[2][x] = PB[x] - BB[x]; c[2][x] = PT[x] - PL[x]; d[2][x] = PL[x] - PB[x];
    // i <= i' <= j' <= j : TT | TL | PL | BL | BB
    a[3][x] = TL[x] - PL[x]; b[3][x] = PL[x] - BL[x]; c[3][x] = TT[x] - TL[x]; d[3][x] = BL[x] - BB[x];
    // i <= i' <= j <= j' : TT | TL | PL | PB | BB
    a[4][x] = TL[x] - PL[x]; b[4][x] = PB[x] - BB[x]; c[4][x] = TT[x] - TL[x]; d[4][x] = PL[x] - PB[x];
    // i <= j <= i' <= j' : TT | TL | TB | PB | BB
    a[5][x] = TB[x] - PB[x]; b[5][x] = PB[x] - BB[x]; c[5][x] = TT[x] - TL[x]; d[5][x] = TL[x] - TB[x];
  }

  auto at = [side](int i, int j) { return static_cast<std::size_t>(i) * side + j; };
  auto g = [&](int t, int ip, int jp) {
    const std::size_t q = at(ip, jp);
    return Candidate{prev_value[q] + a[t][ip] + b[t][jp], prev_index[q]};
  };

  // Case 0: best over j' <= i of min over i' <= j'.
  for (int jp = 0; jp <= m; ++jp) {
    Candidate row;
    for (int ip = 0; ip <= jp; ++ip) keep_better(row, g(0, ip, jp));
    s.r1[jp] = row;
    if (jp > 0) keep_better(s.r1[jp], s.r1[jp - 1]);
  }

  // Case 5: best over i' >= j of min over j' >= i'.
  for (int ip = m; ip >= 0; --ip) {
    Candidate col;
    for (int jp = ip; jp <= m; ++jp) keep_better(col, g(5, ip, jp));
    s.r6[ip] = col;
    if (ip < m) keep_better(s.r6[ip], s.r6[ip + 1]);
  }

  // Cases 1 and 2: columns accumulate i' <= i; then a forward (j' in [i, j])
  // or backward (j' >= j) running minimum.
  std::fill(s.w2.begin(), s.w2.end(), Candidate{});
  std::fill(s.w3.begin(), s.w3.end(), Candidate{});
  for (int i = 0; i <= m; ++i) {
    for (int jp = i; jp <= m; ++jp) {
      keep_better(s.w2[jp], g(1, i, jp));
      keep_better(s.w3[jp], g(2, i, jp));
    }
    Candidate run;
    for (int j = i; j <= m; ++j) {
      keep_better(run, s.w2[j]);
      s.r2[at(i, j)] = run;
    }
    run = Candidate{};
    for (int j = m; j >= i; --j) {
      keep_better(run, s.w3[j]);
      s.r3[at(i, j)] = run;
    }
  }

  // Case 3: predecessor interval nested in [i, j].
  for (int i = m; i >= 0; --i) {
    for (int j = i; j <= m; ++j) {
      Candidate v = g(3, i, j);
      if (j > i) {
        keep_better(v, s.r4[at(i, j - 1)]);
        keep_better(v, s.r4[at(i + 1, j)]);
      }
      s.r4[at(i, j)] = v;
    }
  }

  // Case 4: rows accumulate j' >= j; then a running minimum over i' in [i, j].
  std::fill(s.v5.begin(), s.v5.end(), Candidate{});
  for (int j = m; j >= 0; --j) {
    for (int ip = 0; ip <= j; ++ip) keep_better(s.v5[ip], g(4, ip, j));
    Candidate run;
    for (int i = j; i >= 0; --i) {
      keep_better(run, s.v5[i]);
      s.r5[at(i, j)] = run;
    }
  }

  for (int i = 0; i <= m; ++i) {
    for (int j = (l == 0 ? i : i + 1); j <= m; ++j) {
      const std::size_t q = at(i, j);
      Candidate& acc = s.best[q];
      const Candidate cases[6] = {s.r1[i], s.r2[q], s.r3[q], s.r4[q], s.r5[q], s.r6[j]};
      for (int t = 0; t < 6; ++t) {
        keep_better(acc, Candidate{cases[t].value + c[t][i] + d[t][j], cases[t].index});
      }
    }
  }
}

}  // namespace

TieredResult solve_naive(const ChainEnergy& chain) {
  const StateSpace& space = chain.states();
  const int S = space.size();
  const int n = chain.cols();
  std::vector<double> cost = first_column(chain);
  std::vector<double> next(static_cast<std::size_t>(S));
  std::vector<int> back(static_cast<std::size_t>(std::max(n - 1, 0)) * S);

  for (int k = 1; k < n; ++k) {
    for (int s = 0; s < S; ++s) {
      const ColumnState cur = space.state(s);
      double best = kInfinity;
      int arg = -1;
      for (int p = 0; p < S; ++p) {
        const double v = cost[p] + chain.transition_cost(k - 1, space.state(p), cur);
        if (arg < 0 || v < best) {
          best = v;
          arg = p;
        }
      }
      next[s] = chain.column_cost(k, cur) + best;
      back[static_cast<std::size_t>(k - 1) * S + s] = arg;
    }
    cost.swap(next);
  }
  return backtrack(chain, cost, back);
}

TieredResult solve_fast(const ChainEnergy& chain) {
  const StateSpace& space = chain.states();
  const int S = space.size();
  const int n = chain.cols();
  const int m = chain.rows();
  const int K = chain.num_middle();
  const int side = m + 1;
  const std::size_t table = static_cast<std::size_t>(side) * side;

  std::vector<double> cost = first_column(chain);
  std::vector<double> next(static_cast<std::size_t>(S));
  std::vector<int> back(static_cast<std::size_t>(std::max(n - 1, 0)) * S);
  std::vector<double> prev_value(table * K);
  std::vector<int> prev_index(table * K);

  for (int k = 1; k < n; ++k) {
    std::fill(prev_value.begin(), prev_value.end(), kInfinity);
    std::fill(prev_index.begin(), prev_index.end(), kNoState);
    for (int s = 0; s < S; ++s) {
      const ColumnState st = space.state(s);
      const std::size_t q = st.l * table + static_cast<std::size_t>(st.i) * side + st.j;
      prev_value[q] = cost[s];
      prev_index[q] = s;
    }

#pragma omp parallel
    {
      Scratch scratch(m);
#pragma omp for schedule(dynamic)
      for (int l = 0; l < K; ++l) {
        std::fill(scratch.best.begin(), scratch.best.end(), Candidate{});
        for (int lp = 0; lp < K; ++lp) {
          relax_label_pair(chain, k, lp, l, &prev_value[lp * table], &prev_index[lp * table], scratch);
        }
        for (int i = 0; i <= m; ++i) {
          for (int j = (l == 0 ? i : i + 1); j <= m; ++j) {
            const ColumnState cur{i, j, l};
            const int s = space.index(cur);
            int arg = scratch.best[static_cast<std::size_t>(i) * side + j].index;
            if (arg == kNoState) arg = 0;
            const double v = cost[arg] + chain.transition_cost(k - 1, space.state(arg), cur);
            next[s] = chain.column_cost(k, cur) + v;
            back[static_cast<std::size_t>(k - 1) * S + s] = arg;
          }
        }
      }
    }
    cost.swap(next);
  }
  return backtrack(chain, cost, back);
}

std::vector<int> decode(const TieredSolution& solution, const GridDims& dims, int num_middle) {
  if (solution.states.size() != static_cast<std::size_t>(dims.cols)) {
    throw ModelError("solution has " + std::to_string(solution.states.size()) + " columns, grid has " +
                     std::to_string(dims.cols));
  }
  const int T = top_label(num_middle);
  const int B = bottom_label(num_middle);
  std::vector<int> out(static_cast<std::size_t>(dims.size()));
  for (int k = 0; k < dims.cols; ++k) {
    const ColumnState s = solution.states[k];
    for (int r = 0; r < dims.rows; ++r) out[dims.pixel(r, k)] = r < s.i ? T : (r < s.j ? s.l : B);
  }
  return out;
}

bool check_tiered(std::span<const int> augmented, const GridDims& dims, int num_middle) {
  if (augmented.size() != static_cast<std::size_t>(dims.size())) return false;
  const int T = top_label(num_middle);
  const int B = bottom_label(num_middle);
  for (int k = 0; k < dims.cols; ++k) {
    int phase = 0;  // 0: top band, 1: middle band, 2: bottom band
    int middle = -1;
    for (int r = 0; r < dims.rows; ++r) {
      const int v = augmented[dims.pixel(r, k)];
      if (v == T) {
        if (phase != 0) return false;
      } else if (v == B) {
        phase = 2;
      } else if (v >= 0 && v < num_middle) {
        if (phase == 2) return false;
        if (phase == 1 && v != middle) return false;
        phase = 1;
        middle = v;
      } else {
        return false;
      }
    }
  }
  return true;
}

double augmented_energy(const AugmentedEnergy& energy, std::span<const int> augmented) {
  const GridDims d = energy.dims();
  if (augmented.size() != static_cast<std::size_t>(d.size())) {
    throw ModelError("augmented labeling size does not match grid");
  }
  double total = 0.0;
  for (int r = 0; r < d.rows; ++r) {
    for (int k = 0; k < d.cols; ++k) {
      const int p = d.pixel(r, k);
      total += energy.unary(r, k, augmented[p]);
      if (k + 1 < d.cols) total += energy.horizontal(r, k, augmented[p], augmented[p + 1]);
      if (r + 1 < d.rows) total += energy.vertical(r, k, augmented[p], augmented[p + d.cols]);
    }
  }
  return total;
}

}  // namespace tiered
