#include "fluorep/statesim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fluorep {

namespace {

// Basis layout: mixed-radix little-endian over modes, mode = 2*node + level,
// digit base n_max + 1. stride(mode) = base^mode.
std::size_t checked_dim(int num_nodes, int n_max) {
  const std::size_t base = static_cast<std::size_t>(n_max) + 1;
  std::size_t dim = 1;
  for (int m = 0; m < 2 * num_nodes; ++m) {
    if (dim > StateVector::kMaxBasisSize / base)
      throw std::length_error("StateVector: basis dimension exceeds the configured cap");
    dim *= base;
  }
  return dim;
}

int digit(std::size_t index, std::size_t stride, int base) {
  return static_cast<int>((index / stride) % static_cast<std::size_t>(base));
}

// Matrix element of the collective creation operator on one level holding m
// excitations, in a node holding t in total. Bosonic: sqrt(m+1). With N
// atoms the symmetric subspace saturates: sqrt((m+1)(N-t)/N).
double creation_factor(int m, int t, const std::optional<long long>& finite_n) {
  if (!finite_n) return std::sqrt(static_cast<double>(m + 1));
  const double n = static_cast<double>(*finite_n);
  const double remaining = n - static_cast<double>(t);
  if (remaining <= 0) return 0.0;
  return std::sqrt(static_cast<double>(m + 1) * remaining / n);
}

struct NodeBlock {
  // Column-major action of an operator on one node's (blue, red) pair:
  // columns indexed by source (mb, mr), entries over targets.
  int base = 0;
  std::vector<std::vector<std::complex<double>>> columns;
  std::vector<bool> column_truncated;

  std::size_t slot(int mb, int mr) const {
    return static_cast<std::size_t>(mb) * static_cast<std::size_t>(base) +
           static_cast<std::size_t>(mr);
  }
};

// Applies s+_blue + sign * s+_red to a node-block vector in place semantics
// (returns a new vector). Entries are indexed by slot(mb, mr).
std::vector<std::complex<double>> apply_block_pair(
    const std::vector<std::complex<double>>& v, int n_max, double sign,
    const std::optional<long long>& finite_n, bool* truncated) {
  const int base = n_max + 1;
  std::vector<std::complex<double>> out(v.size());
  for (int mb = 0; mb <= n_max; ++mb) {
    for (int mr = 0; mr <= n_max; ++mr) {
      const std::complex<double> a = v[static_cast<std::size_t>(mb) * base + mr];
      if (a == std::complex<double>(0.0, 0.0)) continue;
      const int t = mb + mr;
      if (mb + 1 <= n_max) {
        out[static_cast<std::size_t>(mb + 1) * base + mr] +=
            a * creation_factor(mb, t, finite_n);
      } else if (creation_factor(mb, t, finite_n) != 0.0) {
        *truncated = true;
      }
      if (mr + 1 <= n_max) {
        out[static_cast<std::size_t>(mb) * base + (mr + 1)] +=
            a * sign * creation_factor(mr, t, finite_n);
      } else if (creation_factor(mr, t, finite_n) != 0.0) {
        *truncated = true;
      }
    }
  }
  return out;
}

// Squared norm of b+^mb r+^mr |0> in the engine's arithmetic: mb! mr! for
// bosonic modes, times prod_{t<mb+mr} (N-t)/N with finite N.
double source_norm_sq(int mb, int mr, const std::optional<long long>& finite_n) {
  double norm = 1.0;
  for (int k = 1; k <= mb; ++k) norm *= k;
  for (int k = 1; k <= mr; ++k) norm *= k;
  if (finite_n) {
    const double n = static_cast<double>(*finite_n);
    for (int t = 0; t < mb + mr; ++t) {
      const double remaining = n - static_cast<double>(t);
      norm *= remaining > 0 ? remaining / n : 0.0;
    }
  }
  return norm;
}

// Rotation block: column for source |mb, mr> is
// (b+ + r+)^mb (b+ - r+)^mr |0> / (sqrt(2)^(mb+mr) * ||b+^mb r+^mr |0>||).
NodeBlock rotation_block(int n_max, const std::optional<long long>& finite_n) {
  const int base = n_max + 1;
  NodeBlock block;
  block.base = base;
  block.columns.assign(static_cast<std::size_t>(base) * base, {});
  block.column_truncated.assign(static_cast<std::size_t>(base) * base, false);
  for (int mb = 0; mb <= n_max; ++mb) {
    for (int mr = 0; mr <= n_max; ++mr) {
      std::vector<std::complex<double>> col(static_cast<std::size_t>(base) * base,
                                            std::complex<double>(0.0, 0.0));
      col[0] = 1.0;
      bool trunc = false;
      for (int k = 0; k < mb; ++k) col = apply_block_pair(col, n_max, +1.0, finite_n, &trunc);
      for (int k = 0; k < mr; ++k) col = apply_block_pair(col, n_max, -1.0, finite_n, &trunc);
      const double nn = source_norm_sq(mb, mr, finite_n);
      if (nn <= 0.0) {
        // Source state does not exist in the N-atom subspace; any amplitude
        // on it is already zero, so the column never contributes.
        std::fill(col.begin(), col.end(), std::complex<double>(0.0, 0.0));
      } else {
        const double scale = std::pow(0.5, 0.5 * (mb + mr)) / std::sqrt(nn);
        for (auto& c : col) c *= scale;
      }
      block.column_truncated[block.slot(mb, mr)] = trunc;
      block.columns[block.slot(mb, mr)] = std::move(col);
    }
  }
  return block;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

}  // namespace

StateVector StateVector::vacuum(int num_nodes, int n_max,
                                std::optional<long long> finite_n) {
  if (num_nodes < 1) throw std::invalid_argument("vacuum: num_nodes must be at least 1");
  if (n_max < 1) throw std::invalid_argument("vacuum: n_max must be at least 1");
  if (finite_n && *finite_n < 1)
    throw std::invalid_argument("vacuum: finite_n must be at least 1");
  StateVector s;
  s.num_nodes_ = num_nodes;
  s.n_max_ = n_max;
  s.finite_n_ = finite_n;
  s.amps_.assign(checked_dim(num_nodes, n_max), std::complex<double>(0.0, 0.0));
  s.amps_[0] = 1.0;
  return s;
}

std::size_t StateVector::index_of(const std::vector<int>& occ) const {
  if (static_cast<int>(occ.size()) != 2 * num_nodes_)
    throw std::invalid_argument("occupation vector must have 2*num_nodes entries");
  const std::size_t base = static_cast<std::size_t>(n_max_) + 1;
  std::size_t index = 0;
  std::size_t stride = 1;
  for (int m = 0; m < 2 * num_nodes_; ++m) {
    if (occ[m] < 0 || occ[m] > n_max_)
      throw std::invalid_argument("occupation out of range [0, n_max]");
    index += static_cast<std::size_t>(occ[m]) * stride;
    stride *= base;
  }
  return index;
}

std::complex<double> StateVector::amplitude(const std::vector<int>& occ) const {
  return amps_[index_of(occ)];
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

bool StateVector::same_basis(const StateVector& other) const {
  return num_nodes_ == other.num_nodes_ && n_max_ == other.n_max_ &&
         finite_n_ == other.finite_n_;
}

StateVector StateVector::scaled(std::complex<double> c) const {
  StateVector out = *this;
  for (auto& a : out.amps_) a *= c;
  return out;
}

StateVector StateVector::added(const StateVector& other) const {
  if (!same_basis(other)) throw std::invalid_argument("added: basis mismatch");
  StateVector out = *this;
  for (std::size_t i = 0; i < out.amps_.size(); ++i) out.amps_[i] += other.amps_[i];
  out.truncated_ = truncated_ || other.truncated_;
  return out;
}

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::domain_error("normalized: zero vector");
  return scaled(std::complex<double>(1.0 / n, 0.0));
}

StateVector create_spin_wave(const StateVector& state, int node, Level level) {
  if (node < 0 || node >= state.num_nodes_)
    throw std::invalid_argument("create_spin_wave: node out of range");
  const int base = state.n_max_ + 1;
  const std::size_t stride_b = [&] {
    std::size_t s = 1;
    for (int m = 0; m < 2 * node; ++m) s *= static_cast<std::size_t>(base);
    return s;
  }();
  const std::size_t stride_r = stride_b * static_cast<std::size_t>(base);
  const std::size_t stride =
      level == Level::Blue ? stride_b : stride_r;

  StateVector out = state;
  std::fill(out.amps_.begin(), out.amps_.end(), std::complex<double>(0.0, 0.0));
  for (std::size_t i = 0; i < state.amps_.size(); ++i) {
    const std::complex<double> a = state.amps_[i];
    if (a == std::complex<double>(0.0, 0.0)) continue;
    const int mb = digit(i, stride_b, base);
    const int mr = digit(i, stride_r, base);
    const int m = level == Level::Blue ? mb : mr;
    const int t = mb + mr;
    const double factor = creation_factor(m, t, state.finite_n_);
    if (factor == 0.0) continue;
    if (m + 1 > state.n_max_) {
      out.truncated_ = true;
      continue;
    }
    out.amps_[i + stride] += a * factor;
  }
  return out;
}

StateVector prepare_link_ideal(const StateVector& state, int node_a, int node_b,
                               Level level) {
  if (node_a == node_b)
    throw std::invalid_argument("prepare_link_ideal: nodes must be distinct");
  StateVector sum =
      create_spin_wave(state, node_a, level).added(create_spin_wave(state, node_b, level));
  return sum.normalized();
}

std::vector<NoisyLinkComponent> prepare_link_noisy(const StateVector& state,
                                                   int node_a, int node_b,
                                                   Level level, double q,
                                                   double eta) {
  if (node_a == node_b)
    throw std::invalid_argument("prepare_link_noisy: nodes must be distinct");
  if (!(q >= 0 && q < 1)) throw std::domain_error("prepare_link_noisy: q must be in [0,1)");
  if (!(eta > 0 && eta <= 1))
    throw std::domain_error("prepare_link_noisy: eta must be in (0,1]");
  if (!(eta * q < 0.5))
    throw std::domain_error("prepare_link_noisy: requires eta*q < 0.5");

  // One click on a balanced interference of the two heralding photons keeps,
  // to second order in lambda = sqrt(q eta): the symmetric single excitation
  // with weight (lambda^2/2)||v1||^2 and the symmetric double excitation
  // with weight (lambda^4/8)||v2||^2, v_k = (s+_a + s+_b)^k |state>.
  const double lambda_sq = q * eta;
  StateVector v1 =
      create_spin_wave(state, node_a, level).added(create_spin_wave(state, node_b, level));
  StateVector v2 =
      create_spin_wave(v1, node_a, level).added(create_spin_wave(v1, node_b, level));
  const double n1 = v1.norm();
  const double n2 = v2.norm();
  if (n1 == 0.0) throw std::domain_error("prepare_link_noisy: click probability is zero");

  const double w2_rel = lambda_sq / 4.0 * (n2 * n2) / (n1 * n1);
  const double w1 = 1.0 / (1.0 + w2_rel);
  const double w2 = w2_rel / (1.0 + w2_rel);

  // Non-symmetric modes never interfere with the symmetric one; each node
  // independently parks one with probability (1 - eta) q.
  const double p_inc = (1.0 - eta) * q;

  std::vector<NoisyLinkComponent> out;
  auto push = [&out](double weight, const StateVector& s, int ia, int ib) {
    if (weight <= 0.0) return;
    out.push_back(NoisyLinkComponent{weight, s, ia, ib});
  };
  const StateVector s1 = v1.normalized();
  for (int ia = 0; ia <= 1; ++ia) {
    for (int ib = 0; ib <= 1; ++ib) {
      const double pl = (ia ? p_inc : 1.0 - p_inc) * (ib ? p_inc : 1.0 - p_inc);
      push(w1 * pl, s1, ia, ib);
    }
  }
  if (w2 > 0.0 && n2 > 0.0) {
    const StateVector s2 = v2.normalized();
    for (int ia = 0; ia <= 1; ++ia) {
      for (int ib = 0; ib <= 1; ++ib) {
        const double pl = (ia ? p_inc : 1.0 - p_inc) * (ib ? p_inc : 1.0 - p_inc);
        push(w2 * pl, s2, ia, ib);
      }
    }
  }
  return out;
}

StateVector swap_rotation(const StateVector& state, int node) {
  if (node < 0 || node >= state.num_nodes_)
    throw std::invalid_argument("swap_rotation: node out of range");
  const int base = state.n_max_ + 1;
  std::size_t stride_b = 1;
  for (int m = 0; m < 2 * node; ++m) stride_b *= static_cast<std::size_t>(base);
  const std::size_t stride_r = stride_b * static_cast<std::size_t>(base);

  NodeBlock block = rotation_block(state.n_max_, state.finite_n_);

  StateVector out = state;
  std::fill(out.amps_.begin(), out.amps_.end(), std::complex<double>(0.0, 0.0));
  bool touched_truncated_column = false;
  for (std::size_t i = 0; i < state.amps_.size(); ++i) {
    const std::complex<double> a = state.amps_[i];
    if (a == std::complex<double>(0.0, 0.0)) continue;
    const int mb = digit(i, stride_b, base);
    const int mr = digit(i, stride_r, base);
    const std::size_t root = i - static_cast<std::size_t>(mb) * stride_b -
                             static_cast<std::size_t>(mr) * stride_r;
    const auto& col = block.columns[block.slot(mb, mr)];
    if (block.column_truncated[block.slot(mb, mr)]) touched_truncated_column = true;
    for (int tb = 0; tb <= state.n_max_; ++tb) {
      for (int tr = 0; tr <= state.n_max_; ++tr) {
        const std::complex<double> c = col[block.slot(tb, tr)];
        if (c == std::complex<double>(0.0, 0.0)) continue;
        out.amps_[root + static_cast<std::size_t>(tb) * stride_b +
                  static_cast<std::size_t>(tr) * stride_r] += a * c;
      }
    }
  }
  if (touched_truncated_column) out.truncated_ = true;
  return out;
}

std::vector<MeasurementOutcome> fluorescent_measure(const StateVector& state,
                                                    int node, double eta_f,
                                                    double dark_lambda) {
  if (node < 0 || node >= state.num_nodes_)
    throw std::invalid_argument("fluorescent_measure: node out of range");
  if (!(eta_f > 0 && eta_f <= 1))
    throw std::domain_error("fluorescent_measure: eta_f must be in (0,1]");
  if (!(dark_lambda >= 0 && dark_lambda <= 1))
    throw std::domain_error("fluorescent_measure: dark_lambda must be in [0,1]");

  const int base = state.n_max_ + 1;
  std::size_t stride_b = 1;
  for (int m = 0; m < 2 * node; ++m) stride_b *= static_cast<std::size_t>(base);
  const std::size_t stride_r = stride_b * static_cast<std::size_t>(base);

  std::vector<MeasurementOutcome> outcomes;
  for (int tb = 0; tb <= state.n_max_; ++tb) {
    for (int tr = 0; tr <= state.n_max_; ++tr) {
      // Project onto the (tb, tr) occupation sector of the node and reset
      // the node to vacuum in the surviving component.
      StateVector post = state;
      std::fill(post.amps_.begin(), post.amps_.end(), std::complex<double>(0.0, 0.0));
      double sector_prob = 0.0;
      for (std::size_t i = 0; i < state.amps_.size(); ++i) {
        const std::complex<double> a = state.amps_[i];
        if (a == std::complex<double>(0.0, 0.0)) continue;
        if (digit(i, stride_b, base) != tb || digit(i, stride_r, base) != tr) continue;
        sector_prob += std::norm(a);
        const std::size_t reset = i - static_cast<std::size_t>(tb) * stride_b -
                                  static_cast<std::size_t>(tr) * stride_r;
        post.amps_[reset] = a;
      }
      if (sector_prob <= 0.0) continue;
      const double inv = 1.0 / std::sqrt(sector_prob);
      for (auto& a : post.amps_) a *= std::complex<double>(inv, 0.0);

      // Thin the true counts by the per-excitation efficiency, then place an
      // optional false count on a level chosen with equal odds.
      for (int db = 0; db <= tb; ++db) {
        const double pb = binomial(tb, db) * std::pow(eta_f, db) *
                          std::pow(1.0 - eta_f, tb - db);
        if (pb <= 0.0) continue;
        for (int dr = 0; dr <= tr; ++dr) {
          const double pr = binomial(tr, dr) * std::pow(eta_f, dr) *
                            std::pow(1.0 - eta_f, tr - dr);
          if (pr <= 0.0) continue;
          const double thin = pb * pr;
          const double variants[3] = {1.0 - dark_lambda, dark_lambda / 2.0,
                                      dark_lambda / 2.0};
          for (int v = 0; v < 3; ++v) {
            const double p = sector_prob * thin * variants[v];
            if (p <= 0.0) continue;
            MeasurementOutcome o;
            o.label.true_blue = tb;
            o.label.true_red = tr;
            o.label.detected_blue = db + (v == 1 ? 1 : 0);
            o.label.detected_red = dr + (v == 2 ? 1 : 0);
            o.label.dark = v == 0 ? 0 : 1;
            o.label.phase_flip = (tb == 0 && tr == 1);
            o.probability = p;
            o.post_state = post;
            outcomes.push_back(std::move(o));
          }
        }
      }
    }
  }
  return outcomes;
}

double fidelity(const StateVector& state, const StateVector& target) {
  if (!state.same_basis(target)) throw std::invalid_argument("fidelity: basis mismatch");
  std::complex<double> overlap(0.0, 0.0);
  const auto& a = state.amplitudes();
  const auto& b = target.amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
  return std::norm(overlap);
}

StateVector apply_level_phase(const StateVector& state, int node, Level level) {
  if (node < 0 || node >= state.num_nodes_)
    throw std::invalid_argument("apply_level_phase: node out of range");
  const int base = state.n_max_ + 1;
  std::size_t stride = 1;
  for (int m = 0; m < 2 * node + (level == Level::Red ? 1 : 0); ++m)
    stride *= static_cast<std::size_t>(base);
  StateVector out = state;
  for (std::size_t i = 0; i < out.amps_.size(); ++i) {
    if (digit(i, stride, base) % 2 == 1) out.amps_[i] = -out.amps_[i];
  }
  return out;
}

}  // namespace fluorep
