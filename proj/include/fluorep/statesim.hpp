#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

namespace fluorep {

// Storage levels of one ensemble node. Each node carries two collective
// spin-wave modes.
enum class Level { Blue = 0, Red = 1 };

struct MeasurementOutcome;

// Pure state of a chain of ensemble nodes in the occupation basis. Each node
// contributes two modes (blue, red), each truncated at n_max excitations.
// Basis index order: node0.blue, node0.red, node1.blue, node1.red, ...
//
// Without finite_n the modes are bosonic: s+ |m> = sqrt(m + 1) |m + 1>.
// With finite_n = N the modes are collective excitations of N three-level
// atoms restricted to the symmetric subspace; the creation matrix element
// for a level with occupation m in a node holding t excitations in total is
// sqrt((m + 1) (N - t) / N), which reproduces the exact symmetric-subspace
// norms (one blue plus one red spin wave: 1 - 1/N; a doubly excited level:
// 2 (1 - 1/N)) and vanishes when the node saturates at t = N.
//
// Values are immutable; operations return new states. The sticky truncated()
// flag records that some amplitude was dropped at the n_max cutoff.
class StateVector {
 public:
  static constexpr std::size_t kMaxBasisSize = 1000000;

  // Degenerate empty state (0 nodes, no amplitudes); a placeholder value for
  // containers. Every operation below requires a state built by vacuum().
  StateVector() = default;

  // All nodes empty. Throws std::length_error when (n_max + 1)^(2 num_nodes)
  // exceeds kMaxBasisSize; std::invalid_argument on bad arguments.
  static StateVector vacuum(int num_nodes, int n_max = 2,
                            std::optional<long long> finite_n = std::nullopt);

  int num_nodes() const { return num_nodes_; }
  int n_max() const { return n_max_; }
  std::optional<long long> finite_n() const { return finite_n_; }
  std::size_t dim() const { return amps_.size(); }
  bool truncated() const { return truncated_; }

  // occ[2 * node + 0] = blue occupation, occ[2 * node + 1] = red occupation.
  std::complex<double> amplitude(const std::vector<int>& occ) const;
  double norm() const;

  bool same_basis(const StateVector& other) const;

  StateVector scaled(std::complex<double> c) const;
  StateVector added(const StateVector& other) const; // same basis required
  StateVector normalized() const;                    // error on zero norm

  // Mode index helpers used by the operations below.
  std::size_t index_of(const std::vector<int>& occ) const;
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

 private:
  friend StateVector create_spin_wave(const StateVector&, int, Level);
  friend StateVector swap_rotation(const StateVector&, int);
  friend StateVector apply_level_phase(const StateVector&, int, Level);
  friend std::vector<MeasurementOutcome> fluorescent_measure(const StateVector&,
                                                             int, double, double);

  int num_nodes_ = 0;
  int n_max_ = 0;
  std::optional<long long> finite_n_;
  bool truncated_ = false;
  std::vector<std::complex<double>> amps_;
};

// Outcome label of one fluorescence readout. true_* is the occupation sector
// the node collapsed into; detected_* is what the detectors reported after
// per-excitation efficiency thinning and a possible false count. phase_flip
// marks the single-red sector, whose post-state needs a known pi phase
// correction on one of the remaining excitations.
struct MeasurementLabel {
  int true_blue = 0;
  int true_red = 0;
  int detected_blue = 0;
  int detected_red = 0;
  int dark = 0; // 0 or 1 false counts contained in detected_*
  bool phase_flip = false;
  int total_detected() const { return detected_blue + detected_red; }
};

struct MeasurementOutcome {
  MeasurementLabel label;
  double probability = 0.0;
  StateVector post_state; // measured node reset to vacuum, renormalized
};

// One member of the conditional post-click ensemble of noisy link
// generation. incoherent_a/b count non-symmetric excitations parked at the
// two nodes; they are classical labels, not coherent amplitudes, because the
// non-symmetric modes never interfere with the symmetric one.
struct NoisyLinkComponent {
  double weight = 0.0;
  StateVector state;
  int incoherent_a = 0;
  int incoherent_b = 0;
};

// Applies the collective creation operator of the given level. Unnormalized;
// sets truncated() on the result if a component fell off the n_max cutoff.
StateVector create_spin_wave(const StateVector& state, int node, Level level);

// Writes one shared excitation across two nodes:
// (s+_a + s+_b) |state> / norm. The heralded ideal link.
StateVector prepare_link_ideal(const StateVector& state, int node_a, int node_b,
                               Level level);

// Conditional ensemble after one heralding click of a noisy generation
// attempt with excitation probability q and forward fraction eta.
//
// Each ensemble emits a two-mode-squeezed state with amplitude
// lambda = sqrt(q eta) per photon-spin-wave pair; the photons interfere on a
// balanced beamsplitter watched by threshold detectors, and exactly one
// detector fires. Expanding to second order and projecting the photons out:
//   weight(ideal (s+_a + s+_b)/sqrt2 component)        ~ lambda^2
//   weight(double excitation (s+_a + s+_b)^2/2 comp.)  ~ lambda^4
// so double/single = q eta on a vacuum input. Independently, each node hosts
// a non-symmetric excitation with probability (1 - eta) q, recorded as a
// classical label. Weights are normalized to sum to 1.
// Requires eta * q < 0.5.
std::vector<NoisyLinkComponent> prepare_link_noisy(const StateVector& state,
                                                   int node_a, int node_b,
                                                   Level level, double q,
                                                   double eta);

// Storage-level rotation used for entanglement connection:
// s+_blue -> (s+_blue + s+_red)/sqrt2, s+_red -> (s+_blue - s+_red)/sqrt2.
// Self-inverse. Norm-preserving unless a component crosses the n_max cutoff
// (then truncated() is set and the overflow is dropped).
StateVector swap_rotation(const StateVector& state, int node);

// Fluorescence readout of both storage levels of one node. The node first
// collapses into a definite occupation sector (fluorescence measures level
// populations); each true excitation is then seen with probability eta_f,
// and with probability dark_lambda a single false count lands on a level
// chosen with equal odds (a Bernoulli event whose expectation is
// dark_lambda; requires dark_lambda <= 1). Outcome probabilities sum to the
// squared norm of the input. Post-states have the measured node reset to
// vacuum. Zero-probability outcomes are omitted; ordering is deterministic.
std::vector<MeasurementOutcome> fluorescent_measure(const StateVector& state,
                                                    int node, double eta_f,
                                                    double dark_lambda);

// |<target|state>|^2. Bases must match.
double fidelity(const StateVector& state, const StateVector& target);

// Multiplies amplitudes by (-1)^occupation of one level: the classical phase
// correction selected by MeasurementLabel::phase_flip.
StateVector apply_level_phase(const StateVector& state, int node, Level level);

}  // namespace fluorep
