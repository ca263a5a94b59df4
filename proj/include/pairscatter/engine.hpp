#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "pairscatter/accumulator.hpp"
#include "pairscatter/config.hpp"
#include "pairscatter/fft.hpp"
#include "pairscatter/optics.hpp"

namespace pairscatter {

// Ensemble-averaged coincidence rate along one detector cut. theta_axis
// holds theta = theta_b - theta_a.
struct CorrelationCurve {
  std::vector<double> theta_axis;
  std::vector<double> values;
  std::vector<double> std_errors;
  std::uint64_t n_realizations = 0;
  double q_a = 0.0;
};

// Rows of cuts sharing the same disorder, one per q_a.
struct CorrelationMap {
  std::vector<double> q_a;
  std::vector<CorrelationCurve> rows;
};

// Realizations are processed in chunks of this many; chunk boundaries never
// depend on the worker count.
inline constexpr std::uint64_t kChunkSize = 16;

// Two-photon amplitude Psi_out = G Psi G^T evaluated by field propagation.
// The thin crystal makes Psi diagonal in position, Psi(r1, r2) =
// E(r1) delta(r1, r2), so one cut over q_b at fixed q_a is
//   out = G [ E * (G^T e_{q_a}) ]
// where G maps crystal-plane fields to far-field momenta:
//   PLUS : G = F V H^{d-z},          E = H^z_{2k} [pump * V^2]
//   MINUS: G = F V H^d V H^{|z|},    E = 1
// F is the DFT (rows e^{-i q x}); H and V are symmetric, so G^T e_{q_a} is
// the conjugate plane wave e^{-i q_a x} pushed through G's factors in
// reverse order.
class TwoPhotonEngine {
 public:
  // Validates the config and probes the guard band on realization 0.
  explicit TwoPhotonEngine(ScatterConfig config);

  const ScatterConfig& config() const { return config_; }
  const TransverseGrid& grid() const { return config_.grid; }

  // Per-worker scratch space; not shared between threads.
  class Workspace;
  struct WorkspaceDeleter {
    void operator()(Workspace* ws) const;
  };
  using WorkspacePtr = std::unique_ptr<Workspace, WorkspaceDeleter>;
  WorkspacePtr make_workspace() const;

  // FFT bin of q_a; throws ConfigError when off-lattice. In 2D q_a lies on
  // the x axis.
  std::size_t qa_bin(double q_a) const;

  // Draws realization `index` of the diffuser into the workspace.
  void draw_realization(std::uint64_t index, Workspace& ws) const;
  void set_mask(const ComplexField& mask, Workspace& ws) const;

  // Position-space pump at the crystal for the current mask.
  const ComplexField& pump_at_crystal(Workspace& ws) const;
  // (G^T e_{q_a}) at the crystal plane.
  ComplexField detection_mode_at_crystal(Workspace& ws, std::size_t qa) const;
  // Two-photon amplitude over q_b in FFT order as an unnormalized forward
  // DFT (|.|^2 / N is the unitary intensity). Fused production path: the
  // first leg starts from the mask spectrum and MINUS merges its two |z|
  // legs into one.
  std::span<const cplx> biphoton_cut(Workspace& ws, std::size_t qa) const;

  // Momentum bins reported in curves, sorted by q_b.
  std::vector<std::size_t> output_bins(std::size_t qa) const;

  CorrelationCurve ensemble_average_cut(double q_a, int threads) const;
  CorrelationMap ensemble_average_map(std::span<const double> q_a_list, int threads) const;

  // Energy fraction that reaches the outer guard band of the window after
  // the longest propagation leg of one realization.
  double guard_band_fraction(std::uint64_t realization) const;
  // Same probe without the construction-time checks, for reporting.
  static double probe_guard_band(const ScatterConfig& config, std::uint64_t realization);

 private:
  TwoPhotonEngine(ScatterConfig config, bool check_guard);

  ScatterConfig config_;
  DiffuserSynthesizer synthesizer_;
  std::vector<FresnelKernel> kernels_;
  ComplexField pump_envelope_;
  CorrelationMap run(std::span<const std::size_t> qa_bins, int threads) const;
  const FresnelKernel& kernel(int which) const { return kernels_[static_cast<std::size_t>(which)]; }
};

// Free-function forms operating on a single mask.
ComplexField pump_at_crystal(const ScatterConfig& config, const DiffuserMask& mask);
ComplexField detection_mode_at_crystal(const ScatterConfig& config, const DiffuserMask& mask,
                                       double q_a);
// Amplitude over q_b (FFT order) computed with the literal G [E * G^T e]
// factor sequence.
ComplexField biphoton_cut(const ScatterConfig& config, const DiffuserMask& mask, double q_a);
CorrelationCurve ensemble_average_cut(const ScatterConfig& config, double q_a, int threads = 1);
CorrelationMap ensemble_average_map(const ScatterConfig& config, std::span<const double> q_a_list,
                                    int threads = 1);

}  // namespace pairscatter
