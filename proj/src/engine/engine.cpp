#include "pairscatter/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "pairscatter/error.hpp"
#include "pairscatter/kernels.hpp"
#include "pairscatter/seed.hpp"

namespace pairscatter {

namespace {

// Kernel slots.
constexpr int kPlusPump = 0;   // H^z at 2k
constexpr int kPlusPair = 1;   // H^{d-z} at k
constexpr int kMinusD = 0;     // H^d at k
constexpr int kMinusTwoZ = 1;  // H^{2|z|} at k
constexpr int kMinusZ = 2;     // H^{|z|} at k

// Transposed DFT row for bin j_a: e^{-2 pi i j_a x / n} along x, with the
// same index origin as FFTW so that G^T e_{q_a} is exactly the transpose.
void write_plane_wave(const TransverseGrid& grid, std::size_t qa, std::span<cplx> out) {
  const std::size_t n = grid.n();
  const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t m = i % n;
    const std::size_t phase_index = (qa * m) % n;
    const double a = step * static_cast<double>(phase_index);
    out[i] = cplx(std::cos(a), std::sin(a));
  }
}

// out[j] = in[j + shift] along x (circular), i.e. the spectrum of V(x)
// e^{-2 pi i shift x / n}.
void roll_spectrum(const TransverseGrid& grid, std::span<const cplx> in, std::size_t shift,
                   std::span<cplx> out) {
  const std::size_t n = grid.n();
  const std::size_t rows = grid.dim() == 1 ? 1 : n;
  for (std::size_t r = 0; r < rows; ++r) {
    const cplx* src = in.data() + r * n;
    cplx* dst = out.data() + r * n;
    std::copy(src + shift, src + n, dst);
    std::copy(src, src + shift, dst + (n - shift));
  }
}

ComplexField gaussian_envelope(const TransverseGrid& grid, double waist) {
  ComplexField f(grid);
  const std::size_t n = grid.n();
  const double inv_w2 = 1.0 / (waist * waist);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = grid.position(i % n);
    const double y = grid.dim() == 2 ? grid.position(i / n) : 0.0;
    f[i] = std::exp(-(x * x + y * y) * inv_w2);
  }
  return f;
}

double outer_band_fraction(const ComplexField& f) {
  const auto& g = f.grid();
  const std::size_t n = g.n();
  const double edge = (0.5 - kGuardBandFraction) * g.window();
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = std::abs(g.position(i % n));
    const double y = g.dim() == 2 ? std::abs(g.position(i / n)) : 0.0;
    const double e = std::norm(f[i]);
    total += e;
    if (x >= edge || y >= edge) outer += e;
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace

class TwoPhotonEngine::Workspace {
 public:
  explicit Workspace(const TransverseGrid& grid)
      : fft(grid), spectrum(grid.size()), mask(grid), pump(grid), work(grid), gather() {}

  FftPlan fft;
  CplxVector spectrum;  // V = IFFT(spectrum)
  ComplexField mask;
  ComplexField pump;    // E at the crystal (PLUS only)
  ComplexField work;
  CplxVector gather;
};

TwoPhotonEngine::TwoPhotonEngine(ScatterConfig config) : TwoPhotonEngine(std::move(config), true) {}

TwoPhotonEngine::TwoPhotonEngine(ScatterConfig config, bool check_guard)
    : config_(std::move(config)),
      synthesizer_(config_.grid, config_.diffuser),
      pump_envelope_(config_.grid) {
  if (check_guard) validate(config_);
  const auto& g = config_.grid;
  const double k = g.k();
  const double d = config_.geometry.d();
  const double z = config_.geometry.z();
  if (config_.geometry.variant() == Variant::kPlus) {
    kernels_.emplace_back(g, z, 2.0 * k);
    kernels_.emplace_back(g, d - z, k);
    pump_envelope_ = gaussian_envelope(g, config_.pump.waist);
  } else {
    kernels_.emplace_back(g, d, k);
    kernels_.emplace_back(g, 2.0 * std::abs(z), k);
    kernels_.emplace_back(g, std::abs(z), k);
  }
  if (!check_guard) return;
  // Periodic wrap-around check on realization 0.
  const double guard = guard_band_fraction(0);
  if (!(guard <= kGuardBandMaxEnergy)) {
    std::ostringstream msg;
    msg << "guard band holds " << guard << " of the energy after the longest leg (limit "
        << kGuardBandMaxEnergy << "); increase n";
    throw ConfigError(msg.str());
  }
}

void TwoPhotonEngine::WorkspaceDeleter::operator()(Workspace* ws) const { delete ws; }

TwoPhotonEngine::WorkspacePtr TwoPhotonEngine::make_workspace() const {
  return WorkspacePtr(new Workspace(config_.grid));
}

std::size_t TwoPhotonEngine::qa_bin(double q_a) const {
  const long j = config_.grid.lattice_index(q_a);
  if (j < 0) {
    const double dq = config_.grid.dq();
    std::ostringstream msg;
    msg << "q_a = " << q_a << " is not on the momentum lattice (dq = " << dq
        << "); nearest lattice value is " << std::round(q_a / dq) * dq;
    throw ConfigError(msg.str());
  }
  return static_cast<std::size_t>(j);
}

void TwoPhotonEngine::draw_realization(std::uint64_t index, Workspace& ws) const {
  const std::uint64_t seed = realization_seed(config_.ensemble.master_seed, index);
  synthesizer_.spectrum(seed, ws.spectrum);
  std::copy(ws.spectrum.begin(), ws.spectrum.end(), ws.mask.values().begin());
  ws.fft.inverse(ws.mask);
  if (config_.geometry.variant() == Variant::kPlus) {
    kernels::csquare(ws.pump.values(), ws.mask.values());
    kernels::cmul_inplace(ws.pump.values(), pump_envelope_.values());
    if (!kernel(kPlusPump).is_identity()) kernel(kPlusPump).apply(ws.pump, ws.fft);
  }
}

void TwoPhotonEngine::set_mask(const ComplexField& mask, Workspace& ws) const {
  if (!(mask.grid() == config_.grid)) throw ConfigError("mask grid differs from engine grid");
  std::copy(mask.values().begin(), mask.values().end(), ws.mask.values().begin());
  std::copy(mask.values().begin(), mask.values().end(), ws.spectrum.begin());
  ws.fft.forward(ws.spectrum);
  kernels::scale(ws.spectrum, 1.0 / static_cast<double>(config_.grid.size()));
  if (config_.geometry.variant() == Variant::kPlus) {
    kernels::csquare(ws.pump.values(), ws.mask.values());
    kernels::cmul_inplace(ws.pump.values(), pump_envelope_.values());
    if (!kernel(kPlusPump).is_identity()) kernel(kPlusPump).apply(ws.pump, ws.fft);
  }
}

const ComplexField& TwoPhotonEngine::pump_at_crystal(Workspace& ws) const {
  if (config_.geometry.variant() == Variant::kMinus) {
    std::fill(ws.work.values().begin(), ws.work.values().end(), cplx(1.0, 0.0));
    return ws.work;
  }
  return ws.pump;
}

ComplexField TwoPhotonEngine::detection_mode_at_crystal(Workspace& ws, std::size_t qa) const {
  ComplexField out(config_.grid);
  write_plane_wave(config_.grid, qa, out.values());
  kernels::cmul_inplace(out.values(), ws.mask.values());
  if (config_.geometry.variant() == Variant::kPlus) {
    kernel(kPlusPair).apply(out, ws.fft);
  } else {
    kernel(kMinusD).apply(out, ws.fft);
    kernels::cmul_inplace(out.values(), ws.mask.values());
    if (!kernel(kMinusZ).is_identity()) kernel(kMinusZ).apply(out, ws.fft);
  }
  return out;
}

std::span<const cplx> TwoPhotonEngine::biphoton_cut(Workspace& ws, std::size_t qa) const {
  auto w = ws.work.values();
  const auto v = ws.mask.values();
  // First leg in the spectral domain: spectrum of V e^{-i q_a x} is the
  // mask spectrum rolled by q_a; apply H and return to position space.
  roll_spectrum(config_.grid, ws.spectrum, qa, w);
  if (config_.geometry.variant() == Variant::kPlus) {
    const auto& pair = kernel(kPlusPair);
    pair.apply_spectrum(w);
    ws.fft.inverse(w);
    kernels::cmul_inplace(w, ws.pump.values());
    pair.apply(w, ws.fft);
    kernels::cmul_inplace(w, v);
  } else {
    const auto& hd = kernel(kMinusD);
    hd.apply_spectrum(w);
    ws.fft.inverse(w);
    kernels::cmul_inplace(w, v);
    if (!kernel(kMinusTwoZ).is_identity()) kernel(kMinusTwoZ).apply(w, ws.fft);
    kernels::cmul_inplace(w, v);
    hd.apply(w, ws.fft);
    kernels::cmul_inplace(w, v);
  }
  ws.fft.forward(w);
  return w;
}

std::vector<std::size_t> TwoPhotonEngine::output_bins(std::size_t qa) const {
  const auto& g = config_.grid;
  const double qa_value = g.momentum(qa);
  const double span = config_.theta_span * g.k();
  std::vector<std::size_t> bins;
  for (std::size_t j : g.sorted_momentum_bins()) {
    if (span > 0.0 && std::abs(g.momentum(j) - qa_value) > span * (1.0 + 1e-12)) continue;
    bins.push_back(j);  // row q_y = 0 in 2D
  }
  return bins;
}

namespace {

struct ChunkResult {
  std::vector<MomentAccumulator> rows;
  void merge(const ChunkResult& other) {
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].merge(other.rows[i]);
  }
};

}  // namespace

CorrelationMap TwoPhotonEngine::run(std::span<const std::size_t> qa_bins, int threads) const {
  const std::uint64_t total = config_.ensemble.n_realizations;
  const std::uint64_t n_chunks = (total + kChunkSize - 1) / kChunkSize;
  const std::size_t rows = qa_bins.size();
  std::vector<std::vector<std::size_t>> bins(rows);
  for (std::size_t r = 0; r < rows; ++r) bins[r] = output_bins(qa_bins[r]);
  const double scale = 1.0 / static_cast<double>(config_.grid.size());

  std::atomic<std::uint64_t> next{0};
  std::mutex mutex;
  std::map<std::uint64_t, ChunkResult> pending;
  std::uint64_t next_to_reduce = 0;
  OrderedTreeReducer<ChunkResult> reducer;
  std::exception_ptr failure;

  auto worker = [&] {
    try {
      auto ws = make_workspace();
      for (;;) {
        const std::uint64_t c = next.fetch_add(1);
        if (c >= n_chunks) break;
        ChunkResult chunk;
        chunk.rows.reserve(rows);
        for (std::size_t r = 0; r < rows; ++r) chunk.rows.emplace_back(bins[r].size());
        const std::uint64_t end = std::min(total, (c + 1) * kChunkSize);
        for (std::uint64_t i = c * kChunkSize; i < end; ++i) {
          draw_realization(i, *ws);
          for (std::size_t r = 0; r < rows; ++r) {
            const auto amp = biphoton_cut(*ws, qa_bins[r]);
            ws->gather.resize(bins[r].size());
            for (std::size_t b = 0; b < bins[r].size(); ++b) ws->gather[b] = amp[bins[r][b]];
            chunk.rows[r].add_abs2(ws->gather, scale);
          }
        }
        std::lock_guard lock(mutex);
        pending.emplace(c, std::move(chunk));
        for (auto it = pending.find(next_to_reduce); it != pending.end();
             it = pending.find(next_to_reduce)) {
          reducer.push(std::move(it->second));
          pending.erase(it);
          ++next_to_reduce;
        }
      }
    } catch (...) {
      std::lock_guard lock(mutex);
      if (!failure) failure = std::current_exception();
      next.store(n_chunks);
    }
  };

  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ChunkResult result = reducer.finish();
  CorrelationMap map;
  const auto& g = config_.grid;
  for (std::size_t r = 0; r < rows; ++r) {
    CorrelationCurve curve;
    const double qa_value = g.momentum(qa_bins[r]);
    curve.q_a = qa_value;
    curve.n_realizations = result.rows[r].count();
    for (std::size_t j : bins[r]) curve.theta_axis.push_back((g.momentum(j) - qa_value) / g.k());
    const auto mean = result.rows[r].mean();
    curve.values.assign(mean.begin(), mean.end());
    curve.std_errors = result.rows[r].std_error();
    map.q_a.push_back(qa_value);
    map.rows.push_back(std::move(curve));
  }
  return map;
}

CorrelationCurve TwoPhotonEngine::ensemble_average_cut(double q_a, int threads) const {
  const std::size_t qa = qa_bin(q_a);
  return std::move(run(std::span(&qa, 1), threads).rows.front());
}

CorrelationMap TwoPhotonEngine::ensemble_average_map(std::span<const double> q_a_list,
                                                     int threads) const {
  std::vector<std::size_t> qa;
  for (double q : q_a_list) qa.push_back(qa_bin(q));
  return run(qa, threads);
}

double TwoPhotonEngine::probe_guard_band(const ScatterConfig& config, std::uint64_t realization) {
  return TwoPhotonEngine(config, false).guard_band_fraction(realization);
}

double TwoPhotonEngine::guard_band_fraction(std::uint64_t realization) const {
  auto ws = make_workspace();
  draw_realization(realization, *ws);
  const auto& g = config_.grid;
  if (config_.geometry.variant() == Variant::kPlus) {
    ComplexField f = detection_mode_at_crystal(*ws, 0);
    kernels::cmul_inplace(f.values(), ws->pump.values());
    kernel(kPlusPair).apply(f, ws->fft);
    return outer_band_fraction(f);
  }
  const double waist = config_.pump.waist > 0.0 ? config_.pump.waist : 100.0 * config_.diffuser.xi0();
  ComplexField f = gaussian_envelope(g, waist);
  if (!kernel(kMinusZ).is_identity()) kernel(kMinusZ).apply(f, ws->fft);
  kernels::cmul_inplace(f.values(), ws->mask.values());
  kernel(kMinusD).apply(f, ws->fft);
  return outer_band_fraction(f);
}

// ---- free functions -------------------------------------------------------

namespace {

void check_mask(const ScatterConfig& config, const DiffuserMask& mask) {
  if (!(mask.at_omega.grid() == config.grid)) throw ConfigError("mask grid differs from config grid");
}

}  // namespace

ComplexField pump_at_crystal(const ScatterConfig& config, const DiffuserMask& mask) {
  check_mask(config, mask);
  if (config.geometry.variant() == Variant::kMinus) return ComplexField(config.grid, cplx(1.0, 0.0));
  ComplexField e = apply_mask(gaussian_envelope(config.grid, config.pump.waist), mask_at_2omega(mask));
  return fresnel_propagate(e, config.geometry.z(), 2.0 * config.grid.k());
}

ComplexField detection_mode_at_crystal(const ScatterConfig& config, const DiffuserMask& mask,
                                       double q_a) {
  check_mask(config, mask);
  const TwoPhotonEngine engine(config);
  auto ws = engine.make_workspace();
  engine.set_mask(mask.at_omega, *ws);
  return engine.detection_mode_at_crystal(*ws, engine.qa_bin(q_a));
}

ComplexField biphoton_cut(const ScatterConfig& config, const DiffuserMask& mask, double q_a) {
  check_mask(config, mask);
  const auto& g = config.grid;
  const double k = g.k();
  ComplexField x = detection_mode_at_crystal(config, mask, q_a);
  x = apply_mask(x, pump_at_crystal(config, mask));
  // G applied in its natural order: propagate, scatter, ..., to far field.
  if (config.geometry.variant() == Variant::kPlus) {
    x = fresnel_propagate(x, config.geometry.d() - config.geometry.z(), k);
    x = apply_mask(x, mask.at_omega);
  } else {
    x = fresnel_propagate(x, std::abs(config.geometry.z()), k);
    x = apply_mask(x, mask.at_omega);
    x = fresnel_propagate(x, config.geometry.d(), k);
    x = apply_mask(x, mask.at_omega);
  }
  const FftPlan fft(g);
  fft.forward(x);
  return x;
}

CorrelationCurve ensemble_average_cut(const ScatterConfig& config, double q_a, int threads) {
  return TwoPhotonEngine(config).ensemble_average_cut(q_a, threads);
}

CorrelationMap ensemble_average_map(const ScatterConfig& config, std::span<const double> q_a_list,
                                    int threads) {
  return TwoPhotonEngine(config).ensemble_average_map(q_a_list, threads);
}

}  // namespace pairscatter
