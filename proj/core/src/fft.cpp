#include "plaplab/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "plaplab/errors.hpp"

namespace plaplab::fft {
namespace {

enum class PlanKind { forward, backward, lines_r2c, lines_c2r };

using PlanKey = std::tuple<PlanKind, int, int, int>;  // kind, dim, n, axis

// The FFTW planner is not thread-safe; execution through the new-array
// interface is. Plans are created once under the lock and reused.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(PlanKind kind, const Grid& grid, int axis) {
    const PlanKey key{kind, grid.dim(), grid.n(), axis};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    fftw_plan plan = create(kind, grid, axis);
    if (plan == nullptr) throw NumericalError("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  static fftw_plan create(PlanKind kind, const Grid& grid, int axis) {
    const int n = grid.n();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const std::size_t total = grid.size();
    const std::size_t half = static_cast<std::size_t>(n / 2 + 1);
    (void)axis;
    const int lines = grid.dim() == 1 ? 1 : n;

    auto* cbuf = fftw_alloc_complex(total > half * lines ? total : half * lines);
    auto* rbuf = fftw_alloc_real(total);
    fftw_plan plan = nullptr;
    switch (kind) {
      case PlanKind::forward:
      case PlanKind::backward: {
        const int sign = kind == PlanKind::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        plan = grid.dim() == 1 ? fftw_plan_dft_1d(n, cbuf, cbuf, sign, flags)
                               : fftw_plan_dft_2d(n, n, cbuf, cbuf, sign, flags);
        break;
      }
      case PlanKind::lines_r2c:
        // Single-line plans on aligned scratch; lines are gathered one at a
        // time, which beats strided many-transform plans here.
        plan = fftw_plan_dft_r2c_1d(n, rbuf, cbuf, FFTW_ESTIMATE);
        break;
      case PlanKind::lines_c2r:
        plan = fftw_plan_dft_c2r_1d(n, cbuf, rbuf, FFTW_ESTIMATE);
        break;
    }
    fftw_free(cbuf);
    fftw_free(rbuf);
    return plan;
  }

  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

// Per-thread aligned line buffers for shift_lines.
struct LineScratch {
  int n = 0;
  double* real = nullptr;
  fftw_complex* spectrum = nullptr;

  static LineScratch& local(int size) {
    thread_local LineScratch scratch;
    if (scratch.n != size) {
      scratch.release();
      scratch.n = size;
      scratch.real = fftw_alloc_real(static_cast<std::size_t>(size));
      scratch.spectrum = fftw_alloc_complex(static_cast<std::size_t>(size / 2 + 1));
    }
    return scratch;
  }
  void release() {
    if (real) fftw_free(real);
    if (spectrum) fftw_free(spectrum);
    real = nullptr;
    spectrum = nullptr;
  }
  ~LineScratch() { release(); }
};

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

std::vector<Complex> forward(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw DomainError("fft::forward: size mismatch");
  std::vector<Complex> out(values.begin(), values.end());
  fftw_plan plan = PlanCache::instance().get(PlanKind::forward, grid, 0);
  fftw_execute_dft(plan, as_fftw(out.data()), as_fftw(out.data()));
  const double scale = grid.weight();
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> inverse(const Grid& grid, std::span<const Complex> spectrum) {
  if (spectrum.size() != grid.size()) throw DomainError("fft::inverse: size mismatch");
  std::vector<Complex> work(spectrum.begin(), spectrum.end());
  fftw_plan plan = PlanCache::instance().get(PlanKind::backward, grid, 0);
  fftw_execute_dft(plan, as_fftw(work.data()), as_fftw(work.data()));
  std::vector<double> out(work.size());
  for (std::size_t i = 0; i < work.size(); ++i) out[i] = work[i].real();
  return out;
}

void shift_lines(const Grid& grid, std::span<double> values, int axis,
                 std::span<const double> displacement) {
  const int n = grid.n();
  const int lines = grid.dim() == 1 ? 1 : n;
  if (values.size() != grid.size()) throw DomainError("fft::shift_lines: size mismatch");
  if (axis < 0 || axis >= grid.dim()) throw DomainError("fft::shift_lines: bad axis");
  if (displacement.size() != static_cast<std::size_t>(lines)) {
    throw DomainError("fft::shift_lines: one displacement per line required");
  }
  auto& cache = PlanCache::instance();
  fftw_plan r2c = cache.get(PlanKind::lines_r2c, grid, 0);
  fftw_plan c2r = cache.get(PlanKind::lines_c2r, grid, 0);
  LineScratch& scratch = LineScratch::local(n);
  double* line = scratch.real;
  Complex* c = reinterpret_cast<Complex*>(scratch.spectrum);

  const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(n);
  const std::size_t dist = axis == 0 ? static_cast<std::size_t>(n) : 1;
  const double inv_n = 1.0 / n;
  for (int l = 0; l < lines; ++l) {
    const double shift = displacement[static_cast<std::size_t>(l)];
    if (shift == 0.0) continue;
    double* base = values.data() + static_cast<std::size_t>(l) * dist;
    for (int k = 0; k < n; ++k) line[k] = base[k * stride];
    fftw_execute_dft_r2c(r2c, line, scratch.spectrum);

    const double angle = 2.0 * std::numbers::pi * shift;
    // Phase recurrence in plain arithmetic (std::complex multiplication
    // carries inf/nan recovery that dominates this loop).
    const double sr = std::cos(angle), si = std::sin(angle);
    double pr = inv_n, pi = 0.0;
    for (int k = 0; k < n / 2; ++k) {
      const double cr = c[k].real(), ci = c[k].imag();
      c[k] = Complex(cr * pr - ci * pi, cr * pi + ci * pr);
      const double nr = pr * sr - pi * si;
      pi = pr * si + pi * sr;
      pr = nr;
      // Re-anchor the recurrence periodically to bound rounding drift.
      if ((k & 31) == 31) {
        const double a = angle * (k + 1);
        pr = std::cos(a) * inv_n;
        pi = std::sin(a) * inv_n;
      }
    }
    // The Nyquist coefficient of a real line must stay real.
    c[n / 2] = Complex(c[n / 2].real() * std::cos(std::numbers::pi * n * shift) * inv_n, 0.0);
    fftw_execute_dft_c2r(c2r, scratch.spectrum, line);
    for (int k = 0; k < n; ++k) base[k * stride] = line[k];
  }
}

}  // namespace plaplab::fft
