#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>

#include "compumat/error.hpp"
#include "compumat/magnetics.hpp"
#include "compumat/sweep_engine.hpp"

namespace compumat {
namespace {

int next_pow2(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : p(static_cast<double*>(fftw_malloc(sizeof(double) * n))), size(n) {
    if (p == nullptr) throw std::bad_alloc();
    std::memset(p, 0, sizeof(double) * n);
  }
  ~RealBuffer() { fftw_free(p); }
  RealBuffer(const RealBuffer&) = delete;
  RealBuffer& operator=(const RealBuffer&) = delete;
  double* p;
  std::size_t size;
};

// The planner is not thread-safe; plans are created once per length under a lock.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// Plans live for the whole process; they are shared by every engine of the same length.
struct SweepEngine::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

std::shared_ptr<SweepEngine::Plans> SweepEngine::plans_for(int size) {
  static auto* cache = new std::map<int, std::shared_ptr<SweepEngine::Plans>>();
  std::lock_guard lock(planner_mutex());
  if (auto it = cache->find(size); it != cache->end()) return it->second;
  const std::size_t real_n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size);
  const std::size_t cplx_n = static_cast<std::size_t>(size) * static_cast<std::size_t>(size / 2 + 1);
  RealBuffer real(real_n);
  auto* cplx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * cplx_n));
  if (cplx == nullptr) throw std::bad_alloc();
  auto plans = std::make_shared<SweepEngine::Plans>();
  plans->r2c = fftw_plan_dft_r2c_2d(size, size, real.p, cplx, FFTW_ESTIMATE);
  plans->c2r = fftw_plan_dft_c2r_2d(size, size, cplx, real.p, FFTW_ESTIMATE);
  fftw_free(cplx);
  (*cache)[size] = plans;
  return plans;
}

void SweepEngine::Spectrum::Free::operator()(std::complex<double>* p) const noexcept { fftw_free(p); }

SweepEngine::Spectrum::Spectrum(std::size_t size)
    : data_(static_cast<std::complex<double>*>(fftw_malloc(sizeof(std::complex<double>) * size))), size_(size) {
  if (!data_) throw std::bad_alloc();
}

SweepEngine::Spectrum::Spectrum(const Spectrum& other) : Spectrum(other.size_) {
  std::copy(other.data(), other.data() + size_, data());
}

SweepEngine::Spectrum& SweepEngine::Spectrum::operator=(const Spectrum& other) {
  if (this != &other) {
    Spectrum tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

std::vector<std::int8_t> transform_polarity(std::span<const std::int8_t> polarity, int n, int rot, bool mated) {
  std::vector<std::int8_t> out(polarity.size(), 0);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const auto d = place_doubled(doubled_local(n, r, c), rot, mated);
      const int col = (d.x2 + n - 1) / 2;
      const int row = ((n - 1) - d.y2) / 2;
      out[static_cast<std::size_t>(row * n + col)] = polarity[static_cast<std::size_t>(r * n + c)];
    }
  return out;
}

SweepEngine::SweepEngine(int n, double pitch_mm, double gap_mm, double moment_base, double moment_mating,
                         bool mated)
    : n_(n), size_(next_pow2(4 * n - 3)), mated_(mated) {
  if (n < 1) throw ValidationError("sweep needs n >= 1");
  if (!(gap_mm > 0.0)) throw DegenerateGeometryError("gap_mm must be positive");
  plans_ = plans_for(size_);

  const int reach = 2 * (n - 1);
  std::vector<double> kernel(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_), 0.0);
  for (int du = -reach; du <= reach; ++du)
    for (int dv = -reach; dv <= reach; ++dv) {
      const int row = (du % size_ + size_) % size_;
      const int col = (dv % size_ + size_) % size_;
      kernel[static_cast<std::size_t>(row * size_ + col)] =
          pair_kernel_value(dv, du, pitch_mm, gap_mm, moment_base, moment_mating, mated);
    }
  const Spectrum hat = forward(kernel);
  kernel_hat_.resize(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) kernel_hat_[i] = hat.data()[i].real();
}

SweepEngine::~SweepEngine() = default;

SweepEngine::Spectrum SweepEngine::forward(std::span<const double> real_in) const {
  RealBuffer in(real_in.size());
  std::copy(real_in.begin(), real_in.end(), in.p);
  Spectrum out(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_ / 2 + 1));
  fftw_execute_dft_r2c(plans_->r2c, in.p, reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

SweepEngine::Spectrum SweepEngine::base_spectrum(std::span<const std::int8_t> polarity) const {
  if (polarity.size() != static_cast<std::size_t>(n_ * n_)) throw ValidationError("polarity size mismatch");
  std::vector<double> padded(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_), 0.0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c)
      padded[static_cast<std::size_t>(r * size_ + c)] = polarity[static_cast<std::size_t>(r * n_ + c)];
  return forward(padded);
}

SweepEngine::Spectrum SweepEngine::mating_spectrum(std::span<const std::int8_t> polarity, int rot) const {
  const auto placed = transform_polarity(polarity, n_, rot, mated_);
  return base_spectrum(placed);
}

void SweepEngine::slice(const Spectrum& base, const Spectrum& mating, std::span<double> out) const {
  const int w = window();
  if (out.size() != static_cast<std::size_t>(w * w)) throw ValidationError("slice output size mismatch");
  Spectrum prod(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    prod.data()[i] = base.data()[i] * std::conj(mating.data()[i]) * kernel_hat_[i];
  RealBuffer real(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_));
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(prod.data()), real.p);
  const double scale = 1.0 / (static_cast<double>(size_) * static_cast<double>(size_));
  // Translation d sits at index row = -dy, col = dx (mod L).
  for (int dy = -(n_ - 1); dy <= n_ - 1; ++dy) {
    const int row = ((-dy) % size_ + size_) % size_;
    for (int dx = -(n_ - 1); dx <= n_ - 1; ++dx) {
      const int col = (dx % size_ + size_) % size_;
      out[static_cast<std::size_t>((dy + n_ - 1) * w + (dx + n_ - 1))] =
          real.p[static_cast<std::size_t>(row * size_ + col)] * scale;
    }
  }
}

InteractionMap pose_sweep(const MagnetPixelGrid& a_in, const MagnetPixelGrid& b_in, double gap_mm, bool mated) {
  if (a_in.pitch_mm() != b_in.pitch_mm()) throw ValidationError("pose_sweep needs grids with equal pitch");
  const int n = std::max(a_in.n(), b_in.n());
  const MagnetPixelGrid a = a_in.n() == n ? a_in : a_in.padded_to(n);
  const MagnetPixelGrid b = b_in.n() == n ? b_in : b_in.padded_to(n);
  SweepEngine engine(n, a.pitch_mm(), gap_mm, a.moment(), b.moment(), mated);
  InteractionMap map(n, gap_mm, mated);
  const auto base = engine.base_spectrum(a.polarity());
  for (int rot = 0; rot < 4; ++rot) {
    const auto mate = engine.mating_spectrum(b.polarity(), rot);
    engine.slice(base, mate, map.slice(rot));
  }
  return map;
}

}  // namespace compumat
