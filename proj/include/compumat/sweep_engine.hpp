#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace compumat {

/// Spectral evaluator behind pose_sweep, reusable across many grids of the
/// same size (the annealer re-evaluates after every pixel flip).
///
/// For a fixed rotation the normal force at lattice translation d is
///   F(d) = sum_p sum_q A[p] B'[q] K(p - q - e(d))
/// with B' the mirrored/rotated mating array and K the even pair kernel, so
/// F = IFFT( FFT(A) * conj(FFT(B')) * FFT(K) ). The kernel spans offsets up to
/// +-2(n-1); a transform length L >= 4n-3 keeps the output window alias-free.
class SweepEngine {
 public:
  class Spectrum {
   public:
    Spectrum() = default;
    explicit Spectrum(std::size_t size);
    Spectrum(const Spectrum& other);
    Spectrum& operator=(const Spectrum& other);
    Spectrum(Spectrum&&) noexcept = default;
    Spectrum& operator=(Spectrum&&) noexcept = default;

    std::complex<double>* data() noexcept { return data_.get(); }
    const std::complex<double>* data() const noexcept { return data_.get(); }
    std::size_t size() const noexcept { return size_; }

   private:
    struct Free {
      void operator()(std::complex<double>* p) const noexcept;
    };
    std::unique_ptr<std::complex<double>[], Free> data_;
    std::size_t size_ = 0;
  };

  SweepEngine(int n, double pitch_mm, double gap_mm, double moment_base, double moment_mating, bool mated);
  ~SweepEngine();
  SweepEngine(const SweepEngine&) = delete;
  SweepEngine& operator=(const SweepEngine&) = delete;

  int n() const noexcept { return n_; }
  int fft_size() const noexcept { return size_; }
  int window() const noexcept { return 2 * n_ - 1; }

  Spectrum base_spectrum(std::span<const std::int8_t> polarity) const;
  /// Spectrum of the mating array after the mate mirror and `rot` quarter turns.
  Spectrum mating_spectrum(std::span<const std::int8_t> polarity, int rot) const;

  /// Writes the (2n-1)^2 window, row-major over dy then dx.
  void slice(const Spectrum& base, const Spectrum& mating, std::span<double> out) const;

 private:
  Spectrum forward(std::span<const double> real_in) const;

  int n_;
  int size_;
  bool mated_;
  std::vector<double> kernel_hat_;  // real: the kernel is even
  struct Plans;
  static std::shared_ptr<Plans> plans_for(int size);
  std::shared_ptr<Plans> plans_;
};

/// Places the mating array after mirror (if mated) and quarter turns, on the n x n index grid.
std::vector<std::int8_t> transform_polarity(std::span<const std::int8_t> polarity, int n, int rot, bool mated);

}  // namespace compumat
