#pragma once

// Owning wrapper around an in-place 1D complex FFTW plan pair.

#include <complex>
#include <span>

namespace rabi::detail {

class FftPlan {
 public:
  explicit FftPlan(int n);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& other) noexcept;
  FftPlan& operator=(FftPlan&& other) noexcept;

  int size() const { return n_; }
  std::span<std::complex<double>> data() { return {buffer_, static_cast<std::size_t>(n_)}; }

  /// sum_m f_m exp(-2 pi i j m / n), unnormalised.
  void forward();
  /// sum_j F_j exp(+2 pi i j m / n), unnormalised.
  void backward();

 private:
  void release() noexcept;

  int n_ = 0;
  std::complex<double>* buffer_ = nullptr;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
};

/// FFTW frequency index for slot j of an n-point transform: 0..n/2-1, -n/2..-1.
inline int fft_index(int j, int n) { return j < n / 2 ? j : j - n; }

}  // namespace rabi::detail
