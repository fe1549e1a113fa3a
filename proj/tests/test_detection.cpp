#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "oracle.hpp"
#include "rabi/detection.hpp"
#include "rabi/lattice.hpp"
#include "rabi/qrm_fock.hpp"

using namespace rabi;

namespace {

std::vector<double> axis(double half, double dx) {
  std::vector<double> x;
  const int n = static_cast<int>(std::lround(2 * half / dx));
  for (int i = 0; i <= n; ++i) x.push_back(-half + i * dx);
  return x;
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> two_peaks(const std::vector<double>& x, double sep, double s) {
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = (x[i] - 0.5 * sep) / s;
    const double b = (x[i] + 0.5 * sep) / s;
    d[i] = std::exp(-0.5 * a * a) + std::exp(-0.5 * b * b);
  }
  return d;
}

}  // namespace

TEST(Psf, ZeroWidthIsIdentity) {
  const auto x = axis(10e-6, 0.1e-6);
  const auto d = two_peaks(x, 4e-6, 0.5e-6);
  EXPECT_EQ(psf_convolve(x, d, 0.0), d);
}

TEST(Psf, PreservesMass) {
  const auto x = axis(30e-6, 0.05e-6);
  const auto d = two_peaks(x, 20e-6, 0.5e-6);  // close to the edge on purpose
  EXPECT_NEAR(sum(psf_convolve(x, d)), sum(d), 1e-12 * sum(d));
}

TEST(Psf, DeltaBecomesGaussianOfQuotedWidth) {
  const auto x = axis(30e-6, 0.01e-6);
  std::vector<double> d(x.size(), 0.0);
  d[x.size() / 2] = 1.0;
  const auto out = psf_convolve(x, d, 6.5e-6);
  const double peak = *std::max_element(out.begin(), out.end());
  int lo = -1, hi = -1;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] >= 0.5 * peak) {
      if (lo < 0) lo = static_cast<int>(i);
      hi = static_cast<int>(i);
    }
  }
  EXPECT_NEAR(x[hi] - x[lo], 6.5e-6, 0.03e-6);
  EXPECT_NEAR(fwhm_to_sigma(6.5e-6), 6.5e-6 / (2 * std::sqrt(2 * std::log(2.0))), 1e-18);
}

TEST(Psf, Errors) {
  const auto x = axis(2e-6, 0.1e-6);
  std::vector<double> d(x.size(), 1.0);
  EXPECT_THROW(psf_convolve(x, d, 6.5e-6), DomainError);
  std::vector<double> short_d(3, 1.0);
  EXPECT_THROW(psf_convolve(x, short_d, 1e-6), ParameterError);
  auto bent = x;
  bent[5] += 0.03e-6;
  EXPECT_THROW(psf_convolve(bent, d, 1e-6), ParameterError);
}

TEST(Psf, LocalMaxima) {
  const std::vector<double> d{0, 1, 0, 0.5, 0, 1e-5, 0};
  EXPECT_EQ(local_maxima(d), (std::vector<int>{1, 3}));
}

TEST(Psf, MergingSeparationSeparatesResolvedFromMerged) {
  const double s = 0.5e-6;
  const double d_merge = merging_separation(s, 6.5e-6);
  const double s_psf = fwhm_to_sigma(6.5e-6);
  EXPECT_NEAR(d_merge, 2 * std::sqrt(s * s + s_psf * s_psf), 1e-18);
  const auto x = axis(40e-6, 0.02e-6);
  EXPECT_EQ(local_maxima(psf_convolve(x, two_peaks(x, 0.95 * d_merge, s))).size(), 1u);
  EXPECT_EQ(local_maxima(psf_convolve(x, two_peaks(x, 1.05 * d_merge, s))).size(), 2u);
}

TEST(Psf, QrmBranchesResolvedOnlyAwayFromTurningPoints) {
  // Two branches at +-x_m0 sin(omega t) with width x_ho / 2 each.
  const auto p = ExperimentParams::from_hz(346.0, 0.0);
  QrmHamiltonian h(p, choose_truncation(p));
  const auto psi0 = prepare_state(InitialStateKind::qubit_ground, h.n_max());
  const auto x = axis(25e-6, 0.05e-6);
  const double sigma = 0.5 * oracle::x_ho(p.omega());
  const double d_merge = merging_separation(sigma);
  for (double wt : {0.3, 0.8, std::numbers::pi / 2}) {
    const double sep = 2 * oracle::x_m0(p.omega()) * std::sin(wt);
    const auto rho = position_density(evolve(h, psi0, wt / p.omega()), p, x);
    const auto peaks = local_maxima(psf_convolve(x, rho));
    EXPECT_EQ(peaks.size(), sep > d_merge ? 2u : 1u) << "omega t = " << wt;
  }
}
