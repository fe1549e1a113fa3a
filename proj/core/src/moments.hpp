#pragma once

// Moment helpers shared by the two-band and full-lattice observables.

#include <complex>
#include <span>

#include "rabi/params.hpp"
#include "rabi/periodic.hpp"

namespace rabi {

struct BandMoments {
  double norm = 0;
  double q_mean = 0;
  double q2_mean = 0;
  double sigma_x = 0;
  double sigma_z = 0;
};

/// Quasimomentum moments and qubit expectations of a two-band state,
/// normalised by its own weight.
inline BandMoments band_moments(const TwoBandQState& st) {
  BandMoments m;
  double p0 = 0.0;
  double p1 = 0.0;
  std::complex<double> coherence = 0.0;
  for (int i = 0; i < st.n_q(); ++i) {
    const double w0 = std::norm(st(0, i));
    const double w1 = std::norm(st(1, i));
    const double q = st.q(i);
    p0 += w0;
    p1 += w1;
    // q = -2 hbar k and +2 hbar k are the same point; split it evenly
    if (i > 0) m.q_mean += q * (w0 + w1);
    m.q2_mean += q * q * (w0 + w1);
    coherence += std::conj(st(0, i)) * st(1, i);
  }
  m.norm = p0 + p1;
  if (m.norm > 0.0) {
    // free-flight p = 0 (n_b = 0 at the edge) reads half in each band
    const double edge = 0.5 * std::norm(st(0, 0));
    m.q_mean /= m.norm;
    m.q2_mean /= m.norm;
    m.sigma_x = (p0 - p1 - 2.0 * edge) / m.norm;
    m.sigma_z = 2.0 * coherence.real() / m.norm;
  }
  return m;
}

/// <psi| R |psi> / <psi|psi> for the reflection k -> (n - k) mod n of a
/// periodic grid.
inline double ring_parity(std::span<const std::complex<double>> amps) {
  const std::size_t n = amps.size();
  std::complex<double> acc = 0.0;
  double w = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += std::conj(amps[k]) * amps[(n - k) % n];
    w += std::norm(amps[k]);
  }
  return w > 0.0 ? acc.real() / w : 0.0;
}

/// N = (m omega / 2 hbar)(<x^2> + <q^2>/(m omega)^2) - 1/2
inline double excitation_from_moments(const ExperimentParams& p, double x2, double q2) {
  const double mw = p.mass() * p.omega();
  return mw / (2.0 * p.hbar()) * (x2 + q2 / (mw * mw)) - 0.5;
}

}  // namespace rabi
