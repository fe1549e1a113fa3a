#include "rabi/qrm_fock.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace rabi {

namespace {

constexpr QubitLevel kE = QubitLevel::excited;
constexpr QubitLevel kG = QubitLevel::ground;

void require_n_max(int n_max) {
  if (n_max < 1) throw ParameterError("n_max must be at least 1");
}

}  // namespace

FockSpinorState::FockSpinorState(int n_max) : n_max_(n_max) {
  require_n_max(n_max);
  amps_ = Eigen::VectorXcd::Zero(2 * (n_max + 1));
}

FockSpinorState::FockSpinorState(int n_max, Eigen::VectorXcd amplitudes)
    : n_max_(n_max), amps_(std::move(amplitudes)) {
  require_n_max(n_max);
  if (amps_.size() != 2 * (n_max + 1)) {
    throw std::invalid_argument("amplitude vector does not match 2 (n_max + 1)");
  }
}

double FockSpinorState::tail_mass(int width) const {
  double mass = 0.0;
  for (int n = std::max(0, n_max_ - width + 1); n <= n_max_; ++n) {
    mass += std::norm((*this)(kE, n)) + std::norm((*this)(kG, n));
  }
  return mass;
}

cplx FockSpinorState::overlap(const FockSpinorState& other) const {
  if (other.n_max_ != n_max_) throw std::invalid_argument("overlap: n_max mismatch");
  return amps_.dot(other.amps_);  // Eigen's dot conjugates the left operand
}

QrmHamiltonian::QrmHamiltonian(const ExperimentParams& params, int n_max, CouplingGauge gauge,
                               bool include_zero_point)
    : params_(params), n_max_(n_max), gauge_(gauge) {
  require_n_max(n_max);
  const Eigen::Index dim = 2 * (n_max + 1);
  const double w = params.omega();
  const double wq = params.omega_q();
  const double g = params.g();
  const double zero_point = include_zero_point ? 0.5 * w : 0.0;

  matrix_ = Eigen::MatrixXcd::Zero(dim, dim);
  for (int n = 0; n <= n_max; ++n) {
    const auto e = FockSpinorState::index(kE, n, n_max);
    const auto gi = FockSpinorState::index(kG, n, n_max);
    matrix_(e, e) = w * n + zero_point + 0.5 * wq;
    matrix_(gi, gi) = w * n + zero_point - 0.5 * wq;
  }

  // sigma_x couples |e,n> <-> |g,n'>. <n+1| a^dagger |n> = sqrt(n+1).
  //   phase quadrature:    <n+1| i(a^dagger - a) |n> =  i sqrt(n+1)
  //   position quadrature: <n+1| (a + a^dagger) |n>  =    sqrt(n+1)
  for (int n = 0; n < n_max; ++n) {
    const double s = std::sqrt(static_cast<double>(n + 1));
    const cplx up = gauge == CouplingGauge::phase_quadrature ? cplx(0.0, g * s) : cplx(g * s, 0.0);
    for (auto [from, to] : {std::pair{kE, kG}, std::pair{kG, kE}}) {
      const auto col = FockSpinorState::index(from, n, n_max);
      const auto row = FockSpinorState::index(to, n + 1, n_max);
      matrix_(row, col) = up;
      matrix_(col, row) = std::conj(up);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("QrmHamiltonian: eigendecomposition failed");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

double QrmHamiltonian::energy(const FockSpinorState& psi) const {
  const cplx e = psi.amplitudes().dot(matrix_ * psi.amplitudes());
  return params_.hbar() * e.real();
}

QrmHamiltonian build_qrm_hamiltonian(const ExperimentParams& params, int n_max,
                                     CouplingGauge gauge) {
  return QrmHamiltonian(params, n_max, gauge);
}

int choose_truncation(const ExperimentParams& params, double safety) {
  if (!(safety >= 1.0)) throw ParameterError("truncation safety factor must be >= 1");
  const double n_peak = 4.0 * params.g_over_omega() * params.g_over_omega();
  return static_cast<int>(std::ceil(n_peak + safety * std::sqrt(n_peak) + 20.0));
}

FockSpinorState prepare_state(InitialStateKind kind, int n_max) {
  FockSpinorState psi(n_max);
  const double r = std::numbers::sqrt2 / 2.0;
  switch (kind) {
    case InitialStateKind::qubit_ground:
      psi(kG, 0) = 1.0;
      break;
    case InitialStateKind::qubit_excited:
      psi(kE, 0) = 1.0;
      break;
    case InitialStateKind::band_minus2hk:  // |n_b=0> = (|e> + |g>)/sqrt2
      psi(kE, 0) = r;
      psi(kG, 0) = r;
      break;
    case InitialStateKind::band_plus2hk:  // |n_b=1> = (|e> - |g>)/sqrt2
      psi(kE, 0) = r;
      psi(kG, 0) = -r;
      break;
  }
  return psi;
}

FockSpinorState prepare_coherent(cplx alpha, Branch branch, int n_max) {
  FockSpinorState psi(n_max);
  const double r = std::numbers::sqrt2 / 2.0;
  const double sign = branch == Branch::plus ? 1.0 : -1.0;
  cplx c = std::exp(-0.5 * std::norm(alpha));
  for (int n = 0; n <= n_max; ++n) {
    psi(kE, n) = r * c;
    psi(kG, n) = sign * r * c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  // Whatever the cutoff dropped shows up as a norm deficit.
  if (1.0 - psi.norm() > 1e-10) {
    throw TruncationError("coherent state with |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                          " does not fit n_max = " + std::to_string(n_max));
  }
  check_truncation(psi);
  return psi;
}

void check_truncation(const FockSpinorState& psi, double tolerance) {
  const double tail = psi.tail_mass();
  if (tail > tolerance) {
    throw TruncationError("Fock truncation inadequate: tail mass " + std::to_string(tail) +
                          " at n_max = " + std::to_string(psi.n_max()));
  }
}

QrmPropagator::QrmPropagator(const QrmHamiltonian& h, const FockSpinorState& psi0) : h_(&h) {
  if (psi0.n_max() != h.n_max()) {
    throw std::invalid_argument("evolve: state and Hamiltonian have different n_max");
  }
  coefficients_ = h.eigenvectors().adjoint() * psi0.amplitudes();
}

FockSpinorState QrmPropagator::at(double t) const {
  const Eigen::VectorXd& e = h_->eigenvalues();
  Eigen::VectorXcd phased(coefficients_.size());
  for (Eigen::Index i = 0; i < phased.size(); ++i) {
    phased[i] = coefficients_[i] * std::polar(1.0, -e[i] * t);
  }
  return FockSpinorState(h_->n_max(), h_->eigenvectors() * phased);
}

FockSpinorState evolve(const QrmHamiltonian& h, const FockSpinorState& psi0, double t) {
  return QrmPropagator(h, psi0).at(t);
}

Eigen::VectorXd parity_diagonal(int n_max) {
  Eigen::VectorXd p(2 * (n_max + 1));
  for (int n = 0; n <= n_max; ++n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    p[FockSpinorState::index(kE, n, n_max)] = sign;
    p[FockSpinorState::index(kG, n, n_max)] = -sign;
  }
  return p;
}

ObservableRecord observables(const FockSpinorState& psi, const QrmHamiltonian& h, double t) {
  const int n_max = psi.n_max();
  const ExperimentParams& p = h.params();
  ObservableRecord rec;
  rec.t = t;

  cplx a_mean = 0.0;
  cplx coherence = 0.0;  // sum_n conj(c_e,n) c_g,n
  for (int n = 0; n <= n_max; ++n) {
    const cplx ce = psi(kE, n);
    const cplx cg = psi(kG, n);
    const double pe = std::norm(ce);
    const double pg = std::norm(cg);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    rec.N += n * (pe + pg);
    rec.sigma_z += pe - pg;
    rec.parity += sign * (pe - pg);
    rec.norm += pe + pg;
    coherence += std::conj(ce) * cg;
    if (n < n_max) {
      const double s = std::sqrt(static_cast<double>(n + 1));
      a_mean += s * (std::conj(ce) * psi(kE, n + 1) + std::conj(cg) * psi(kG, n + 1));
    }
  }
  rec.sigma_x = 2.0 * coherence.real();
  // x = sqrt(hbar/2m omega)(a + a^dagger), q = i sqrt(hbar m omega/2)(a^dagger - a)
  const double x_unit = std::sqrt(p.hbar() / (2.0 * p.mass() * p.omega()));
  const double q_unit = std::sqrt(p.hbar() * p.mass() * p.omega() / 2.0);
  rec.x = 2.0 * x_unit * a_mean.real();
  rec.q = 2.0 * q_unit * a_mean.imag();
  rec.energy = h.energy(psi);
  return rec;
}

Trajectory evolve_series(const QrmHamiltonian& h, const FockSpinorState& psi0,
                         std::span<const double> times) {
  QrmPropagator prop(h, psi0);
  Trajectory out;
  out.reserve(times.size());
  for (double t : times) out.push_back(observables(prop.at(t), h, t));
  return out;
}

std::vector<double> position_density(const FockSpinorState& psi, const ExperimentParams& params,
                                     std::span<const double> x) {
  const double ell = params.oscillator_length();
  const double norm0 = std::pow(std::numbers::pi, -0.25) / std::sqrt(ell);
  const int n_max = psi.n_max();
  std::vector<double> rho(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i] / ell;
    // Normalised Hermite functions by the stable three-term recurrence.
    double prev = 0.0;
    double cur = norm0 * std::exp(-0.5 * xi * xi);
    cplx we = 0.0;
    cplx wg = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      we += psi(kE, n) * cur;
      wg += psi(kG, n) * cur;
      const double next = std::sqrt(2.0 / (n + 1)) * xi * cur - std::sqrt(double(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
    }
    rho[i] = std::norm(we) + std::norm(wg);
  }
  return rho;
}

}  // namespace rabi
