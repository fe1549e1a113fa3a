#include "rabi/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "fft.hpp"
#include "moments.hpp"
#include "splitting.hpp"

namespace rabi {

namespace {

constexpr int kEdgeCells = 3;
constexpr double kEdgeTolerance = 1e-12;

}  // namespace

LatticeGridState::LatticeGridState(int n_x, double half_extent)
    : half_extent_(half_extent), psi_(static_cast<std::size_t>(n_x)) {
  if (n_x < 16) throw GridError("lattice grid needs at least 16 points");
  if (!(half_extent > 0.0)) throw ParameterError("lattice half extent must be positive");
}

double LatticeGridState::norm() const {
  return std::accumulate(psi_.begin(), psi_.end(), 0.0,
                         [](double acc, cplx c) { return acc + std::norm(c); });
}

LatticeModel::LatticeModel(const ExperimentParams& params, int n_x, double half_extent)
    : params_(params), n_x_(n_x) {
  if (n_x < 16 || n_x % 2 != 0) throw GridError("lattice n_x must be even and >= 16");
  const double period = params.lambda() / 4.0;
  half_extent_ = std::max(1.0, std::round(half_extent / period)) * period;
  if (dx() > period / 10.0) {
    throw GridError("lattice grid too coarse: dx = " + std::to_string(dx()) +
                    " m exceeds a tenth of the lattice period");
  }
  const double x_m0 = characteristic_scales(params).x_m0;
  if (half_extent_ < 3.0 * x_m0) {
    throw GridError("lattice box +-" + std::to_string(half_extent_) + " m smaller than 3 x_m0");
  }
}

double LatticeModel::dp() const {
  return std::numbers::pi * params_.hbar() / half_extent_;
}

double LatticeModel::p(int j) const { return detail::fft_index(j, n_x_) * dp(); }

int LatticeModel::points_per_zone() const {
  return static_cast<int>(std::lround(4.0 * params_.hbar() * params_.k() / dp()));
}

double LatticeModel::potential_rate(int i) const {
  const double xi = x(i);
  const double w = params_.omega();
  const double trap = 0.5 * params_.mass() * w * w * xi * xi;
  const double lattice = 0.5 * params_.depth() * std::cos(4.0 * params_.k() * xi);
  return (trap + lattice) / params_.hbar();
}

double LatticeModel::kinetic_rate(int j) const {
  const double pj = p(j);
  return pj * pj / (2.0 * params_.mass() * params_.hbar());
}

double LatticeModel::max_rate() const {
  return std::max({params_.omega(), params_.omega_q(), params_.g()});
}

LatticePropagator::LatticePropagator(const LatticeModel& model, double dt, SplitOrder order)
    : model_(model), dt_(dt), order_(order), fft_(std::make_unique<detail::FftPlan>(model.n_x())) {
  if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
  if (dt * model.max_rate() > 0.02 * (1.0 + 1e-12)) {
    throw StepSizeError("time step " + std::to_string(dt) + " s exceeds 0.02 rad per step");
  }
}

LatticePropagator::~LatticePropagator() = default;
LatticePropagator::LatticePropagator(LatticePropagator&&) noexcept = default;
LatticePropagator& LatticePropagator::operator=(LatticePropagator&&) noexcept = default;

void LatticePropagator::set_step(double h) {
  if (h == h_) return;
  h_ = h;
  const int n = model_.n_x();
  const auto scheme = detail::splitting_scheme(order_);
  std::vector<double> pot(n);
  std::vector<double> kin(n);
  for (int i = 0; i < n; ++i) {
    pot[i] = model_.potential_rate(i);
    kin[i] = model_.kinetic_rate(i);
  }
  potential_kicks_.assign(scheme.a.size(), std::vector<cplx>(n));
  for (std::size_t s = 0; s < scheme.a.size(); ++s) {
    for (int i = 0; i < n; ++i) potential_kicks_[s][i] = std::polar(1.0, -scheme.a[s] * h * pot[i]);
  }
  kinetic_kicks_.assign(scheme.b.size(), std::vector<cplx>(n));
  for (std::size_t s = 0; s < scheme.b.size(); ++s) {
    for (int j = 0; j < n; ++j) kinetic_kicks_[s][j] = std::polar(1.0 / n, -scheme.b[s] * h * kin[j]);
  }
}

void LatticePropagator::step(LatticeGridState& state) {
  auto psi = state.amplitudes();
  auto buf = fft_->data();
  std::copy(psi.begin(), psi.end(), buf.begin());
  for (std::size_t s = 0; s < kinetic_kicks_.size(); ++s) {
    const auto& pot = potential_kicks_[s];
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= pot[i];
    fft_->forward();
    const auto& kin = kinetic_kicks_[s];
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= kin[j];
    fft_->backward();
  }
  const auto& last = potential_kicks_.back();
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = buf[i] * last[i];
}

void LatticePropagator::check_domain(const LatticeGridState& state) {
  const int n = state.n_x();
  double edge = 0.0;
  for (int i = 0; i < kEdgeCells; ++i) {
    edge += std::norm(state[i]) + std::norm(state[n - 1 - i]);
  }
  if (edge > kEdgeTolerance * state.norm()) {
    throw DomainError("wave packet reached the edge of the +-" +
                      std::to_string(state.half_extent()) + " m box");
  }
}

void LatticePropagator::advance(LatticeGridState& state, double t) {
  if (state.n_x() != model_.n_x()) throw GridError("state grid does not match the model");
  if (t < 0.0) throw StepSizeError("lattice propagation only runs forward in time");
  if (t == 0.0) return;
  const auto steps = static_cast<long>(std::ceil(t / dt_ - 1e-9));
  set_step(t / static_cast<double>(steps));
  for (long s = 0; s < steps; ++s) step(state);
  check_domain(state);
}

std::vector<cplx> LatticePropagator::momentum_amplitudes(const LatticeGridState& state) {
  const int n = state.n_x();
  auto buf = fft_->data();
  std::copy(state.amplitudes().begin(), state.amplitudes().end(), buf.begin());
  fft_->forward();
  // The grid starts at -L, which leaves a factor exp(i p_j L / hbar) = (-1)^j.
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> phi(n);
  for (int j = 0; j < n; ++j) {
    const double sign = (detail::fft_index(j, n) % 2 == 0) ? 1.0 : -1.0;
    phi[j] = sign * scale * buf[j];
  }
  return phi;
}

double LatticePropagator::mean_momentum(const LatticeGridState& state) {
  const auto phi = momentum_amplitudes(state);
  double w = 0.0;
  double p1 = 0.0;
  for (int j = 0; j < model_.n_x(); ++j) {
    const double pj = std::norm(phi[j]);
    w += pj;
    p1 += model_.p(j) * pj;
  }
  return p1 / w;
}

ObservableRecord LatticePropagator::observe(const LatticeGridState& state, double t) {
  const ExperimentParams& par = model_.params();
  const int n = state.n_x();
  const double two_hk = 2.0 * par.hbar() * par.k();
  const int zone = model_.points_per_zone();

  double w = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double pot = 0.0;
  for (int i = 0; i < n; ++i) {
    const double pi = std::norm(state[i]);
    const double xi = model_.x(i);
    w += pi;
    x1 += xi * pi;
    x2 += xi * xi * pi;
    pot += model_.potential_rate(i) * pi;
  }

  const auto phi = momentum_amplitudes(state);
  double kin = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double p_neg = 0.0;
  cplx coherence = 0.0;
  for (int j = 0; j < n; ++j) {
    const double wj = std::norm(phi[j]);
    const int idx = detail::fft_index(j, n);
    const double pj = model_.p(j);
    kin += model_.kinetic_rate(j) * wj;
    // Band mapping: p <= 0 reads as n_b = 0, p > 0 as n_b = 1; Rabi-frame
    // quasimomentum q = 2 hbar k (2 n_b - 1) - p folded into the zone.
    const int band = idx > 0 ? 1 : 0;
    double q = two_hk * (2 * band - 1) - pj;
    q -= 2.0 * two_hk * std::floor((q + two_hk) / (2.0 * two_hk));
    // zone edge counts half on each side
    if (std::abs(std::abs(q) - two_hk) > 1e-9 * two_hk) q1 += q * wj;
    q2 += q * q * wj;
    if (band == 0) p_neg += idx == 0 ? 0.5 * wj : wj;
    if (idx <= 0 && idx > -zone) {
      const int partner = (j + zone) % n;  // p + 4 hbar k
      coherence += std::conj(phi[j]) * phi[partner];
    }
  }

  ObservableRecord rec;
  rec.t = t;
  rec.norm = w;
  rec.x = -x1 / w;
  rec.q = q1 / w;
  rec.sigma_x = (2.0 * p_neg - w) / w;
  rec.sigma_z = 2.0 * coherence.real() / w;
  rec.parity = ring_parity(state.amplitudes());
  rec.N = excitation_from_moments(par, x2 / w, q2 / w);
  rec.energy = par.hbar() * (kin + pot) / w;
  return rec;
}

LatticeGridState prepare_lattice_initial(InitialStateKind kind, const LatticeModel& model) {
  const ExperimentParams& par = model.params();
  LatticeGridState st(model.n_x(), model.half_extent());
  const double r = std::numbers::sqrt2 / 2.0;
  double w0 = 0.0;
  double w1 = 0.0;
  switch (kind) {
    case InitialStateKind::band_minus2hk: w0 = 1.0; break;
    case InitialStateKind::band_plus2hk: w1 = 1.0; break;
    case InitialStateKind::qubit_excited: w0 = r; w1 = r; break;
    case InitialStateKind::qubit_ground: w0 = r; w1 = -r; break;
  }
  const double ell = par.oscillator_length();
  const double k2 = 2.0 * par.k();
  double total = 0.0;
  for (int i = 0; i < st.n_x(); ++i) {
    const double xi = st.x(i);
    const double env = std::exp(-0.5 * xi * xi / (ell * ell));
    st[i] = env * (w0 * std::polar(1.0, -k2 * xi) + w1 * std::polar(1.0, k2 * xi));
    total += std::norm(st[i]);
  }
  const double scale = 1.0 / std::sqrt(total);
  for (cplx& c : st.amplitudes()) c *= scale;
  return st;
}

LatticeGridState evolve_lattice(const LatticeGridState& state, const ExperimentParams& params,
                                double t, double dt, SplitOrder order) {
  LatticePropagator prop(LatticeModel(params, state.n_x(), state.half_extent()), dt, order);
  LatticeGridState out = state;
  prop.advance(out, t);
  return out;
}

Trajectory evolve_lattice_series(const LatticeModel& model, const LatticeGridState& state0,
                                 std::span<const double> times, double dt,
                                 SplitOrder order) {
  LatticePropagator prop(model, dt, order);
  LatticeGridState st = state0;
  Trajectory out;
  out.reserve(times.size());
  double now = 0.0;
  for (double t : times) {
    if (t < now) throw std::invalid_argument("sample times must be non-decreasing from 0");
    prop.advance(st, t - now);
    now = t;
    out.push_back(prop.observe(st, t));
  }
  return out;
}

BlochProjection bloch_project(const LatticeGridState& state, LatticePropagator& prop) {
  const LatticeModel& model = prop.model();
  const int n = model.n_x();
  const int zone = model.points_per_zone();
  const double two_hk = 2.0 * model.params().hbar() * model.params().k();
  const auto phi = prop.momentum_amplitudes(state);
  auto slot = [n](int idx) { return ((idx % n) + n) % n; };

  BlochProjection out{TwoBandQState(zone, two_hk), 0.0};
  // q_i = -2 hbar k + i dp. n_b = 0 sits at p = -i dp, n_b = 1 at p = 4 hbar k - i dp.
  for (int i = 0; i < zone; ++i) {
    out.state(0, i) = phi[slot(-i)];
    out.state(1, i) = phi[slot(zone - i)];
  }
  out.captured = out.state.norm();
  return out;
}

std::vector<double> lattice_band_energies(double q, const ExperimentParams& params, int harmonics) {
  const int dim = 2 * harmonics + 1;
  const double hk = params.hbar() * params.k();
  const double m = params.mass();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    const int n = a - harmonics;
    const double p = q - 2.0 * hk + 4.0 * hk * n;
    h(a, a) = p * p / (2.0 * m);
    if (a + 1 < dim) {
      h(a, a + 1) = 0.25 * params.depth();
      h(a + 1, a) = 0.25 * params.depth();
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd e = solver.eigenvalues();
  return {e.data(), e.data() + e.size()};
}

}  // namespace rabi
