#include "rabi/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "moments.hpp"
#include "splitting.hpp"

namespace rabi {

namespace {

constexpr double kMaxPhasePerStep = 0.02;
constexpr int kObservableOversample = 4;

double envelope_width_sq(const ExperimentParams& p) { return p.hbar() * p.mass() * p.omega(); }

}  // namespace

TwoBandQState::TwoBandQState(int n_q, double zone_halfwidth)
    : n_q_(n_q), zone_halfwidth_(zone_halfwidth), amps_(2 * static_cast<std::size_t>(n_q)) {
  if (n_q < 2) throw GridError("two-band grid needs at least 2 points");
  if (!(zone_halfwidth > 0.0)) throw ParameterError("zone half-width must be positive");
}

double TwoBandQState::norm() const {
  return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                         [](double acc, cplx c) { return acc + std::norm(c); });
}

PeriodicRabiModel::PeriodicRabiModel(const ExperimentParams& params, int n_q)
    : params_(params), n_q_(n_q) {
  if (n_q < 64) throw GridError("periodic model needs n_q >= 64, got " + std::to_string(n_q));
  // The conjugate position grid spans +-n_q lambda/8; it has to hold the
  // classical oscillation with room to spare.
  const double half_extent = n_q * params.lambda() / 8.0;
  const double x_m0 = characteristic_scales(params).x_m0;
  if (half_extent < 2.0 * x_m0) {
    throw GridError("periodic grid too coarse: position range +-" + std::to_string(half_extent) +
                    " m does not cover 2 x_m0 = " + std::to_string(2.0 * x_m0) + " m");
  }
}

double PeriodicRabiModel::x(int j) const {
  return detail::fft_index(j, 2 * n_q_) * params_.lambda() / 8.0;
}

Eigen::Matrix2d PeriodicRabiModel::q_block(int i) const {
  const double qi = q(i);
  const double m = params_.mass();
  const double hbar = params_.hbar();
  const double kinetic = qi * qi / (2.0 * m * hbar);
  const double band = 2.0 * params_.k() * qi / m;  // (2 hbar k / m) q / hbar
  const double coupling = params_.depth() / (4.0 * hbar);
  Eigen::Matrix2d b;
  b << kinetic + band, coupling, coupling, kinetic - band;
  return b;
}

double PeriodicRabiModel::trap_rate(int j) const {
  const double xj = x(j);
  return 0.5 * params_.mass() * params_.omega() * params_.omega() * xj * xj / params_.hbar();
}

double PeriodicRabiModel::max_rate() const {
  return std::max({params_.omega(), params_.omega_q(), params_.g()});
}

PeriodicRabiModel build_two_band_model(const ExperimentParams& params, int n_q) {
  return PeriodicRabiModel(params, n_q);
}

PeriodicPropagator::PeriodicPropagator(const PeriodicRabiModel& model, double dt,
                                       SplitOrder order)
    : model_(model), dt_(dt), order_(order), fft_(std::make_unique<detail::FftPlan>(2 * model.n_q())) {
  if (!(dt > 0.0)) throw StepSizeError("time step must be positive");
  if (dt * model.max_rate() > kMaxPhasePerStep * (1.0 + 1e-12)) {
    throw StepSizeError("time step " + std::to_string(dt) + " s exceeds 0.02 rad per step at rate " +
                        std::to_string(model.max_rate()) + " rad/s");
  }
}

PeriodicPropagator::~PeriodicPropagator() = default;
PeriodicPropagator::PeriodicPropagator(PeriodicPropagator&&) noexcept = default;
PeriodicPropagator& PeriodicPropagator::operator=(PeriodicPropagator&&) noexcept = default;

void PeriodicPropagator::set_step(double h) {
  if (h == h_) return;
  h_ = h;
  const int n_q = model_.n_q();
  const auto scheme = detail::splitting_scheme(order_);
  std::vector<Eigen::Matrix2d> blocks(n_q);
  for (int i = 0; i < n_q; ++i) blocks[i] = model_.q_block(i);
  q_kicks_.assign(scheme.a.size(), std::vector<Eigen::Matrix2cd>(n_q));
  for (std::size_t s = 0; s < scheme.a.size(); ++s) {
    const double tau = scheme.a[s] * h;
    for (int i = 0; i < n_q; ++i) {
      // B = a I + b sigma_3 + v sigma_1  =>  exp(-i B tau) in closed form.
      const Eigen::Matrix2d& blk = blocks[i];
      const double a = 0.5 * (blk(0, 0) + blk(1, 1));
      const double b = 0.5 * (blk(0, 0) - blk(1, 1));
      const double v = blk(0, 1);
      const double r = std::hypot(b, v);
      const double c = std::cos(r * tau);
      const double sn = r > 0.0 ? std::sin(r * tau) / r : tau;
      const cplx ph = std::polar(1.0, -a * tau);
      const cplx mi(0.0, -1.0);
      Eigen::Matrix2cd u;
      u << ph * (c + mi * sn * b), ph * (mi * sn * v), ph * (mi * sn * v), ph * (c - mi * sn * b);
      q_kicks_[s][i] = u;
    }
  }
  const int n = 2 * n_q;
  trap_kicks_.assign(scheme.b.size(), std::vector<cplx>(n));
  for (std::size_t s = 0; s < scheme.b.size(); ++s) {
    for (int j = 0; j < n; ++j) {
      trap_kicks_[s][j] = std::polar(1.0 / n, -model_.trap_rate(j) * scheme.b[s] * h);
    }
  }
}

void PeriodicPropagator::step(TwoBandQState& state) {
  const int n_q = model_.n_q();
  auto apply_q = [&](const std::vector<Eigen::Matrix2cd>& kick) {
    for (int i = 0; i < n_q; ++i) {
      const cplx c0 = state(0, i);
      const cplx c1 = state(1, i);
      const Eigen::Matrix2cd& u = kick[i];
      state(0, i) = u(0, 0) * c0 + u(0, 1) * c1;
      state(1, i) = u(1, 0) * c0 + u(1, 1) * c1;
    }
  };
  auto buf = fft_->data();
  auto amps = state.amplitudes();
  for (std::size_t s = 0; s < trap_kicks_.size(); ++s) {
    apply_q(q_kicks_[s]);
    std::copy(amps.begin(), amps.end(), buf.begin());
    fft_->backward();  // to conjugate position
    const auto& trap = trap_kicks_[s];
    for (std::size_t j = 0; j < buf.size(); ++j) buf[j] *= trap[j];
    fft_->forward();
    std::copy(buf.begin(), buf.end(), amps.begin());
  }
  apply_q(q_kicks_.back());
}

void PeriodicPropagator::advance(TwoBandQState& state, double t) {
  if (state.n_q() != model_.n_q()) throw GridError("state grid does not match the model");
  if (t < 0.0) throw StepSizeError("periodic propagation only runs forward in time");
  if (t == 0.0) return;
  const auto steps = static_cast<long>(std::ceil(t / dt_ - 1e-9));
  set_step(t / static_cast<double>(steps));
  for (long s = 0; s < steps; ++s) step(state);
}

ObservableRecord PeriodicPropagator::observe(const TwoBandQState& state, double t) {
  const ExperimentParams& p = model_.params();
  const int n = 2 * model_.n_q();
  const BandMoments coarse = band_moments(state);

  auto buf = fft_->data();
  auto amps = state.amplitudes();
  std::copy(amps.begin(), amps.end(), buf.begin());
  fft_->backward();
  double w = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double trap = 0.0;
  for (int j = 0; j < n; ++j) {
    const double pj = std::norm(buf[j]);
    const double xj = model_.x(j);
    w += pj;
    x1 += xj * pj;
    x2 += xj * xj * pj;
    trap += model_.trap_rate(j) * pj;
  }

  double block_energy = 0.0;
  for (int i = 0; i < model_.n_q(); ++i) {
    const Eigen::Matrix2d blk = model_.q_block(i);
    const cplx c0 = state(0, i);
    const cplx c1 = state(1, i);
    block_energy += blk(0, 0) * std::norm(c0) + blk(1, 1) * std::norm(c1) +
                    2.0 * blk(0, 1) * (std::conj(c0) * c1).real();
  }

  // The folded q and the band split jump at the zone edge, so their grid sums
  // converge only as dq^2. Evaluate them on the band-limited interpolant,
  // kObservableOversample times finer, by zero-padding in position.
  const int fine_n = kObservableOversample * n;
  if (!fine_fft_) fine_fft_ = std::make_unique<detail::FftPlan>(fine_n);
  auto fine = fine_fft_->data();
  std::fill(fine.begin(), fine.end(), cplx(0.0));
  for (int j = 0; j < n; ++j) {
    const int idx = detail::fft_index(j, n);
    fine[idx >= 0 ? idx : idx + fine_n] = buf[j];
  }
  fine_fft_->forward();
  TwoBandQState dense(kObservableOversample * model_.n_q(), state.zone_halfwidth());
  std::copy(fine.begin(), fine.end(), dense.amplitudes().begin());
  const BandMoments bm = band_moments(dense);

  ObservableRecord rec;
  rec.t = t;
  rec.norm = coarse.norm;
  rec.q = bm.q_mean;
  rec.sigma_x = bm.sigma_x;
  rec.sigma_z = bm.sigma_z;
  rec.parity = ring_parity(amps);
  rec.x = x1 / w;
  rec.N = excitation_from_moments(p, x2 / w, bm.q2_mean);
  rec.energy = p.hbar() * (block_energy + trap * coarse.norm / w);
  return rec;
}

TwoBandQState prepare_periodic_initial(InitialStateKind kind, const ExperimentParams& params,
                                       int n_q) {
  TwoBandQState st(n_q, 2.0 * params.hbar() * params.k());
  const double width_sq = envelope_width_sq(params);
  const double edge = st.zone_halfwidth();
  // Mass of exp(-q^2/width_sq) beyond |q| = edge.
  const double outside = std::erfc(edge / std::sqrt(width_sq));
  if (outside > 1e-8) {
    throw GridError("initial envelope is cut by the zone edge (outside mass " +
                    std::to_string(outside) + "); g/omega too small for the periodic model");
  }

  const double r = std::numbers::sqrt2 / 2.0;
  double w0 = 0.0;
  double w1 = 0.0;
  switch (kind) {
    case InitialStateKind::band_minus2hk: w0 = 1.0; break;
    case InitialStateKind::band_plus2hk: w1 = 1.0; break;
    case InitialStateKind::qubit_excited: w0 = r; w1 = r; break;
    case InitialStateKind::qubit_ground: w0 = r; w1 = -r; break;
  }
  double total = 0.0;
  for (int i = 0; i < n_q; ++i) {
    const double q = st.q(i);
    const double env = std::exp(-0.5 * q * q / width_sq);
    st(0, i) = w0 * env;
    st(1, i) = w1 * env;
    total += env * env;
  }
  const double scale = 1.0 / std::sqrt(total);
  for (cplx& c : st.amplitudes()) c *= scale;
  return st;
}

TwoBandQState evolve_periodic(const TwoBandQState& state, const ExperimentParams& params, double t,
                              double dt, SplitOrder order) {
  PeriodicPropagator prop(PeriodicRabiModel(params, state.n_q()), dt, order);
  TwoBandQState out = state;
  prop.advance(out, t);
  return out;
}

ObservableRecord periodic_observables(const TwoBandQState& state, const ExperimentParams& params,
                                      double t) {
  PeriodicPropagator prop(PeriodicRabiModel(params, state.n_q()),
                          kMaxPhasePerStep / std::max({params.omega(), params.omega_q(), params.g()}));
  return prop.observe(state, t);
}

Trajectory evolve_periodic_series(const PeriodicRabiModel& model, const TwoBandQState& state0,
                                  std::span<const double> times, double dt,
                                  SplitOrder order) {
  PeriodicPropagator prop(model, dt, order);
  TwoBandQState st = state0;
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

MomentumDensity band_mapping(const TwoBandQState& state) {
  const int n_q = state.n_q();
  const double two_hk = state.zone_halfwidth();
  std::vector<std::pair<double, double>> pts;
  pts.reserve(2 * n_q);
  double total = 0.0;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < n_q; ++i) {
      const double w = std::norm(state(b, i));
      pts.emplace_back(two_hk * (2 * b - 1) - state.q(i), w);
      total += w;
    }
  }
  std::sort(pts.begin(), pts.end());
  MomentumDensity out;
  out.p.reserve(pts.size());
  out.weight.reserve(pts.size());
  for (auto [p, w] : pts) {
    out.p.push_back(p);
    out.weight.push_back(total > 0.0 ? w / total : 0.0);
  }
  return out;
}

}  // namespace rabi
