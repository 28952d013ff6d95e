#include "graffito/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace graffito {

namespace {

double weighted_sum(std::span<const double> m, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m[i] * x[i];
  return s;
}

double quadratic_form(const SparseMatrix& a, std::span<const double> x) {
  return weighted_sum(x, matvec(a, x));
}

std::vector<double> shifted(std::span<const double> x, double c) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v -= c;
  return out;
}

double max_change(const StateFields& a, const StateFields& b) {
  double d = 0.0;
  for (int f = 0; f < 4; ++f) {
    const auto& x = *a.fields()[f];
    const auto& y = *b.fields()[f];
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  }
  return d;
}

double deviation(const StateFields& s, const Equilibrium& eq) {
  const double limit[4] = {eq.u_bar, eq.v_bar, eq.w_star, eq.z_star};
  double d = 0.0;
  for (int f = 0; f < 4; ++f) {
    for (const double x : *s.fields()[f]) d = std::max(d, std::abs(x - limit[f]));
  }
  return d;
}

}  // namespace

Masses total_mass(const StateFields& state, const SparseMatrix& mass) {
  const auto ones = column_sums(mass);
  return {weighted_sum(ones, state.u), weighted_sum(ones, state.v)};
}

Masses total_mass(const StateFields& state, std::span<const double> m_lumped) {
  if (m_lumped.size() != state.size()) throw std::invalid_argument("total_mass: dimension mismatch");
  return {weighted_sum(m_lumped, state.u), weighted_sum(m_lumped, state.v)};
}

double FieldExtrema::overall_min() const { return *std::min_element(min.begin(), min.end()); }

FieldExtrema extrema(const StateFields& state) {
  FieldExtrema e;
  for (int f = 0; f < 4; ++f) {
    const auto& x = *state.fields()[f];
    if (x.empty()) continue;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    e.min[f] = *lo;
    e.max[f] = *hi;
  }
  return e;
}

// ---------------------------------------------------------------------------

std::size_t ClassificationGrid::count(GangClass c) const {
  return static_cast<std::size_t>(std::count(gang_class.begin(), gang_class.end(), c));
}

std::size_t ClassificationGrid::count(GraffitiClass c) const {
  return static_cast<std::size_t>(std::count(graffiti_class.begin(), graffiti_class.end(), c));
}

ClassificationGrid classify(const StateFields& state, double cutoff) {
  ClassificationGrid g;
  g.cutoff = cutoff;
  const std::size_t n = state.size();
  g.gang_class.resize(n);
  g.graffiti_class.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = state.u[i] - state.v[i];
    g.gang_class[i] = d >= cutoff ? GangClass::RedU : (-d >= cutoff ? GangClass::BlueV : GangClass::PurpleTie);
    const double e = state.z[i] - state.w[i];
    g.graffiti_class[i] =
        e >= cutoff ? GraffitiClass::OrangeZ : (-e >= cutoff ? GraffitiClass::LightBlueW : GraffitiClass::LightPurpleTie);
  }
  return g;
}

DiagonalSnapshot diagonal_snapshot(const StateFields& state, const StructuredQuadMesh& mesh) {
  if (state.size() != mesh.n_nodes()) throw std::invalid_argument("diagonal_snapshot: state does not match mesh");
  const auto nodes = diagonal_nodes(mesh);
  const double x0 = mesh.domain().x_min;
  DiagonalSnapshot rows;
  rows.reserve(nodes.size());
  for (const std::size_t i : nodes) {
    rows.push_back({std::sqrt(2.0) * (mesh.node(i).x - x0), state.u[i], state.v[i], state.w[i], state.z[i]});
  }
  return rows;
}

double diagonal_l2_difference(const DiagonalSnapshot& a, const DiagonalSnapshot& b) {
  const bool a_coarse = a.size() <= b.size();
  const DiagonalSnapshot& coarse = a_coarse ? a : b;
  const DiagonalSnapshot& fine = a_coarse ? b : a;
  if (coarse.size() < 2) throw std::invalid_argument("diagonal_l2_difference needs at least two rows");
  const std::size_t nc = coarse.size() - 1;
  const std::size_t nf = fine.size() - 1;
  if (nf % nc != 0) throw std::invalid_argument("diagonal snapshots are not nested");
  const std::size_t stride = nf / nc;
  const double ds = (coarse.back().s - coarse.front().s) / static_cast<double>(nc);
  double sum = 0.0;
  for (std::size_t k = 0; k <= nc; ++k) {
    const DiagonalRow& p = coarse[k];
    const DiagonalRow& q = fine[k * stride];
    if (std::abs(p.s - q.s) > 1e-9 * std::max(1.0, std::abs(p.s))) {
      throw std::invalid_argument("diagonal snapshots are not nested");
    }
    const double du = p.u - q.u, dv = p.v - q.v, dw = p.w - q.w, dz = p.z - q.z;
    sum += ds * (du * du + dv * dv + dw * dw + dz * dz);
  }
  return std::sqrt(sum);
}

LyapunovSample lyapunov(const StateFields& state, const Equilibrium& eq, const SparseMatrix& mass,
                        const SparseMatrix& stiffness, double c_mult) {
  if (!(c_mult > 0.0)) throw std::invalid_argument("lyapunov: c_mult must be positive");
  LyapunovSample s;
  s.t = state.t;
  s.c_mult = c_mult;
  s.components[0] = quadratic_form(mass, shifted(state.u, eq.u_bar));
  s.components[1] = quadratic_form(mass, shifted(state.v, eq.v_bar));
  s.components[2] = quadratic_form(mass, shifted(state.w, eq.w_star));
  s.components[3] = quadratic_form(mass, shifted(state.z, eq.z_star));
  s.components[4] = quadratic_form(stiffness, state.w);
  s.components[5] = quadratic_form(stiffness, state.z);
  // Round-off can push a vanishing quadratic form slightly below zero.
  for (double& c : s.components) c = std::max(c, 0.0);
  const auto& k = s.components;
  s.y = 0.5 * (c_mult * (k[0] + k[1]) + k[2] + k[3] + k[4] + k[5]);
  return s;
}

// ---------------------------------------------------------------------------

SteadyStateDetector::SteadyStateDetector(Equilibrium eq, SteadyStateOptions options)
    : eq_(eq), options_(options) {
  if (!(options_.threshold > 0.0) || !(options_.window > 0.0)) {
    throw std::invalid_argument("steady-state threshold and window must be positive");
  }
  report_.limit_values = eq_;
}

void SteadyStateDetector::push(const StateFields& state) {
  if (n_samples_ == 0) t_first_ = state.t;
  if (!window_.empty() && !(state.t > window_.back().t)) {
    throw std::invalid_argument("steady-state samples must have increasing times");
  }
  ++n_samples_;
  window_.push_back(state);
  const double eps = 1e-9 * std::max(1.0, options_.window);
  // Keep exactly the samples in [t - window, t].
  while (window_.size() > 1 && window_[1].t <= state.t - options_.window + eps) window_.pop_front();

  report_.candidate = state;
  const double dev = deviation(state, eq_);
  if (!report_.converged) report_.max_deviation = dev;
  if (state.t - window_.front().t < options_.window - eps) return;

  double change = 0.0;
  for (const auto& s : window_) change = std::max(change, max_change(s, state));
  report_.last_window_change = change;
  if (change > options_.threshold) return;
  if (!report_.stationary) {
    report_.stationary = true;
    report_.t_stationary = state.t;
  }
  if (!report_.converged && dev <= 10.0 * options_.threshold) {
    report_.converged = true;
    report_.t_detect = state.t;
    report_.max_deviation = dev;
  }
}

SteadyStateReport detect_steady_state(std::span<const StateFields> history, const Equilibrium& eq,
                                      SteadyStateOptions options) {
  if (history.size() < 2) throw std::invalid_argument("steady-state detection needs at least two samples");
  if (history.back().t - history.front().t < options.window * (1.0 - 1e-12)) {
    throw std::invalid_argument("steady-state history is shorter than the window");
  }
  SteadyStateDetector detector(eq, options);
  for (const auto& s : history) detector.push(s);
  return detector.report();
}

double overlap_measure(const StateFields& state, std::span<const double> m_lumped) {
  if (m_lumped.size() != state.size()) throw std::invalid_argument("overlap_measure: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) s += m_lumped[i] * std::max(0.0, std::min(state.u[i], state.v[i]));
  return s;
}

}  // namespace graffito
