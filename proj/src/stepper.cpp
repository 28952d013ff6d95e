#include "graffito/stepper.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace graffito {

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Galerkin: return "galerkin";
    case Scheme::LowOrder: return "low_order";
    case Scheme::FCT: return "fct";
  }
  return "galerkin";
}

Scheme scheme_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "galerkin") return Scheme::Galerkin;
  if (lower == "low_order") return Scheme::LowOrder;
  if (lower == "fct") return Scheme::FCT;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "' (expected galerkin, low_order or fct)");
}

void TimeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive and finite");
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0, 1]");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be nonnegative and finite");
  if (!(fp_tolerance > 0.0)) throw std::invalid_argument("fp_tolerance must be positive");
  if (fp_max_iter < 1) throw std::invalid_argument("fp_max_iter must be at least 1");
  n_steps();
}

std::size_t TimeConfig::n_steps() const {
  const double ratio = t_end / dt;
  const double steps = std::round(ratio);
  if (std::abs(ratio - steps) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream msg;
    msg << "t_end = " << t_end << " is not a whole number of steps of dt = " << dt;
    throw std::invalid_argument(msg.str());
  }
  return static_cast<std::size_t>(steps);
}

DivergenceError::DivergenceError(double t, std::string field, int iteration, double value)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "divergence: field " << field << " reached " << value << " while computing t = " << t
            << " (fixed-point iteration " << iteration << ")";
        return msg.str();
      }()),
      t_(t),
      field_(std::move(field)),
      iteration_(iteration),
      value_(value) {}

TimestepCheck check_timestep_condition(std::span<const double> m_lumped, const SparseMatrix& a_new,
                                       const SparseMatrix& a_tilde_old, double theta, double dt) {
  const std::size_t n = m_lumped.size();
  if (a_new.n() != n || a_tilde_old.n() != n) throw std::invalid_argument("timestep check: dimension mismatch");
  TimestepCheck check;
  check.explicit_ok.resize(n);
  check.implicit_ok.resize(n);
  const auto sums = row_sums(a_new);
  for (std::size_t i = 0; i < n; ++i) {
    check.explicit_ok[i] = m_lumped[i] - (1.0 - theta) * dt * a_tilde_old.diagonal(i) >= 0.0;
    check.implicit_ok[i] = m_lumped[i] + theta * dt * sums[i] > 0.0;
    if (!check.explicit_ok[i] || !check.implicit_ok[i]) ++check.violations;
  }
  return check;
}

// ---------------------------------------------------------------------------

namespace {

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (const double v : x) m = std::max(m, std::abs(v));
  return m;
}

double relative_change(std::span<const double> now, std::span<const double> prev) {
  double d = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) d = std::max(d, std::abs(now[i] - prev[i]));
  return d / std::max(1.0, max_abs(now));
}

double min_value(std::span<const double> x) { return x.empty() ? 0.0 : *std::min_element(x.begin(), x.end()); }

}  // namespace

Stepper::Stepper(const StructuredQuadMesh& mesh, const ModelParams& params, const TimeConfig& tc,
                 SolverOptions solver)
    : space_(mesh),
      params_(params),
      tc_(tc),
      solver_options_(solver),
      rate_mode_(tc.scheme == Scheme::Galerkin ? RateEvaluation::Extended : RateEvaluation::Clamped),
      mass_(assemble_mass(space_)),
      stiffness_(assemble_stiffness(space_)),
      lumped_(lump_mass(mass_)),
      wz_solver_(solver),
      mobile_solver_(solver) {
  params_.validate();
  tc_.validate();
  SparseMatrix wz = mass_;
  wz.scale(1.0 + tc_.theta * tc_.dt);
  wz_solver_.factorize(wz);
  limiter_.resize(*space_.pattern());
  increment_.resize(space_.n_dofs());
}

void Stepper::build_transport(double d_coef, double chi, std::span<const double> source, Transport& out) const {
  assemble_transport(space_, stiffness_, d_coef, chi, source, out.a);
  build_artificial_diffusion(out.a, out.d);
  out.a_tilde = out.a;
  out.a_tilde.add(1.0, out.d);
}

void Stepper::old_level_rhs(const Transport& old, std::span<const double> x, std::vector<double>& rhs) const {
  const double c = (1.0 - tc_.theta) * tc_.dt;
  rhs.resize(x.size());
  if (tc_.scheme == Scheme::Galerkin) {
    const auto mx = matvec(mass_, x);
    const auto ax = matvec(old.a, x);
    for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = mx[i] - c * ax[i];
  } else {
    const auto ax = matvec(old.a_tilde, x);
    for (std::size_t i = 0; i < x.size(); ++i) rhs[i] = lumped_[i] * x[i] - c * ax[i];
  }
}

void Stepper::solve_mobile(const Transport& old, const Transport& now, std::span<const double> x_old,
                           std::span<const double> x_prev, const std::vector<double>& rhs,
                           const std::vector<double>& predictor, std::vector<double>& x_new) {
  const double c = tc_.theta * tc_.dt;
  x_new.resize(rhs.size());
  if (tc_.scheme == Scheme::Galerkin) {
    system_ = now.a;
    system_.scale(c);
    system_.add(1.0, mass_);
    mobile_solver_.factorize(system_);
    mobile_solver_.solve(rhs, x_new);
    return;
  }
  system_ = now.a_tilde;
  system_.scale(c);
  auto values = system_.values();
  const auto& pattern = system_.pattern();
  for (std::size_t i = 0; i < pattern.n(); ++i) values[pattern.diagonal_position(i)] += lumped_[i];
  mobile_solver_.factorize(system_);
  if (tc_.scheme == Scheme::LowOrder) {
    mobile_solver_.solve(rhs, x_new);
    return;
  }
  assemble_fluxes(mass_, now.d, old.d, x_prev, x_old, tc_.theta, tc_.dt, limiter_);
  if (tc_.prelimiting) prelimit(pattern, limiter_, predictor);
  zalesak_limit(pattern, limiter_, predictor, lumped_);
  corrected_rhs_increment(pattern, limiter_, increment_);
  std::vector<double> b(rhs);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += increment_[i];
  mobile_solver_.solve(b, x_new);
}

void Stepper::check_finite(std::span<const double> x, double t, const char* name, int iteration) const {
  for (const double v : x) {
    if (!std::isfinite(v) || std::abs(v) > kDivergenceBound) throw DivergenceError(t, name, iteration, v);
  }
}

StepReport Stepper::advance(StateFields& state) {
  const std::size_t n = space_.n_dofs();
  if (state.size() != n || state.v.size() != n || state.w.size() != n || state.z.size() != n) {
    throw std::invalid_argument("state does not match the mesh");
  }
  const double dt = tc_.dt;
  const double theta = tc_.theta;
  const double t_new = state.t + dt;

  build_transport(params_.d_u, params_.chi_u, state.w, old_u_);
  build_transport(params_.d_v, params_.chi_v, state.z, old_v_);
  std::vector<double> rhs_u, rhs_v;
  old_level_rhs(old_u_, state.u, rhs_u);
  old_level_rhs(old_v_, state.v, rhs_v);
  std::vector<double> pred_u, pred_v;
  if (tc_.scheme == Scheme::FCT) {
    pred_u.resize(n);
    pred_v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred_u[i] = rhs_u[i] / lumped_[i];
      pred_v[i] = rhs_v[i] / lumped_[i];
    }
  }

  // Level-n part of the w and z right-hand sides.
  std::vector<double> rhs_w_old(n), rhs_z_old(n), load(n);
  {
    const auto mw = matvec(mass_, state.w);
    const auto mz = matvec(mass_, state.z);
    const double a = 1.0 - (1.0 - theta) * dt;
    assemble_rate_load(space_, params_.rate_f, state.v, load, rate_mode_);
    for (std::size_t i = 0; i < n; ++i) rhs_w_old[i] = a * mw[i] + dt * (1.0 - theta) * load[i];
    assemble_rate_load(space_, params_.rate_g, state.u, load, rate_mode_);
    for (std::size_t i = 0; i < n; ++i) rhs_z_old[i] = a * mz[i] + dt * (1.0 - theta) * load[i];
  }

  StateFields prev = state;
  StateFields next = StateFields::zeros(n, t_new);
  std::vector<double> rhs(n);
  StepReport report;
  report.t = t_new;
  for (int k = 1; k <= tc_.fp_max_iter; ++k) {
    build_transport(params_.d_u, params_.chi_u, prev.w, new_u_);
    build_transport(params_.d_v, params_.chi_v, prev.z, new_v_);

    solve_mobile(old_u_, new_u_, state.u, prev.u, rhs_u, pred_u, next.u);
    check_finite(next.u, t_new, "u", k);
    solve_mobile(old_v_, new_v_, state.v, prev.v, rhs_v, pred_v, next.v);
    check_finite(next.v, t_new, "v", k);

    assemble_rate_load(space_, params_.rate_f, next.v, load, rate_mode_);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = rhs_w_old[i] + dt * theta * load[i];
    wz_solver_.solve(rhs, next.w);
    check_finite(next.w, t_new, "w", k);
    assemble_rate_load(space_, params_.rate_g, next.u, load, rate_mode_);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = rhs_z_old[i] + dt * theta * load[i];
    wz_solver_.solve(rhs, next.z);
    check_finite(next.z, t_new, "z", k);

    double change = 0.0;
    for (int f = 0; f < 4; ++f) change = std::max(change, relative_change(*next.fields()[f], *prev.fields()[f]));
    std::swap(prev, next);
    report.fp_iterations = k;
    report.fp_residual = change;
    if (change < tc_.fp_tolerance) {
      report.fp_converged = true;
      break;
    }
  }

  const auto cu = check_timestep_condition(lumped_, new_u_.a, old_u_.a_tilde, theta, dt);
  const auto cv = check_timestep_condition(lumped_, new_v_.a, old_v_.a_tilde, theta, dt);
  report.timestep_condition_ok = cu.all_ok() && cv.all_ok();
  report.min_u = min_value(prev.u);
  report.min_v = min_value(prev.v);
  prev.t = t_new;
  state = std::move(prev);
  return report;
}

// ---------------------------------------------------------------------------

RunResult run(const InitialCondition& ic, const ModelParams& params, const StructuredQuadMesh& mesh,
              const TimeConfig& tc, const RunObservers& observers, SolverOptions solver) {
  return run(ic.interpolate(mesh), params, mesh, tc, observers, solver);
}

RunResult run(StateFields initial, const ModelParams& params, const StructuredQuadMesh& mesh, const TimeConfig& tc,
              const RunObservers& observers, SolverOptions solver) {
  tc.validate();
  const std::size_t n_steps = tc.n_steps();
  std::vector<std::size_t> sample_steps;
  for (const double ts : observers.sample_times) {
    if (ts < 0.0 || ts > tc.t_end + 1e-9 * std::max(1.0, tc.t_end)) {
      throw std::invalid_argument("sample time " + std::to_string(ts) + " lies outside [0, t_end]");
    }
    const auto step = static_cast<std::size_t>(std::ceil(ts / tc.dt - 1e-9));
    if (step > 0) sample_steps.push_back(std::min(step, n_steps));
  }
  std::sort(sample_steps.begin(), sample_steps.end());
  sample_steps.erase(std::unique(sample_steps.begin(), sample_steps.end()), sample_steps.end());

  RunResult result;
  result.final_state = std::move(initial);
  result.final_state.t = 0.0;
  if (observers.on_sample) observers.on_sample(result.final_state);
  if (n_steps == 0) return result;

  Stepper stepper(mesh, params, tc, solver);
  auto next_sample = sample_steps.begin();
  StateFields& state = result.final_state;
  for (std::size_t step = 1; step <= n_steps; ++step) {
    StepReport report;
    try {
      report = stepper.advance(state);
    } catch (const DivergenceError& e) {
      result.divergence_time = e.time();
      result.divergence_message = e.what();
      return result;
    }
    state.t = static_cast<double>(step) * tc.dt;
    report.t = state.t;
    result.reports.push_back(report);
    if (observers.on_step) observers.on_step(state, report);
    if (next_sample != sample_steps.end() && *next_sample == step) {
      if (observers.on_sample) observers.on_sample(state);
      ++next_sample;
    }
  }
  return result;
}

}  // namespace graffito
