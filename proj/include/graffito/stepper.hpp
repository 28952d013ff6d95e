#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "graffito/afc.hpp"
#include "graffito/fem.hpp"
#include "graffito/mesh.hpp"
#include "graffito/model.hpp"
#include "graffito/solver.hpp"
#include "graffito/sparse.hpp"

namespace graffito {

enum class Scheme { Galerkin, LowOrder, FCT };

std::string_view to_string(Scheme scheme);
/// Accepts "galerkin", "low_order" and "fct" in any letter case.
Scheme scheme_from_string(std::string_view name);

struct TimeConfig {
  double t_end = 1000.0;
  double dt = 1.0;
  double theta = 0.5;
  /// Fixed-point iteration stops once max_field |x_k - x_{k-1}|_inf < fp_tolerance * max(1, |x_k|_inf).
  double fp_tolerance = 1e-8;
  int fp_max_iter = 50;
  Scheme scheme = Scheme::Galerkin;
  /// FCT only: cancel fluxes that point down the gradient of the predictor.
  bool prelimiting = true;

  void validate() const;
  /// Number of steps to reach t_end; throws unless t_end is a multiple of dt.
  std::size_t n_steps() const;
  bool operator==(const TimeConfig&) const = default;
};

struct StepReport {
  double t = 0.0;
  int fp_iterations = 0;
  double fp_residual = 0.0;
  bool fp_converged = false;
  bool timestep_condition_ok = true;
  double min_u = 0.0;
  double min_v = 0.0;
};

/// Raised when a field becomes non-finite or exceeds kDivergenceBound.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double t, std::string field, int iteration, double value);
  double time() const { return t_; }
  const std::string& field() const { return field_; }
  int iteration() const { return iteration_; }
  double value() const { return value_; }

 private:
  double t_;
  std::string field_;
  int iteration_;
  double value_;
};

inline constexpr double kDivergenceBound = 1e12;

/// Per-node evaluation of the positivity step-size conditions
///   m_i - (1-theta) dt a~_ii^n >= 0   and   m_i + theta dt sum_j a_ij^{n+1} > 0.
struct TimestepCheck {
  std::vector<bool> explicit_ok;
  std::vector<bool> implicit_ok;
  std::size_t violations = 0;
  bool all_ok() const { return violations == 0; }
};

TimestepCheck check_timestep_condition(std::span<const double> m_lumped, const SparseMatrix& a_new,
                                       const SparseMatrix& a_tilde_old, double theta, double dt);

/// Operators fixed for a run (mass, lumped mass, stiffness, the w/z solver)
/// and per-step work storage.
class Stepper {
 public:
  Stepper(const StructuredQuadMesh& mesh, const ModelParams& params, const TimeConfig& tc,
          SolverOptions solver = {});

  /// One step t -> t + dt; `state` is overwritten with the new level.
  StepReport advance(StateFields& state);

  const Q1Space& space() const { return space_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  std::span<const double> lumped_mass() const { return lumped_; }
  const ModelParams& params() const { return params_; }
  const TimeConfig& time_config() const { return tc_; }

 private:
  struct Transport {
    SparseMatrix a;
    SparseMatrix d;
    SparseMatrix a_tilde;
  };

  void build_transport(double d_coef, double chi, std::span<const double> source, Transport& out) const;
  // Level-n right-hand side of the mobile-field equation.
  void old_level_rhs(const Transport& old, std::span<const double> x, std::vector<double>& rhs) const;
  // Solves the mobile-field equation for iterate k into x_new.
  void solve_mobile(const Transport& old, const Transport& now, std::span<const double> x_old,
                    std::span<const double> x_prev, const std::vector<double>& rhs,
                    const std::vector<double>& predictor, std::vector<double>& x_new);
  void check_finite(std::span<const double> x, double t, const char* name, int iteration) const;

  Q1Space space_;
  ModelParams params_;
  TimeConfig tc_;
  SolverOptions solver_options_;
  RateEvaluation rate_mode_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  std::vector<double> lumped_;
  LinearSolver wz_solver_;

  Transport old_u_, old_v_, new_u_, new_v_;
  SparseMatrix system_;
  LinearSolver mobile_solver_;
  LimiterWorkspace limiter_;
  std::vector<double> increment_;
};

/// Callbacks invoked by run(). on_sample fires at t = 0 and at each scheduled
/// time; on_step after every completed step.
struct RunObservers {
  std::vector<double> sample_times;
  std::function<void(const StateFields&)> on_sample;
  std::function<void(const StateFields&, const StepReport&)> on_step;
};

struct RunResult {
  StateFields final_state;
  std::vector<StepReport> reports;
  /// Set when the run stopped on a DivergenceError; final_state is then the last finite level.
  std::optional<double> divergence_time;
  std::string divergence_message;
  bool diverged() const { return divergence_time.has_value(); }
};

/// Integrates from the interpolated initial condition to tc.t_end. Divergence
/// ends the run and is reported in the result; all other errors propagate.
RunResult run(const InitialCondition& ic, const ModelParams& params, const StructuredQuadMesh& mesh,
              const TimeConfig& tc, const RunObservers& observers = {}, SolverOptions solver = {});
RunResult run(StateFields initial, const ModelParams& params, const StructuredQuadMesh& mesh, const TimeConfig& tc,
              const RunObservers& observers = {}, SolverOptions solver = {});

}  // namespace graffito
