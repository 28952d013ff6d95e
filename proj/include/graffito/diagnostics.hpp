#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "graffito/mesh.hpp"
#include "graffito/model.hpp"
#include "graffito/sparse.hpp"

namespace graffito {

struct Masses {
  double u = 0.0;
  double v = 0.0;
};

/// 1^T M u and 1^T M v.
Masses total_mass(const StateFields& state, const SparseMatrix& mass);
/// Lumped analogue sum_i m_i u_i.
Masses total_mass(const StateFields& state, std::span<const double> m_lumped);

struct FieldExtrema {
  std::array<double, 4> min{};
  std::array<double, 4> max{};
  double overall_min() const;
};

FieldExtrema extrema(const StateFields& state);

// Integer codes are what the VTK writer exports: 0 = tie, 1 = u side, 2 = v side.
enum class GangClass : std::uint8_t { PurpleTie = 0, RedU = 1, BlueV = 2 };
/// z is sprayed by u, so the u side of the graffiti classes is z.
enum class GraffitiClass : std::uint8_t { LightPurpleTie = 0, OrangeZ = 1, LightBlueW = 2 };

inline constexpr double kClassCutoff = 1e-6;

struct ClassificationGrid {
  std::vector<GangClass> gang_class;
  std::vector<GraffitiClass> graffiti_class;
  double cutoff = kClassCutoff;

  std::size_t count(GangClass c) const;
  std::size_t count(GraffitiClass c) const;
};

/// RedU iff u - v >= cutoff, BlueV iff v - u >= cutoff, tie otherwise; same for z against w.
ClassificationGrid classify(const StateFields& state, double cutoff = kClassCutoff);

struct DiagonalRow {
  double s = 0.0;  // arc length from the lower-left corner
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double z = 0.0;
};

using DiagonalSnapshot = std::vector<DiagonalRow>;

/// Nodal values along y = x. Requires a square domain.
DiagonalSnapshot diagonal_snapshot(const StateFields& state, const StructuredQuadMesh& mesh);

/// Discrete L2 distance sqrt(sum_rows ds * sum_fields (a - b)^2) over the rows
/// of the coarser snapshot; the finer one must contain every coarse node
/// (nested meshes or equal meshes). ds is the coarse row spacing.
double diagonal_l2_difference(const DiagonalSnapshot& a, const DiagonalSnapshot& b);

/// components = { int (u-u_bar)^2, int (v-v_bar)^2, int (w-w*)^2, int (z-z*)^2, int |grad w|^2, int |grad z|^2 }
/// and y = (c (components[0] + components[1]) + components[2] + ... + components[5]) / 2.
struct LyapunovSample {
  double t = 0.0;
  double y = 0.0;
  double c_mult = 1.0;
  std::array<double, 6> components{};
};

/// Integrals are evaluated as quadratic forms of the mass and unit stiffness matrices.
LyapunovSample lyapunov(const StateFields& state, const Equilibrium& eq, const SparseMatrix& mass,
                        const SparseMatrix& stiffness, double c_mult = 1.0);

struct SteadyStateOptions {
  double threshold = 1e-6;
  double window = 100.0;
};

struct SteadyStateReport {
  /// Change criterion met and every field within 10 * threshold of the homogeneous equilibrium.
  bool converged = false;
  /// Change criterion met (possibly towards a nonhomogeneous pattern).
  bool stationary = false;
  double t_detect = std::numeric_limits<double>::quiet_NaN();
  double t_stationary = std::numeric_limits<double>::quiet_NaN();
  Equilibrium limit_values;
  /// max over nodes and fields of |field - limit| at t_detect, or at the last sample if not converged.
  double max_deviation = 0.0;
  /// Largest change across the window ending at the last sample.
  double last_window_change = std::numeric_limits<double>::infinity();
  /// The last sample, the candidate limit of a nonhomogeneous run.
  StateFields candidate;
};

/// Feeds samples one at a time and keeps only the trailing window.
class SteadyStateDetector {
 public:
  explicit SteadyStateDetector(Equilibrium eq, SteadyStateOptions options = {});

  /// Samples must arrive with increasing t.
  void push(const StateFields& state);
  const SteadyStateReport& report() const { return report_; }
  std::size_t n_samples() const { return n_samples_; }
  double first_time() const { return t_first_; }

 private:
  Equilibrium eq_;
  SteadyStateOptions options_;
  std::deque<StateFields> window_;
  SteadyStateReport report_;
  std::size_t n_samples_ = 0;
  double t_first_ = 0.0;
};

/// Batch form. Throws std::invalid_argument with fewer than two samples or a
/// history shorter than the window.
SteadyStateReport detect_steady_state(std::span<const StateFields> history, const Equilibrium& eq,
                                      SteadyStateOptions options = {});

/// sum_i m_i max(0, min(u_i, v_i)): the lumped integral of the overlap of the two gangs.
double overlap_measure(const StateFields& state, std::span<const double> m_lumped);

}  // namespace graffito
