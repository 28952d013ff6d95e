#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "graffito/sparse.hpp"

namespace graffito {

/// Symmetric zero-row-sum matrix D with d_ij = -max{a_ij, 0, a_ji} off the
/// diagonal; A + D has no positive off-diagonal entries.
struct ArtificialDiffusion {
  SparseMatrix d;
};

ArtificialDiffusion build_artificial_diffusion(const SparseMatrix& a);
void build_artificial_diffusion(const SparseMatrix& a, SparseMatrix& d_out);

/// Per-node Zalesak accumulators and per-edge fluxes/correction factors.
///
/// Edge e = {lo, hi} (lo < hi) stores f_{lo,hi}; the reverse flux is its
/// negative, so antisymmetry holds exactly. alpha is stored per edge and is
/// therefore symmetric.
struct LimiterWorkspace {
  std::vector<double> p_plus, p_minus;
  std::vector<double> q_plus, q_minus;
  std::vector<double> r_plus, r_minus;
  std::vector<double> raw_flux;
  std::vector<double> alpha;

  LimiterWorkspace() = default;
  explicit LimiterWorkspace(const SparsityPattern& pattern) { resize(pattern); }
  void resize(const SparsityPattern& pattern);

  /// f_ij for any ordered pair of coupled nodes (0 if i == j).
  double flux(const SparsityPattern& pattern, std::size_t i, std::size_t j) const;
  double alpha_of(const SparsityPattern& pattern, std::size_t i, std::size_t j) const;
};

/// Raw antidiffusive fluxes
///   f_ij = (-m_ij + theta dt d_new_ij)(u_j - u_i) + (m_ij + (1-theta) dt d_old_ij)(uo_j - uo_i)
/// with u the previous fixed-point iterate and uo the previous time level.
void assemble_fluxes(const SparseMatrix& mass, const SparseMatrix& d_new, const SparseMatrix& d_old,
                     std::span<const double> u_iter, std::span<const double> u_old, double theta, double dt,
                     LimiterWorkspace& ws);

/// Cancels fluxes with f_ij (ubar_j - ubar_i) > 0.
void prelimit(const SparsityPattern& pattern, LimiterWorkspace& ws, std::span<const double> u_low);

/// Zalesak correction factors from the (prelimited) fluxes and the auxiliary
/// low-order solution. Neighborhoods are the matrix-coupled nodes of the pattern.
void zalesak_limit(const SparsityPattern& pattern, LimiterWorkspace& ws, std::span<const double> u_low,
                   std::span<const double> m_lumped);

/// sum_j alpha_ij f_ij per node.
std::vector<double> corrected_rhs_increment(const SparsityPattern& pattern, const LimiterWorkspace& ws);
void corrected_rhs_increment(const SparsityPattern& pattern, const LimiterWorkspace& ws, std::span<double> out);

/// Threshold below which P_i^+ or P_i^- counts as vanishing.
inline constexpr double kVanishingFluxSum = 1e-300;

}  // namespace graffito
