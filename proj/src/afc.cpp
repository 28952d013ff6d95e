#include "graffito/afc.hpp"

#include <stdexcept>

#include "graffito/kernels.hpp"

namespace graffito {

ArtificialDiffusion build_artificial_diffusion(const SparseMatrix& a) {
  ArtificialDiffusion out{SparseMatrix(a.pattern_ptr())};
  build_artificial_diffusion(a, out.d);
  return out;
}

void build_artificial_diffusion(const SparseMatrix& a, SparseMatrix& d_out) {
  if (d_out.pattern_ptr() != a.pattern_ptr()) d_out = SparseMatrix(a.pattern_ptr());
  kernels::parallel::artificial_diffusion(a.pattern(), a.values(), d_out.values());
}

void LimiterWorkspace::resize(const SparsityPattern& pattern) {
  const std::size_t n = pattern.n();
  for (auto* v : {&p_plus, &p_minus, &q_plus, &q_minus, &r_plus, &r_minus}) v->assign(n, 0.0);
  raw_flux.assign(pattern.n_edges(), 0.0);
  alpha.assign(pattern.n_edges(), 1.0);
}

namespace {

// Edge index and orientation of (i, j); throws when the pair is not coupled.
std::pair<std::size_t, double> oriented_edge(const SparsityPattern& pattern, std::size_t i, std::size_t j) {
  const std::size_t k = pattern.find(i, j);
  if (k == npos) {
    throw std::out_of_range("nodes " + std::to_string(i) + " and " + std::to_string(j) + " are not coupled");
  }
  return {pattern.entry_edge(k), i < j ? 1.0 : -1.0};
}

void check_sizes(const SparsityPattern& pattern, const LimiterWorkspace& ws) {
  if (ws.raw_flux.size() != pattern.n_edges() || ws.p_plus.size() != pattern.n()) {
    throw std::invalid_argument("limiter workspace was sized for a different pattern");
  }
}

}  // namespace

double LimiterWorkspace::flux(const SparsityPattern& pattern, std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  const auto [e, sign] = oriented_edge(pattern, i, j);
  return sign * raw_flux[e];
}

double LimiterWorkspace::alpha_of(const SparsityPattern& pattern, std::size_t i, std::size_t j) const {
  if (i == j) return 1.0;
  return alpha[oriented_edge(pattern, i, j).first];
}

void assemble_fluxes(const SparseMatrix& mass, const SparseMatrix& d_new, const SparseMatrix& d_old,
                     std::span<const double> u_iter, std::span<const double> u_old, double theta, double dt,
                     LimiterWorkspace& ws) {
  const auto& pattern = mass.pattern();
  if (d_new.pattern_ptr() != mass.pattern_ptr() || d_old.pattern_ptr() != mass.pattern_ptr()) {
    throw std::invalid_argument("flux assembly: matrices must share one pattern");
  }
  if (u_iter.size() != pattern.n() || u_old.size() != pattern.n()) {
    throw std::invalid_argument("flux assembly: vector length mismatch");
  }
  if (ws.raw_flux.size() != pattern.n_edges()) ws.resize(pattern);
  kernels::parallel::fluxes(pattern, mass.values(), d_new.values(), d_old.values(), u_iter, u_old, theta, dt,
                            ws.raw_flux);
}

void prelimit(const SparsityPattern& pattern, LimiterWorkspace& ws, std::span<const double> u_low) {
  check_sizes(pattern, ws);
  kernels::parallel::prelimit(pattern, ws.raw_flux, u_low);
}

void zalesak_limit(const SparsityPattern& pattern, LimiterWorkspace& ws, std::span<const double> u_low,
                   std::span<const double> m_lumped) {
  check_sizes(pattern, ws);
  if (u_low.size() != pattern.n() || m_lumped.size() != pattern.n()) {
    throw std::invalid_argument("zalesak_limit: vector length mismatch");
  }
  kernels::parallel::zalesak_node_factors(pattern, u_low, m_lumped, ws);
  kernels::parallel::zalesak_edge_alpha(pattern, ws);
}

std::vector<double> corrected_rhs_increment(const SparsityPattern& pattern, const LimiterWorkspace& ws) {
  std::vector<double> out(pattern.n());
  corrected_rhs_increment(pattern, ws, out);
  return out;
}

void corrected_rhs_increment(const SparsityPattern& pattern, const LimiterWorkspace& ws, std::span<double> out) {
  check_sizes(pattern, ws);
  if (out.size() != pattern.n()) throw std::invalid_argument("corrected_rhs_increment: output length mismatch");
  kernels::parallel::limited_increment(pattern, ws.raw_flux, ws.alpha, out);
}

}  // namespace graffito
