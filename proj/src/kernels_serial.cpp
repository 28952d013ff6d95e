#include <algorithm>

#include "graffito/kernels.hpp"

namespace graffito::kernels::serial {

void spmv(const SparsityPattern& pattern, std::span<const double> values, std::span<const double> x,
          std::span<double> y) {
  for (std::size_t i = 0; i < pattern.n(); ++i) {
    double s = 0.0;
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) s += values[k] * x[pattern.col(k)];
    y[i] = s;
  }
}

void assemble_convection(const Q1Space& space, std::span<const double> source, std::span<double> values) {
  std::fill(values.begin(), values.end(), 0.0);
  const auto& mesh = space.mesh();
  const std::size_t nq = space.n_quad();
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    for (std::size_t q = 0; q < nq; ++q) {
      double gx = 0.0;
      double gy = 0.0;
      for (int b = 0; b < 4; ++b) {
        gx += source[cell[b]] * space.grad(q, b)[0];
        gy += source[cell[b]] * space.grad(q, b)[1];
      }
      for (int a = 0; a < 4; ++a) {
        const double flux = space.jxw(q) * (gx * space.grad(q, a)[0] + gy * space.grad(q, a)[1]);
        for (int b = 0; b < 4; ++b) values[space.entry(c, a, b)] += flux * space.shape(q, b);
      }
    }
  }
}

void assemble_rate_load(const Q1Space& space, const RateFunction& rate, bool extended,
                        std::span<const double> field, std::span<double> load) {
  std::fill(load.begin(), load.end(), 0.0);
  const auto& mesh = space.mesh();
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    for (std::size_t q = 0; q < space.n_quad(); ++q) {
      double s = 0.0;
      for (int b = 0; b < 4; ++b) s += field[cell[b]] * space.shape(q, b);
      const double r = extended ? rate.evaluate_extended(s) : rate.evaluate_extended(std::max(s, 0.0));
      for (int a = 0; a < 4; ++a) load[cell[a]] += space.jxw(q) * r * space.shape(q, a);
    }
  }
}

void artificial_diffusion(const SparsityPattern& pattern, std::span<const double> a, std::span<double> d) {
  for (std::size_t i = 0; i < pattern.n(); ++i) {
    double sum = 0.0;
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      if (pattern.col(k) == i) continue;
      const double dij = -std::max({a[k], 0.0, a[pattern.transpose_position(k)]});
      d[k] = dij;
      sum += dij;
    }
    d[pattern.diagonal_position(i)] = -sum;
  }
}

void fluxes(const SparsityPattern& pattern, std::span<const double> mass, std::span<const double> d_new,
            std::span<const double> d_old, std::span<const double> u_iter, std::span<const double> u_old,
            double theta, double dt, std::span<double> flux) {
  for (std::size_t e = 0; e < pattern.n_edges(); ++e) {
    const std::size_t i = pattern.edge_lo(e);
    const std::size_t j = pattern.edge_hi(e);
    const std::size_t k = pattern.edge_upper(e);
    const double mij = mass[k];
    flux[e] = (-mij + theta * dt * d_new[k]) * (u_iter[j] - u_iter[i]) +
              (mij + (1.0 - theta) * dt * d_old[k]) * (u_old[j] - u_old[i]);
  }
}

void prelimit(const SparsityPattern& pattern, std::span<double> flux, std::span<const double> u_low) {
  for (std::size_t e = 0; e < pattern.n_edges(); ++e) {
    if (flux[e] * (u_low[pattern.edge_hi(e)] - u_low[pattern.edge_lo(e)]) > 0.0) flux[e] = 0.0;
  }
}

void zalesak_node_factors(const SparsityPattern& pattern, std::span<const double> u_low,
                          std::span<const double> m_lumped, LimiterWorkspace& ws) {
  const std::size_t n = pattern.n();
  // P: scatter each edge flux to both endpoints.
  std::fill(ws.p_plus.begin(), ws.p_plus.end(), 0.0);
  std::fill(ws.p_minus.begin(), ws.p_minus.end(), 0.0);
  for (std::size_t e = 0; e < pattern.n_edges(); ++e) {
    const double f = ws.raw_flux[e];
    const std::size_t lo = pattern.edge_lo(e);
    const std::size_t hi = pattern.edge_hi(e);
    if (f > 0.0) {
      ws.p_plus[lo] += f;
      ws.p_minus[hi] -= f;
    } else if (f < 0.0) {
      ws.p_minus[lo] += f;
      ws.p_plus[hi] -= f;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double umax = u_low[i];
    double umin = u_low[i];
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      umax = std::max(umax, u_low[pattern.col(k)]);
      umin = std::min(umin, u_low[pattern.col(k)]);
    }
    ws.q_plus[i] = m_lumped[i] * (umax - u_low[i]);
    ws.q_minus[i] = m_lumped[i] * (umin - u_low[i]);
    ws.r_plus[i] = ws.p_plus[i] < kVanishingFluxSum ? 1.0 : std::min(1.0, ws.q_plus[i] / ws.p_plus[i]);
    ws.r_minus[i] = -ws.p_minus[i] < kVanishingFluxSum ? 1.0 : std::min(1.0, ws.q_minus[i] / ws.p_minus[i]);
  }
}

void zalesak_edge_alpha(const SparsityPattern& pattern, LimiterWorkspace& ws) {
  for (std::size_t e = 0; e < pattern.n_edges(); ++e) {
    const double f = ws.raw_flux[e];
    const std::size_t lo = pattern.edge_lo(e);
    const std::size_t hi = pattern.edge_hi(e);
    if (f > 0.0) {
      ws.alpha[e] = std::min(ws.r_plus[lo], ws.r_minus[hi]);
    } else if (f < 0.0) {
      ws.alpha[e] = std::min(ws.r_minus[lo], ws.r_plus[hi]);
    } else {
      ws.alpha[e] = 1.0;
    }
  }
}

void limited_increment(const SparsityPattern& pattern, std::span<const double> flux, std::span<const double> alpha,
                       std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t e = 0; e < pattern.n_edges(); ++e) {
    const double g = alpha[e] * flux[e];
    out[pattern.edge_lo(e)] += g;
    out[pattern.edge_hi(e)] -= g;
  }
}

}  // namespace graffito::kernels::serial
