#include <algorithm>
#include <cstdint>

#include "graffito/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace graffito::kernels::parallel {

namespace {

using index = std::int64_t;

inline double signed_edge_value(const SparsityPattern& pattern, std::span<const double> edge_values,
                                std::size_t row, std::size_t k) {
  const double v = edge_values[pattern.entry_edge(k)];
  return row < pattern.col(k) ? v : -v;
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void spmv(const SparsityPattern& pattern, std::span<const double> values, std::span<const double> x,
          std::span<double> y) {
  const auto n = static_cast<index>(pattern.n());
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double s = 0.0;
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) s += values[k] * x[pattern.col(k)];
    y[i] = s;
  }
}

// Row-wise gather: node i owns row i and visits its (at most four) cells.
void assemble_convection(const Q1Space& space, std::span<const double> source, std::span<double> values) {
  const auto& mesh = space.mesh();
  const auto& pattern = *space.pattern();
  const std::size_t nq = space.n_quad();
  const auto n = static_cast<index>(mesh.n_nodes());
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) values[k] = 0.0;
    for (const auto& [c, a] : mesh.node_cells(i)) {
      if (c == mesh.n_cells()) continue;
      const Cell& cell = mesh.cell(c);
      double row[4] = {0.0, 0.0, 0.0, 0.0};
      for (std::size_t q = 0; q < nq; ++q) {
        double gx = 0.0;
        double gy = 0.0;
        for (int b = 0; b < 4; ++b) {
          gx += source[cell[b]] * space.grad(q, b)[0];
          gy += source[cell[b]] * space.grad(q, b)[1];
        }
        const double flux = space.jxw(q) * (gx * space.grad(q, a)[0] + gy * space.grad(q, a)[1]);
        for (int b = 0; b < 4; ++b) row[b] += flux * space.shape(q, b);
      }
      for (int b = 0; b < 4; ++b) values[space.entry(c, a, b)] += row[b];
    }
  }
}

void assemble_rate_load(const Q1Space& space, const RateFunction& rate, bool extended,
                        std::span<const double> field, std::span<double> load) {
  const auto& mesh = space.mesh();
  const std::size_t nq = space.n_quad();
  const auto n = static_cast<index>(mesh.n_nodes());
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double sum = 0.0;
    for (const auto& [c, a] : mesh.node_cells(i)) {
      if (c == mesh.n_cells()) continue;
      const Cell& cell = mesh.cell(c);
      for (std::size_t q = 0; q < nq; ++q) {
        double s = 0.0;
        for (int b = 0; b < 4; ++b) s += field[cell[b]] * space.shape(q, b);
        const double r = extended ? rate.evaluate_extended(s) : rate.evaluate_extended(std::max(s, 0.0));
        sum += space.jxw(q) * r * space.shape(q, a);
      }
    }
    load[i] = sum;
  }
}

void artificial_diffusion(const SparsityPattern& pattern, std::span<const double> a, std::span<double> d) {
  const auto n = static_cast<index>(pattern.n());
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
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
  const auto ne = static_cast<index>(pattern.n_edges());
#pragma omp parallel for schedule(static)
  for (index ee = 0; ee < ne; ++ee) {
    const auto e = static_cast<std::size_t>(ee);
    const std::size_t i = pattern.edge_lo(e);
    const std::size_t j = pattern.edge_hi(e);
    const std::size_t k = pattern.edge_upper(e);
    const double mij = mass[k];
    flux[e] = (-mij + theta * dt * d_new[k]) * (u_iter[j] - u_iter[i]) +
              (mij + (1.0 - theta) * dt * d_old[k]) * (u_old[j] - u_old[i]);
  }
}

void prelimit(const SparsityPattern& pattern, std::span<double> flux, std::span<const double> u_low) {
  const auto ne = static_cast<index>(pattern.n_edges());
#pragma omp parallel for schedule(static)
  for (index ee = 0; ee < ne; ++ee) {
    const auto e = static_cast<std::size_t>(ee);
    if (flux[e] * (u_low[pattern.edge_hi(e)] - u_low[pattern.edge_lo(e)]) > 0.0) flux[e] = 0.0;
  }
}

// Node pass: gathers signed edge fluxes over row i, so each node's P, Q, R
// have a single writer.
void zalesak_node_factors(const SparsityPattern& pattern, std::span<const double> u_low,
                          std::span<const double> m_lumped, LimiterWorkspace& ws) {
  const auto n = static_cast<index>(pattern.n());
  std::span<const double> flux = ws.raw_flux;
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double pp = 0.0;
    double pm = 0.0;
    double umax = u_low[i];
    double umin = u_low[i];
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      const std::size_t j = pattern.col(k);
      umax = std::max(umax, u_low[j]);
      umin = std::min(umin, u_low[j]);
      if (j == i) continue;
      const double f = signed_edge_value(pattern, flux, i, k);
      if (f > 0.0) {
        pp += f;
      } else {
        pm += f;
      }
    }
    ws.p_plus[i] = pp;
    ws.p_minus[i] = pm;
    ws.q_plus[i] = m_lumped[i] * (umax - u_low[i]);
    ws.q_minus[i] = m_lumped[i] * (umin - u_low[i]);
    ws.r_plus[i] = pp < kVanishingFluxSum ? 1.0 : std::min(1.0, ws.q_plus[i] / pp);
    ws.r_minus[i] = -pm < kVanishingFluxSum ? 1.0 : std::min(1.0, ws.q_minus[i] / pm);
  }
}

void zalesak_edge_alpha(const SparsityPattern& pattern, LimiterWorkspace& ws) {
  const auto ne = static_cast<index>(pattern.n_edges());
#pragma omp parallel for schedule(static)
  for (index ee = 0; ee < ne; ++ee) {
    const auto e = static_cast<std::size_t>(ee);
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
  const auto n = static_cast<index>(pattern.n());
#pragma omp parallel for schedule(static)
  for (index ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double s = 0.0;
    for (std::size_t k = pattern.row_begin(i); k < pattern.row_end(i); ++k) {
      const std::size_t e = pattern.entry_edge(k);
      if (e == npos) continue;
      const double g = alpha[e] * flux[e];
      s += i < pattern.col(k) ? g : -g;
    }
    out[i] = s;
  }
}

}  // namespace graffito::kernels::parallel
