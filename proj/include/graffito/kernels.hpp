#pragma once

// Hot loops of the solver in two flavours. `serial` is the straightforward
// reference (cell-wise scatter assembly, sequential sweeps) and is what the
// tests compare against; `parallel` uses OpenMP with owner-computes loops
// (row-wise gather assembly, one writer per node or edge) so no atomics are
// needed. Without OpenMP the parallel flavour compiles to serial loops with
// the gather ordering.

#include <span>

#include "graffito/afc.hpp"
#include "graffito/fem.hpp"
#include "graffito/model.hpp"
#include "graffito/sparse.hpp"

namespace graffito::kernels {

namespace serial {

void spmv(const SparsityPattern& pattern, std::span<const double> values, std::span<const double> x,
          std::span<double> y);
void assemble_convection(const Q1Space& space, std::span<const double> source,
                         std::span<double> values);
void assemble_rate_load(const Q1Space& space, const RateFunction& rate, bool extended,
                        std::span<const double> field, std::span<double> load);
void artificial_diffusion(const SparsityPattern& pattern, std::span<const double> a,
                          std::span<double> d);
void fluxes(const SparsityPattern& pattern, std::span<const double> mass,
            std::span<const double> d_new, std::span<const double> d_old,
            std::span<const double> u_iter, std::span<const double> u_old, double theta, double dt,
            std::span<double> flux);
void prelimit(const SparsityPattern& pattern, std::span<double> flux, std::span<const double> u_low);
void zalesak_node_factors(const SparsityPattern& pattern, std::span<const double> u_low,
                          std::span<const double> m_lumped, LimiterWorkspace& ws);
void zalesak_edge_alpha(const SparsityPattern& pattern, LimiterWorkspace& ws);
void limited_increment(const SparsityPattern& pattern, std::span<const double> flux,
                       std::span<const double> alpha, std::span<double> out);

}  // namespace serial

namespace parallel {

void spmv(const SparsityPattern& pattern, std::span<const double> values, std::span<const double> x,
          std::span<double> y);
void assemble_convection(const Q1Space& space, std::span<const double> source,
                         std::span<double> values);
void assemble_rate_load(const Q1Space& space, const RateFunction& rate, bool extended,
                        std::span<const double> field, std::span<double> load);
void artificial_diffusion(const SparsityPattern& pattern, std::span<const double> a,
                          std::span<double> d);
void fluxes(const SparsityPattern& pattern, std::span<const double> mass,
            std::span<const double> d_new, std::span<const double> d_old,
            std::span<const double> u_iter, std::span<const double> u_old, double theta, double dt,
            std::span<double> flux);
void prelimit(const SparsityPattern& pattern, std::span<double> flux, std::span<const double> u_low);
void zalesak_node_factors(const SparsityPattern& pattern, std::span<const double> u_low,
                          std::span<const double> m_lumped, LimiterWorkspace& ws);
void zalesak_edge_alpha(const SparsityPattern& pattern, LimiterWorkspace& ws);
void limited_increment(const SparsityPattern& pattern, std::span<const double> flux,
                       std::span<const double> alpha, std::span<double> out);

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();
}  // namespace parallel

}  // namespace graffito::kernels
