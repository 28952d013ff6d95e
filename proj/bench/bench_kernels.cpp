// Serial reference kernels against their OpenMP counterparts on the L = 5 and
// L = 7 meshes. Arg(0) is the serial flavour, Arg(1) the parallel one.

#include <benchmark/benchmark.h>

#include <random>

#include "graffito/afc.hpp"
#include "graffito/fem.hpp"
#include "graffito/kernels.hpp"

using namespace graffito;
namespace ks = graffito::kernels::serial;
namespace kp = graffito::kernels::parallel;

namespace {

struct Data {
  Q1Space space;
  const SparsityPattern& p;
  SparseMatrix mass;
  std::vector<double> ml, source, field, conv, d, ubar, ui, uo, out;
  LimiterWorkspace ws;

  explicit Data(int level)
      : space(StructuredQuadMesh(Rectangle{}, level)), p(*space.pattern()), mass(assemble_mass(space)),
        ml(lump_mass(mass)), ws(p) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto fill = [&](std::vector<double>& v, std::size_t n) {
      v.resize(n);
      for (auto& x : v) x = uni(rng);
    };
    fill(source, p.n());
    fill(field, p.n());
    fill(ubar, p.n());
    fill(ui, p.n());
    fill(uo, p.n());
    out.resize(p.n());
    conv.resize(p.nnz());
    d.resize(p.nnz());
    ks::assemble_convection(space, source, conv);
    ks::artificial_diffusion(p, conv, d);
    ks::fluxes(p, mass.values(), d, d, ui, uo, 0.5, 1.0, ws.raw_flux);
  }
};

Data& data(int level) {
  static Data l5(5), l7(7);
  return level == 5 ? l5 : l7;
}

int level_of(const benchmark::State& s) { return static_cast<int>(s.range(1)); }

void BM_spmv(benchmark::State& state) {
  auto& x = data(level_of(state));
  for (auto _ : state) {
    if (state.range(0) == 0) {
      ks::spmv(x.p, x.mass.values(), x.field, x.out);
    } else {
      kp::spmv(x.p, x.mass.values(), x.field, x.out);
    }
    benchmark::DoNotOptimize(x.out.data());
  }
}

void BM_convection(benchmark::State& state) {
  auto& x = data(level_of(state));
  for (auto _ : state) {
    if (state.range(0) == 0) {
      ks::assemble_convection(x.space, x.source, x.conv);
    } else {
      kp::assemble_convection(x.space, x.source, x.conv);
    }
    benchmark::DoNotOptimize(x.conv.data());
  }
}

void BM_rate_load(benchmark::State& state) {
  auto& x = data(level_of(state));
  for (auto _ : state) {
    if (state.range(0) == 0) {
      ks::assemble_rate_load(x.space, RateFunction{}, false, x.field, x.out);
    } else {
      kp::assemble_rate_load(x.space, RateFunction{}, false, x.field, x.out);
    }
    benchmark::DoNotOptimize(x.out.data());
  }
}

void BM_limiter(benchmark::State& state) {
  auto& x = data(level_of(state));
  for (auto _ : state) {
    if (state.range(0) == 0) {
      ks::fluxes(x.p, x.mass.values(), x.d, x.d, x.ui, x.uo, 0.5, 1.0, x.ws.raw_flux);
      ks::prelimit(x.p, x.ws.raw_flux, x.ubar);
      ks::zalesak_node_factors(x.p, x.ubar, x.ml, x.ws);
      ks::zalesak_edge_alpha(x.p, x.ws);
      ks::limited_increment(x.p, x.ws.raw_flux, x.ws.alpha, x.out);
    } else {
      kp::fluxes(x.p, x.mass.values(), x.d, x.d, x.ui, x.uo, 0.5, 1.0, x.ws.raw_flux);
      kp::prelimit(x.p, x.ws.raw_flux, x.ubar);
      kp::zalesak_node_factors(x.p, x.ubar, x.ml, x.ws);
      kp::zalesak_edge_alpha(x.p, x.ws);
      kp::limited_increment(x.p, x.ws.raw_flux, x.ws.alpha, x.out);
    }
    benchmark::DoNotOptimize(x.out.data());
  }
}

void shapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"parallel", "level"});
  for (const int level : {5, 7}) {
    for (const int flavour : {0, 1}) b->Args({flavour, level});
  }
}

}  // namespace

BENCHMARK(BM_spmv)->Apply(shapes);
BENCHMARK(BM_convection)->Apply(shapes);
BENCHMARK(BM_rate_load)->Apply(shapes);
BENCHMARK(BM_limiter)->Apply(shapes);

BENCHMARK_MAIN();
