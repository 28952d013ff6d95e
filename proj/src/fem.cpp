#include "graffito/fem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "graffito/kernels.hpp"

namespace graffito {

namespace {

// Reference vertex signs, counterclockwise from (-1, -1).
constexpr double kXi[4] = {-1.0, 1.0, 1.0, -1.0};
constexpr double kEta[4] = {-1.0, -1.0, 1.0, 1.0};

double ref_shape(int a, double xi, double eta) { return 0.25 * (1.0 + kXi[a] * xi) * (1.0 + kEta[a] * eta); }
double ref_dxi(int a, double eta) { return 0.25 * kXi[a] * (1.0 + kEta[a] * eta); }
double ref_deta(int a, double xi) { return 0.25 * kEta[a] * (1.0 + kXi[a] * xi); }

}  // namespace

QuadratureRule QuadratureRule::gauss(int points_per_direction) {
  std::vector<double> x;
  std::vector<double> w;
  switch (points_per_direction) {
    case 1:
      x = {0.0};
      w = {2.0};
      break;
    case 2: {
      const double g = 1.0 / std::sqrt(3.0);
      x = {-g, g};
      w = {1.0, 1.0};
      break;
    }
    case 3: {
      const double g = std::sqrt(0.6);
      x = {-g, 0.0, g};
      w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    }
    default:
      throw std::invalid_argument("Gauss rule with " + std::to_string(points_per_direction) +
                                  " points per direction is not tabulated");
  }
  QuadratureRule rule;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      rule.points.push_back({x[i], x[j]});
      rule.weights.push_back(w[i] * w[j]);
    }
  }
  return rule;
}

PatternPtr make_q1_pattern(const StructuredQuadMesh& mesh) {
  std::vector<std::vector<std::size_t>> rows(mesh.n_nodes());
  for (std::size_t i = 0; i < mesh.n_nodes(); ++i) rows[i] = node_neighbors(mesh, i);
  return SparsityPattern::from_rows(rows);
}

Q1Space::Q1Space(StructuredQuadMesh mesh, QuadratureRule rule)
    : mesh_(std::move(mesh)), rule_(std::move(rule)), pattern_(make_q1_pattern(mesh_)) {
  entries_.resize(mesh_.n_cells() * 16);
  for (std::size_t c = 0; c < mesh_.n_cells(); ++c) {
    const Cell& cell = mesh_.cell(c);
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) entries_[c * 16 + a * 4 + b] = pattern_->find(cell[a], cell[b]);
    }
  }
  const std::size_t nq = rule_.size();
  shape_.resize(nq * 4);
  grad_.resize(nq * 4);
  jxw_.resize(nq);
  const double sx = 2.0 / mesh_.hx();
  const double sy = 2.0 / mesh_.hy();
  for (std::size_t q = 0; q < nq; ++q) {
    const auto [xi, eta] = rule_.points[q];
    jxw_[q] = rule_.weights[q] * 0.25 * mesh_.hx() * mesh_.hy();
    for (int a = 0; a < 4; ++a) {
      shape_[q * 4 + a] = ref_shape(a, xi, eta);
      grad_[q * 4 + a] = {ref_dxi(a, eta) * sx, ref_deta(a, xi) * sy};
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

// Cell-wise bilinear forms that do not depend on data; cheap enough to
// assemble serially once per run.
template <class ElementForm>
SparseMatrix assemble_constant(const Q1Space& space, ElementForm form) {
  SparseMatrix m(space.pattern());
  auto values = m.values();
  for (std::size_t c = 0; c < space.mesh().n_cells(); ++c) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        double s = 0.0;
        for (std::size_t q = 0; q < space.n_quad(); ++q) s += form(q, a, b);
        values[space.entry(c, a, b)] += s;
      }
    }
  }
  return m;
}

}  // namespace

SparseMatrix assemble_mass(const Q1Space& space) {
  return assemble_constant(space, [&](std::size_t q, int a, int b) {
    return space.jxw(q) * space.shape(q, a) * space.shape(q, b);
  });
}

std::vector<double> lump_mass(const SparseMatrix& mass) {
  std::vector<double> m = row_sums(mass);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!(m[i] > 0.0)) {
      throw std::logic_error("nonpositive lumped mass at node " + std::to_string(i) + ": assembly error");
    }
  }
  return m;
}

SparseMatrix assemble_stiffness(const Q1Space& space) {
  return assemble_constant(space, [&](std::size_t q, int a, int b) {
    const auto& ga = space.grad(q, a);
    const auto& gb = space.grad(q, b);
    return space.jxw(q) * (ga[0] * gb[0] + ga[1] * gb[1]);
  });
}

void assemble_convection(const Q1Space& space, std::span<const double> grad_source, SparseMatrix& out) {
  if (grad_source.size() != space.n_dofs()) {
    throw std::invalid_argument("convection source has " + std::to_string(grad_source.size()) +
                                " coefficients, mesh has " + std::to_string(space.n_dofs()) + " nodes");
  }
  if (out.pattern_ptr() != space.pattern()) out = SparseMatrix(space.pattern());
  kernels::parallel::assemble_convection(space, grad_source, out.values());
}

void assemble_transport(const Q1Space& space, const SparseMatrix& stiffness, double d, double chi,
                        std::span<const double> grad_source, SparseMatrix& out) {
  if (stiffness.pattern_ptr() != space.pattern()) {
    throw std::invalid_argument("stiffness matrix does not live on this space's pattern");
  }
  assemble_convection(space, grad_source, out);
  auto values = out.values();
  const auto k = stiffness.values();
  for (std::size_t e = 0; e < values.size(); ++e) values[e] = d * k[e] + chi * values[e];
}

SparseMatrix assemble_transport(const Q1Space& space, double d, double chi, const FeFunction& grad_source) {
  if (grad_source.mesh != nullptr &&
      (grad_source.mesh->n_nodes() != space.mesh().n_nodes() ||
       !(grad_source.mesh->domain() == space.mesh().domain()))) {
    throw std::invalid_argument("grad_source lives on a different mesh");
  }
  const SparseMatrix k = assemble_stiffness(space);
  SparseMatrix a(space.pattern());
  assemble_transport(space, k, d, chi, grad_source.coefficients, a);
  return a;
}

void assemble_rate_load(const Q1Space& space, const RateFunction& r, std::span<const double> field,
                        std::span<double> out, RateEvaluation mode) {
  if (field.size() != space.n_dofs() || out.size() != space.n_dofs()) {
    throw std::invalid_argument("rate load dimension mismatch");
  }
  if (mode == RateEvaluation::Checked) {
    // Quadrature values are convex combinations of nodal values, so a nodal
    // scan covers every evaluation point.
    for (std::size_t i = 0; i < field.size(); ++i) {
      if (std::isnan(field[i]) || field[i] < -kNegativeTolerance) {
        throw std::domain_error("rate load: density " + std::to_string(field[i]) + " at node " +
                                std::to_string(i) + " is below the round-off band");
      }
    }
  }
  kernels::parallel::assemble_rate_load(space, r, mode == RateEvaluation::Extended, field, out);
}

std::vector<double> assemble_rate_load(const Q1Space& space, const RateFunction& r, const FeFunction& field,
                                       RateEvaluation mode) {
  std::vector<double> out(space.n_dofs());
  assemble_rate_load(space, r, field.coefficients, out, mode);
  return out;
}

std::array<double, 2> evaluate_gradient_at_quad(const StructuredQuadMesh& mesh, const FeFunction& f,
                                                std::size_t cell, std::array<double, 2> reference_point) {
  if (cell >= mesh.n_cells()) throw std::out_of_range("cell index out of range");
  if (f.coefficients.size() != mesh.n_nodes()) throw std::invalid_argument("coefficient length mismatch");
  const auto [xi, eta] = reference_point;
  const Cell& nodes = mesh.cell(cell);
  std::array<double, 2> grad{0.0, 0.0};
  for (int a = 0; a < 4; ++a) {
    const double fa = f.coefficients[nodes[a]];
    grad[0] += fa * ref_dxi(a, eta) * 2.0 / mesh.hx();
    grad[1] += fa * ref_deta(a, xi) * 2.0 / mesh.hy();
  }
  return grad;
}

}  // namespace graffito
