#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "graffito/mesh.hpp"
#include "graffito/model.hpp"
#include "graffito/sparse.hpp"

namespace graffito {

/// Tensor Gauss rule on the reference cell [-1, 1]^2.
struct QuadratureRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;

  static QuadratureRule gauss(int points_per_direction = 2);
  std::size_t size() const { return weights.size(); }
};

/// Q1 space on a structured mesh: the shared 9-point sparsity pattern,
/// per-cell scatter positions, and quadrature tables. Because every cell is
/// the same rectangle, physical shape gradients and JxW are cell-independent.
class Q1Space {
 public:
  explicit Q1Space(StructuredQuadMesh mesh, QuadratureRule rule = QuadratureRule::gauss(2));

  const StructuredQuadMesh& mesh() const { return mesh_; }
  const PatternPtr& pattern() const { return pattern_; }
  std::size_t n_dofs() const { return mesh_.n_nodes(); }
  std::size_t n_quad() const { return rule_.size(); }

  /// Pattern position of (cell node a, cell node b).
  std::size_t entry(std::size_t cell, int a, int b) const { return entries_[cell * 16 + a * 4 + b]; }

  double shape(std::size_t q, int a) const { return shape_[q * 4 + a]; }
  const std::array<double, 2>& grad(std::size_t q, int a) const { return grad_[q * 4 + a]; }
  double jxw(std::size_t q) const { return jxw_[q]; }

 private:
  StructuredQuadMesh mesh_;
  QuadratureRule rule_;
  PatternPtr pattern_;
  std::vector<std::size_t> entries_;
  std::vector<double> shape_;
  std::vector<std::array<double, 2>> grad_;
  std::vector<double> jxw_;
};

/// 9-point stencil pattern of the bilinear basis on a structured mesh.
PatternPtr make_q1_pattern(const StructuredQuadMesh& mesh);

/// Finite-element function given by nodal coefficients.
struct FeFunction {
  const StructuredQuadMesh* mesh = nullptr;
  std::vector<double> coefficients;
};

/// How rate loads treat negative densities: Checked clamps round-off and
/// rejects anything below -kNegativeTolerance; Clamped evaluates r(max(s, 0))
/// without complaint; Extended applies the formula as is.
enum class RateEvaluation { Checked, Clamped, Extended };

SparseMatrix assemble_mass(const Q1Space& space);
std::vector<double> lump_mass(const SparseMatrix& mass);

/// Unit-coefficient stiffness matrix (grad psi_j, grad psi_i).
SparseMatrix assemble_stiffness(const Q1Space& space);

/// Convection matrix C_ij = (psi_j grad s_h, grad psi_i) for the source field s_h.
void assemble_convection(const Q1Space& space, std::span<const double> grad_source, SparseMatrix& out);

/// A = d * K + chi * C(grad_source), reusing a precomputed stiffness matrix.
void assemble_transport(const Q1Space& space, const SparseMatrix& stiffness, double d, double chi,
                        std::span<const double> grad_source, SparseMatrix& out);
SparseMatrix assemble_transport(const Q1Space& space, double d, double chi, const FeFunction& grad_source);

/// G_i = (r(field_h), psi_i).
void assemble_rate_load(const Q1Space& space, const RateFunction& r, std::span<const double> field,
                        std::span<double> out, RateEvaluation mode = RateEvaluation::Checked);
std::vector<double> assemble_rate_load(const Q1Space& space, const RateFunction& r, const FeFunction& field,
                                       RateEvaluation mode = RateEvaluation::Checked);

/// Gradient of the bilinear interpolant in `cell` at a reference point in [-1, 1]^2.
std::array<double, 2> evaluate_gradient_at_quad(const StructuredQuadMesh& mesh, const FeFunction& f,
                                                std::size_t cell, std::array<double, 2> reference_point);

}  // namespace graffito
