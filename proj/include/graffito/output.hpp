#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "graffito/diagnostics.hpp"
#include "graffito/mesh.hpp"
#include "graffito/model.hpp"

namespace graffito {

/// Legacy ASCII VTK unstructured grid: quads (cell type 9) in the plane z = 0,
/// point data u, v, w, z (double) and gang_class, graffiti_class (int).
/// Layout is documented in docs/formats.md.
void write_fields_vtk(const StateFields& state, const StructuredQuadMesh& mesh, std::ostream& out);
void write_fields_vtk(const StateFields& state, const StructuredQuadMesh& mesh, const std::string& path);

/// Header "s,u,v,w,z", one row per diagonal node, 17 significant digits.
void write_diagonal_csv(const DiagonalSnapshot& rows, std::ostream& out);
void write_diagonal_csv(const DiagonalSnapshot& rows, const std::string& path);

/// Header "t,y,c,dev_u,dev_v,dev_w,dev_z,grad_w,grad_z": y, the multiplier,
/// then the six integrals in LyapunovSample order.
void write_lyapunov_csv(std::span<const LyapunovSample> samples, std::ostream& out);
void write_lyapunov_csv(std::span<const LyapunovSample> samples, const std::string& path);

/// Round-trip decimal form used by every writer ("%.17g").
std::string format_exact(double x);

}  // namespace graffito
