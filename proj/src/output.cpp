#include "graffito/output.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace graffito {

std::string format_exact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_for_writing(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error("error while writing '" + path + "'");
}

void write_scalars(std::ostream& out, const char* name, const std::vector<double>& values) {
  out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (const double v : values) out << format_exact(v) << '\n';
}

template <class Enum>
void write_codes(std::ostream& out, const char* name, const std::vector<Enum>& codes) {
  out << "SCALARS " << name << " int 1\nLOOKUP_TABLE default\n";
  for (const Enum c : codes) out << static_cast<int>(c) << '\n';
}

}  // namespace

void write_fields_vtk(const StateFields& state, const StructuredQuadMesh& mesh, std::ostream& out) {
  const std::size_t n = mesh.n_nodes();
  if (state.size() != n) throw std::invalid_argument("write_fields_vtk: state does not match mesh");
  out << "# vtk DataFile Version 3.0\n";
  out << "graffito t=" << format_exact(state.t) << '\n';
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& p : mesh.nodes()) out << format_exact(p.x) << ' ' << format_exact(p.y) << " 0\n";
  out << "CELLS " << mesh.n_cells() << ' ' << 5 * mesh.n_cells() << '\n';
  for (const auto& c : mesh.cells()) out << "4 " << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  out << "CELL_TYPES " << mesh.n_cells() << '\n';
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) out << "9\n";
  out << "POINT_DATA " << n << '\n';
  write_scalars(out, "u", state.u);
  write_scalars(out, "v", state.v);
  write_scalars(out, "w", state.w);
  write_scalars(out, "z", state.z);
  const auto classes = classify(state);
  write_codes(out, "gang_class", classes.gang_class);
  write_codes(out, "graffiti_class", classes.graffiti_class);
}

void write_fields_vtk(const StateFields& state, const StructuredQuadMesh& mesh, const std::string& path) {
  auto out = open_for_writing(path);
  write_fields_vtk(state, mesh, out);
  finish(out, path);
}

void write_diagonal_csv(const DiagonalSnapshot& rows, std::ostream& out) {
  out << "s,u,v,w,z\n";
  for (const auto& r : rows) {
    out << format_exact(r.s) << ',' << format_exact(r.u) << ',' << format_exact(r.v) << ',' << format_exact(r.w)
        << ',' << format_exact(r.z) << '\n';
  }
}

void write_diagonal_csv(const DiagonalSnapshot& rows, const std::string& path) {
  auto out = open_for_writing(path);
  write_diagonal_csv(rows, out);
  finish(out, path);
}

void write_lyapunov_csv(std::span<const LyapunovSample> samples, std::ostream& out) {
  out << "t,y,c,dev_u,dev_v,dev_w,dev_z,grad_w,grad_z\n";
  for (const auto& s : samples) {
    out << format_exact(s.t) << ',' << format_exact(s.y) << ',' << format_exact(s.c_mult);
    for (const double c : s.components) out << ',' << format_exact(c);
    out << '\n';
  }
}

void write_lyapunov_csv(std::span<const LyapunovSample> samples, const std::string& path) {
  auto out = open_for_writing(path);
  write_lyapunov_csv(samples, out);
  finish(out, path);
}

}  // namespace graffito
