#ifndef MINRES_MESH_IO_HPP
#define MINRES_MESH_IO_HPP

#include "minres/mesh.hpp"

#include <iosfwd>
#include <string>

namespace minres {

/// Plain text: "v x y" per vertex, "t i j k" per element, "b i j tag" per
/// boundary edge with tag "dirichlet" or "neumann". Lines starting with '#'
/// are ignored.
void write_mesh(const Triangulation& mesh, std::ostream& out);
void write_mesh(const Triangulation& mesh, const std::string& path);

/// Boundary edges without a "b" line default to Dirichlet.
Triangulation read_mesh(std::istream& in);
Triangulation read_mesh(const std::string& path);

}  // namespace minres

#endif  // MINRES_MESH_IO_HPP
