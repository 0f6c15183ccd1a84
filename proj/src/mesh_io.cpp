#include "minres/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace minres {

void write_mesh(const Triangulation& mesh, std::ostream& out) {
  out << std::setprecision(17);
  for (const Point& p : mesh.vertices()) out << "v " << p.x() << ' ' << p.y() << '\n';
  for (const auto& el : mesh.elements()) out << "t " << el[0] << ' ' << el[1] << ' ' << el[2] << '\n';
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_elements(e)[1] >= 0) continue;
    out << "b " << mesh.edge(e)[0] << ' ' << mesh.edge(e)[1] << ' '
        << (mesh.edge_tag(e) == BoundaryTag::Neumann ? "neumann" : "dirichlet") << '\n';
  }
}

void write_mesh(const Triangulation& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_mesh(mesh, out);
  if (!out) throw IoError("write to " + path + " failed");
}

Triangulation read_mesh(std::istream& in) {
  std::vector<Point> vertices;
  std::vector<Triangulation::ElementVertices> elements;
  std::vector<std::pair<std::array<Index, 2>, BoundaryTag>> boundary;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key) || key[0] == '#') continue;
    bool ok = true;
    if (key == "v") {
      double x, y;
      ok = static_cast<bool>(ls >> x >> y);
      if (ok) vertices.emplace_back(x, y);
    } else if (key == "t") {
      Index i, j, k;
      ok = static_cast<bool>(ls >> i >> j >> k);
      if (ok) elements.push_back({i, j, k});
    } else if (key == "b") {
      Index i, j;
      std::string tag;
      ok = static_cast<bool>(ls >> i >> j >> tag) && (tag == "dirichlet" || tag == "neumann");
      if (ok) {
        boundary.push_back({{std::min(i, j), std::max(i, j)},
                            tag == "neumann" ? BoundaryTag::Neumann : BoundaryTag::Dirichlet});
      }
    } else {
      ok = false;
    }
    if (!ok) throw IoError("malformed mesh line " + std::to_string(lineno) + ": " + line);
  }
  const Index nv = static_cast<Index>(vertices.size());
  for (const auto& el : elements) {
    for (Index v : el) {
      if (v < 0 || v >= nv) throw IoError("element references missing vertex " + std::to_string(v));
    }
  }
  std::map<std::pair<double, double>, BoundaryTag> by_midpoint;
  for (const auto& [edge, tag] : boundary) {
    if (edge[0] < 0 || edge[1] >= nv) throw IoError("boundary line references missing vertex");
    const Point m = 0.5 * (vertices[edge[0]] + vertices[edge[1]]);
    by_midpoint[{m.x(), m.y()}] = tag;
  }
  auto tags = [by_midpoint](const Point& m) {
    const auto it = by_midpoint.find({m.x(), m.y()});
    return it == by_midpoint.end() ? BoundaryTag::Dirichlet : it->second;
  };
  return Triangulation(std::move(vertices), std::move(elements), tags);
}

Triangulation read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_mesh(in);
}

}  // namespace minres
