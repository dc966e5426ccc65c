#include "harmap/svg.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace harmap {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

} // namespace

std::string geodesic_path(const DiskPoint& a, const DiskPoint& b) {
  std::ostringstream out;
  out << "M " << fmt(a.x) << " " << fmt(a.y) << " ";
  double cross = a.x * b.y - a.y * b.x;
  // The supporting circle is orthogonal to the unit circle: its center c
  // solves a.c = (1+|a|^2)/2, b.c = (1+|b|^2)/2. A vanishing determinant
  // means the geodesic is a diameter.
  if (std::abs(cross) < 1e-12) {
    out << "L " << fmt(b.x) << " " << fmt(b.y);
    return out.str();
  }
  double ra = 0.5 * (1.0 + a.norm2());
  double rb = 0.5 * (1.0 + b.norm2());
  double cx = (ra * b.y - rb * a.y) / cross;
  double cy = (rb * a.x - ra * b.x) / cross;
  double r = std::sqrt(cx * cx + cy * cy - 1.0);
  int sweep = ((a.x - cx) * (b.y - cy) - (a.y - cy) * (b.x - cx)) > 0.0 ? 1 : 0;
  out << "A " << fmt(r) << " " << fmt(r) << " 0 0 " << sweep << " " << fmt(b.x)
      << " " << fmt(b.y);
  return out.str();
}

std::string tessellation_svg(const GeodesicRealization& r, int word_len) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
         "width=\"1000\" height=\"1000\" viewBox=\"-1.05 -1.05 2.1 2.1\">\n"
      << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-linecap=\"round\">\n"
      << "<circle cx=\"0\" cy=\"0\" r=\"1\" stroke=\"#000000\" "
         "stroke-width=\"0.004\"/>\n";

  const TriMesh& mesh = r.cut.cut_mesh;
  for (const GroupElement& g : enumerate_group(r.polygon, word_len)) {
    bool base = g.word.empty();
    out << "<g class=\"copy\" stroke=\"" << (base ? "#1f4e89" : "#9aa7b5")
        << "\" stroke-width=\"" << (base ? "0.0022" : "0.0012") << "\">\n";
    for (int e = 0; e < mesh.n_edges(); ++e) {
      auto [u, v] = mesh.edge_vertices(e);
      DiskPoint p = g.transform.apply(r.positions[u]);
      DiskPoint q = g.transform.apply(r.positions[v]);
      if (hyp_distance(p, q) < kDegenerateEdgeLength) continue;
      out << "<path d=\"" << geodesic_path(p, q) << "\"/>\n";
    }
    out << "</g>\n";
  }

  out << "<g class=\"polygon\" stroke=\"#c03a2b\" stroke-width=\"0.003\">\n";
  for (int k = 0; k < r.polygon.n_sides(); ++k) {
    auto [a, b] = r.polygon.side(k);
    out << "<path d=\"" << geodesic_path(a, b) << "\"/>\n";
  }
  out << "</g>\n</g>\n</svg>\n";
  return out.str();
}

} // namespace harmap
