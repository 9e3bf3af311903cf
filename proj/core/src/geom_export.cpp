#include "curvatura/geom_export.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace curvatura {

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void put3(std::ostream& os, const Vec3& p, char sep = ' ') {
  os << format_g17(p[0]) << sep << format_g17(p[1]) << sep << format_g17(p[2]);
}

size_t polyline_vertex_count(const std::vector<std::vector<Vec3>>& polys) {
  size_t n = 0;
  for (const auto& p : polys) n += p.size();
  return n;
}

size_t polyline_edge_count(const std::vector<std::vector<Vec3>>& polys,
                           const std::vector<bool>* closed) {
  size_t n = 0;
  for (size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].size() < 2) continue;
    n += polys[i].size() - 1;
    if (closed && i < closed->size() && (*closed)[i]) ++n;
  }
  return n;
}

}  // namespace

void write_ply(std::ostream& os, const SurfaceMesh* mesh,
               const std::vector<std::vector<Vec3>>* polylines,
               const std::vector<bool>* polyline_closed) {
  const size_t nmesh = mesh ? mesh->vertices3.size() : 0;
  const size_t nfaces = mesh ? mesh->faces.size() : 0;
  const size_t npoly = polylines ? polyline_vertex_count(*polylines) : 0;
  const size_t nedges =
      polylines ? polyline_edge_count(*polylines, polyline_closed) : 0;
  os << "ply\nformat ascii 1.0\ncomment curvatura geometry\n";
  os << "element vertex " << nmesh + npoly << "\n";
  os << "property double x\nproperty double y\nproperty double z\n";
  os << "element face " << nfaces << "\n";
  os << "property list uchar int vertex_indices\n";
  os << "element edge " << nedges << "\n";
  os << "property int vertex1\nproperty int vertex2\n";
  os << "end_header\n";
  if (mesh)
    for (const Vec3& p : mesh->vertices3) {
      put3(os, p);
      os << "\n";
    }
  if (polylines)
    for (const auto& poly : *polylines)
      for (const Vec3& p : poly) {
        put3(os, p);
        os << "\n";
      }
  if (mesh)
    for (const auto& f : mesh->faces)
      os << "3 " << f[0] << " " << f[1] << " " << f[2] << "\n";
  if (polylines) {
    size_t base = nmesh;
    for (size_t i = 0; i < polylines->size(); ++i) {
      const auto& poly = (*polylines)[i];
      if (poly.size() >= 2) {
        for (size_t k = 0; k + 1 < poly.size(); ++k)
          os << base + k << " " << base + k + 1 << "\n";
        if (polyline_closed && i < polyline_closed->size() && (*polyline_closed)[i])
          os << base + poly.size() - 1 << " " << base << "\n";
      }
      base += poly.size();
    }
  }
}

void write_obj(std::ostream& os, const SurfaceMesh* mesh,
               const std::vector<std::vector<Vec3>>* polylines,
               const std::vector<bool>* polyline_closed) {
  os << "# curvatura geometry\n";
  if (mesh)
    for (const Vec3& p : mesh->vertices3) {
      os << "v ";
      put3(os, p);
      os << "\n";
    }
  if (polylines)
    for (const auto& poly : *polylines)
      for (const Vec3& p : poly) {
        os << "v ";
        put3(os, p);
        os << "\n";
      }
  if (mesh)
    for (const auto& f : mesh->faces)
      os << "f " << f[0] + 1 << " " << f[1] + 1 << " " << f[2] + 1 << "\n";
  if (polylines) {
    size_t base = mesh ? mesh->vertices3.size() : 0;
    for (size_t i = 0; i < polylines->size(); ++i) {
      const auto& poly = (*polylines)[i];
      if (poly.size() >= 2) {
        os << "l";
        for (size_t k = 0; k < poly.size(); ++k) os << " " << base + k + 1;
        if (polyline_closed && i < polyline_closed->size() && (*polyline_closed)[i])
          os << " " << base + 1;
        os << "\n";
      }
      base += poly.size();
    }
  }
}

void write_traces_csv(std::ostream& os, const std::vector<Trace>& traces,
                      const StereoMap& st) {
  os << "x,y,u,v,sx,sy,sz,foliation,closed\n";
  for (const Trace& t : traces) {
    const char* fol = t.foliation == Foliation::Max ? "max" : "min";
    const int closed = t.closed ? 1 : 0;
    for (const Vec4& p : t.vertices) {
      const Vec3 q = st.project(p);
      os << format_g17(p[0]) << "," << format_g17(p[1]) << "," << format_g17(p[2])
         << "," << format_g17(p[3]) << "," << format_g17(q[0]) << ","
         << format_g17(q[1]) << "," << format_g17(q[2]) << "," << fol << ","
         << closed << "\n";
    }
  }
}

void write_umbilics_json(std::ostream& os, double radius,
                         const std::vector<UmbilicReport>& umbilics,
                         const CWComplex* cw) {
  os << "{\n  \"radius\": " << format_g17(radius) << ",\n  \"umbilics\": [";
  for (size_t i = 0; i < umbilics.size(); ++i) {
    const UmbilicReport& u = umbilics[i];
    os << (i ? ",\n    {" : "\n    {");
    os << "\"position\": [" << format_g17(u.position[0]) << ", "
       << format_g17(u.position[1]) << ", " << format_g17(u.position[2]) << ", "
       << format_g17(u.position[3]) << "], ";
    os << "\"signs\": [" << u.sx << ", " << u.sy << "], ";
    os << "\"index\": " << format_g17(u.index) << ", ";
    os << "\"slopes\": [";
    for (size_t k = 0; k < u.slopes.size(); ++k)
      os << (k ? ", " : "") << format_g17(u.slopes[k]);
    os << "], \"type\": \"" << u.type << "\"}";
  }
  os << "\n  ]";
  if (cw) {
    os << ",\n  \"cw_complex\": {\"cells\": [" << cw->counts[0] << ", "
       << cw->counts[1] << ", " << cw->counts[2]
       << "], \"euler\": " << cw->euler() << "}";
  }
  os << "\n}\n";
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw io_failure("cannot open for writing: " + path);
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw io_failure("write failed: " + path);
}

}  // namespace

void save_ply(const std::string& path, const SurfaceMesh* mesh,
              const std::vector<std::vector<Vec3>>* polylines,
              const std::vector<bool>* polyline_closed) {
  auto os = open_out(path);
  write_ply(os, mesh, polylines, polyline_closed);
  finish(os, path);
}

void save_obj(const std::string& path, const SurfaceMesh* mesh,
              const std::vector<std::vector<Vec3>>* polylines,
              const std::vector<bool>* polyline_closed) {
  auto os = open_out(path);
  write_obj(os, mesh, polylines, polyline_closed);
  finish(os, path);
}

void save_traces_csv(const std::string& path, const std::vector<Trace>& traces,
                     const StereoMap& st) {
  auto os = open_out(path);
  write_traces_csv(os, traces, st);
  finish(os, path);
}

void save_umbilics_json(const std::string& path, double radius,
                        const std::vector<UmbilicReport>& umbilics,
                        const CWComplex* cw) {
  auto os = open_out(path);
  write_umbilics_json(os, radius, umbilics, cw);
  finish(os, path);
}

}  // namespace curvatura
