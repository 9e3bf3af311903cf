#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "curvatura/fields.hpp"
#include "curvatura/tracer.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

// Stereographic projection of the radius-r sphere from a pole P on it,
// onto the hyperplane through the origin orthogonal to P:
//   sigma(X) = P + t (X - P),  t = r^2 / (r^2 - <X, P>).
// Coordinates in that hyperplane are taken against a fixed orthonormal
// basis, chosen deterministically from P.
class StereoMap {
 public:
  // Validates |P| = r (1e-9 relative) and that P is off the surface:
  // F(P) must be nonzero, else every projection request near P would blow
  // up inside the image. Throws bad_pole otherwise.
  static StereoMap make(const LinkSurface& s, const Vec4& pole);
  static Vec4 default_pole(double r) { return Vec4(0, 0, r, 0); }

  const Vec4& pole() const { return pole_; }
  double radius() const { return r_; }

  Vec3 project(const Vec4& x) const;    // throws bad_pole near the pole
  Vec4 unproject(const Vec3& q) const;  // inverse (never hits the pole)
  // differential of sigma at x applied to w, in hyperplane coordinates
  Vec3 differential(const Vec4& x, const Vec4& w) const;

 private:
  StereoMap() = default;
  Vec4 pole_;
  double r_ = 0;
  Eigen::Matrix<double, 3, 4> basis_;  // rows: orthonormal basis of pole^perp
};

// Component of nu orthogonal to mu; its projection by the differential is
// normal to the image surface in R^3 (conformality of sigma).
Vec4 nu_orthogonal_to_mu(const SurfacePoint& sp);

// ---------------------------------------------------------------------
// Watertight triangle mesh of the (2,3) surface: each of the four chart
// pentagons is triangulated over H_uv in polar rings (n rings, 6n angular
// samples, hexagon corners on sample rays) and the chart boundaries are
// welded by construction (x = 0 lifts shared across sx, y = 0 lifts across
// sy, corner points across all four charts).
// ---------------------------------------------------------------------

struct SurfaceMesh {
  std::vector<Vec4> vertices4;
  std::vector<Vec3> vertices3;  // stereographic images
  std::vector<std::array<int, 3>> faces;
  int rings = 0;
};

SurfaceMesh mesh_double_torus(const LinkSurface& s, const StereoMap& st, int n);

struct MeshTopologyReport {
  int vertex_count = 0, edge_count = 0, face_count = 0;
  int euler = 0;
  bool closed = false;            // every edge in exactly two faces
  bool oriented = false;          // windings consistent as built
  int boundary_edges = 0;
  int nonmanifold_edges = 0;
};

MeshTopologyReport mesh_topology(const SurfaceMesh& mesh);

// Projected traces for export: polylines in R^3.
std::vector<std::vector<Vec3>> project_traces(const StereoMap& st,
                                              const std::vector<Trace>& traces);

}  // namespace curvatura
