#include "curvatura/stereo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace curvatura {

StereoMap StereoMap::make(const LinkSurface& s, const Vec4& pole) {
  const double r = s.radius;
  if (!pole.allFinite()) throw bad_pole("pole coordinates must be finite");
  if (std::abs(pole.norm() - r) > 1e-9 * std::max(1.0, r))
    throw bad_pole("pole must lie on the radius-r sphere");
  if (std::abs(s.F.value(pole)) <= 1e-6)
    throw bad_pole("pole lies on (or too close to) the surface");
  StereoMap st;
  st.pole_ = pole;
  st.r_ = r;
  // deterministic orthonormal basis of pole^perp: Gram-Schmidt the least
  // pole-aligned coordinate axes
  const Vec4 n = pole / r;
  std::array<int, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(n[a]) < std::abs(n[b]);
  });
  int row = 0;
  std::array<Vec4, 3> rows;
  for (int idx : order) {
    if (row == 3) break;
    Vec4 t = Vec4::Unit(idx);
    t -= t.dot(n) * n;
    for (int j = 0; j < row; ++j) t -= t.dot(rows[j]) * rows[j];
    const double len = t.norm();
    if (len < 1e-6) continue;
    rows[row++] = t / len;
  }
  if (row != 3) throw bad_pole("failed to build the projection plane basis");
  for (int i = 0; i < 3; ++i) st.basis_.row(i) = rows[i].transpose();
  return st;
}

Vec3 StereoMap::project(const Vec4& x) const {
  if ((x - pole_).norm() < 1e-6 * r_)
    throw bad_pole("point too close to the projection pole");
  const double denom = r_ * r_ - x.dot(pole_);
  const double t = r_ * r_ / denom;
  const Vec4 img = pole_ + t * (x - pole_);
  return basis_ * img;
}

Vec4 StereoMap::unproject(const Vec3& q) const {
  const Vec4 Q = basis_.transpose() * q;  // point of the plane in R^4
  const double s = 2 * r_ * r_ / (Q.squaredNorm() + r_ * r_);
  return s * Q + (1 - s) * pole_;
}

Vec3 StereoMap::differential(const Vec4& x, const Vec4& w) const {
  const double denom = r_ * r_ - x.dot(pole_);
  if (std::abs(denom) < 1e-12 * r_ * r_)
    throw bad_pole("differential requested at the pole");
  const double t = r_ * r_ / denom;
  // d sigma(x) w = t w + (t^2 / r^2) <w, P> (x - P)
  const Vec4 img = t * w + (t * t / (r_ * r_)) * w.dot(pole_) * (x - pole_);
  return basis_ * img;
}

Vec4 nu_orthogonal_to_mu(const SurfacePoint& sp) {
  const double mm = sp.mu.squaredNorm();
  if (mm < 1e-300) throw degenerate_frame("radial field vanishes");
  const Vec4 nhat = sp.nu - (sp.nu.dot(sp.mu) / mm) * sp.mu;
  if (nhat.norm() < 1e-8)
    throw degenerate_frame("normal is radial: input point off the surface?");
  return nhat;
}

// ---------------------------------------------------------------------
// Meshing
// ---------------------------------------------------------------------

namespace {

// boundary vertex class after welding: x-arc points identify across sx,
// y-arc points across sy, corners across everything
enum class SeamKind { Interior, XArc, YArc, Corner };

SeamKind classify_ray(int j, int n) {
  if (j % n == 0) return SeamKind::Corner;
  const int arc = (j / n) % 6;  // theta_j = -30 deg + 60 deg * (j / n)
  return arc % 2 == 0 ? SeamKind::XArc : SeamKind::YArc;
}

}  // namespace

SurfaceMesh mesh_double_torus(const LinkSurface& s, const StereoMap& st, int n) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("chart meshing is implemented for (p, q) = (2, 3)");
  if (n < 8) throw invalid_parameter("need at least 8 samples per hexagon edge");
  const double r = s.radius;
  const int N = 6 * n;  // angular samples; corners at multiples of n
  const int m = n;      // radial rings
  const int signs[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

  // precompute boundary polar data; nudge each boundary radius inward by a
  // few ulps until the vanishing radicand evaluates <= 0 there, so that the
  // welded lift coordinate clamps to an exact zero in every chart
  std::vector<double> theta(N), rho_b(N);
  for (int j = 0; j < N; ++j) {
    theta[j] = -M_PI / 6 + 2 * M_PI * j / N;
    rho_b[j] = hexagon_boundary_radius(r, theta[j]);
    // at a corner both radicands vanish and must both clamp; on an arc only
    // the smaller one does
    const bool corner = classify_ray(j, n) == SeamKind::Corner;
    const double cth = std::cos(theta[j]), sth = std::sin(theta[j]);
    for (int k = 0; k < 64; ++k) {
      const double u = rho_b[j] * cth, v = rho_b[j] * sth;
      const double r1 = chart_rad1(r, u, v), r2 = chart_rad2(r, u, v);
      if ((corner ? std::max(r1, r2) : std::min(r1, r2)) <= 0) break;
      rho_b[j] = std::nextafter(rho_b[j], std::numeric_limits<double>::infinity());
    }
  }

  SurfaceMesh mesh;
  mesh.rings = n;
  auto push_vertex = [&](const Vec4& p) {
    mesh.vertices4.push_back(p);
    return static_cast<int>(mesh.vertices4.size()) - 1;
  };

  // shared boundary vertices
  std::vector<std::array<int, 2>> xarc_ids(N, {-1, -1});  // by sy slot
  std::vector<std::array<int, 2>> yarc_ids(N, {-1, -1});  // by sx slot
  std::vector<int> corner_ids(N, -1);
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < N; ++j) {
    const SeamKind kind = classify_ray(j, n);
    const double u = rho_b[j] * std::cos(theta[j]);
    const double v = rho_b[j] * std::sin(theta[j]);
    if (kind == SeamKind::Corner) {
      corner_ids[j] = push_vertex(Vec4(0, 0, u, v));
    } else if (kind == SeamKind::XArc) {
      const double rad2 = std::max(chart_rad2(r, u, v), 0.0);
      const double y = std::sqrt(rad2) * inv_sqrt2;
      xarc_ids[j] = {push_vertex(Vec4(0, -y, u, v)), push_vertex(Vec4(0, y, u, v))};
    } else {
      const double rad1 = std::max(chart_rad1(r, u, v), 0.0);
      const double x = std::sqrt(rad1) * inv_sqrt2;
      yarc_ids[j] = {push_vertex(Vec4(-x, 0, u, v)), push_vertex(Vec4(x, 0, u, v))};
    }
  }

  // per-chart interior vertices: center + rings 1..m-1
  std::array<int, 4> center_id;
  std::array<std::vector<int>, 4> ring_ids;  // [(i-1) * N + j] for i in 1..m-1
  for (int c = 0; c < 4; ++c) {
    const int sx = signs[c][0], sy = signs[c][1];
    center_id[c] = push_vertex(chart_phi(r, sx, sy, 0, 0));
    ring_ids[c].assign(static_cast<size_t>(m - 1) * N, -1);
    for (int i = 1; i < m; ++i)
      for (int j = 0; j < N; ++j) {
        const double rho = rho_b[j] * i / m;
        ring_ids[c][static_cast<size_t>(i - 1) * N + j] = push_vertex(
            chart_phi(r, sx, sy, rho * std::cos(theta[j]), rho * std::sin(theta[j])));
      }
  }

  auto boundary_id = [&](int c, int j) {
    const SeamKind kind = classify_ray(j, n);
    const int sx = signs[c][0], sy = signs[c][1];
    if (kind == SeamKind::Corner) return corner_ids[j];
    if (kind == SeamKind::XArc) return xarc_ids[j][sy > 0 ? 1 : 0];
    return yarc_ids[j][sx > 0 ? 1 : 0];
  };
  auto grid_id = [&](int c, int i, int j) {  // ring i in 0..m, wrapped j
    j = ((j % N) + N) % N;
    if (i == 0) return center_id[c];
    if (i == m) return boundary_id(c, j);
    return ring_ids[c][static_cast<size_t>(i - 1) * N + j];
  };

  // weld verification: points that the construction identifies must agree
  // between the charts' own closed-form boundary values
  for (int j = 0; j < N; ++j) {
    const SeamKind kind = classify_ray(j, n);
    if (kind == SeamKind::Interior) continue;
    for (int c1 = 0; c1 < 4; ++c1)
      for (int c2 = c1 + 1; c2 < 4; ++c2) {
        if (boundary_id(c1, j) != boundary_id(c2, j)) continue;
        // distance between the charts' unclamped lifts at the shared
        // (u, v): they differ in the sign of each vanishing coordinate
        // (one on an arc, possibly both at a corner)
        const double u = rho_b[j] * std::cos(theta[j]);
        const double v = rho_b[j] * std::sin(theta[j]);
        const double r1 = chart_rad1(r, u, v), r2 = chart_rad2(r, u, v);
        const double gap2 =
            kind == SeamKind::Corner
                ? 2 * (std::max(r1, 0.0) + std::max(r2, 0.0))
                : 2 * std::max(std::min(r1, r2), 0.0);
        if (std::sqrt(gap2) > 1e-9 * std::max(1.0, r))
          throw weld_failure("seam vertices disagree beyond tolerance");
      }
  }

  // faces; base winding counterclockwise in (u, v), flipped on charts where
  // the lift reverses orientation (sx * sy < 0)
  auto push_face = [&](int a, int b, int cc, bool flip) {
    if (a == b || b == cc || a == cc) return;  // degenerate at weld points
    if (flip) std::swap(b, cc);
    mesh.faces.push_back({a, b, cc});
  };
  for (int c = 0; c < 4; ++c) {
    const bool flip = signs[c][0] * signs[c][1] < 0;
    for (int j = 0; j < N; ++j)
      push_face(grid_id(c, 0, 0), grid_id(c, 1, j), grid_id(c, 1, j + 1), flip);
    for (int i = 1; i < m; ++i)
      for (int j = 0; j < N; ++j) {
        const int a = grid_id(c, i, j), b = grid_id(c, i + 1, j);
        const int cc = grid_id(c, i + 1, j + 1), d = grid_id(c, i, j + 1);
        push_face(a, b, cc, flip);
        push_face(a, cc, d, flip);
      }
  }

  mesh.vertices3.reserve(mesh.vertices4.size());
  for (const Vec4& p : mesh.vertices4) mesh.vertices3.push_back(st.project(p));
  return mesh;
}

MeshTopologyReport mesh_topology(const SurfaceMesh& mesh) {
  MeshTopologyReport rep;
  rep.vertex_count = static_cast<int>(mesh.vertices4.size());
  rep.face_count = static_cast<int>(mesh.faces.size());
  std::map<std::pair<int, int>, std::array<int, 2>> edges;  // undirected -> use counts per direction
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      auto key = std::minmax(a, b);
      auto& slot = edges[{key.first, key.second}];
      ++slot[a < b ? 0 : 1];
    }
  rep.edge_count = static_cast<int>(edges.size());
  rep.closed = true;
  rep.oriented = true;
  for (const auto& [key, dirs] : edges) {
    const int total = dirs[0] + dirs[1];
    if (total != 2) {
      rep.closed = false;
      if (total < 2) ++rep.boundary_edges;
      else ++rep.nonmanifold_edges;
    } else if (dirs[0] != 1 || dirs[1] != 1) {
      rep.oriented = false;  // both faces traverse the edge the same way
    }
  }
  rep.euler = rep.vertex_count - rep.edge_count + rep.face_count;
  return rep;
}

std::vector<std::vector<Vec3>> project_traces(const StereoMap& st,
                                              const std::vector<Trace>& traces) {
  std::vector<std::vector<Vec3>> out;
  out.reserve(traces.size());
  for (const Trace& t : traces) {
    std::vector<Vec3> poly;
    poly.reserve(t.vertices.size());
    for (const Vec4& v : t.vertices) poly.push_back(st.project(v));
    out.push_back(std::move(poly));
  }
  return out;
}

}  // namespace curvatura
