#include "curvatura/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace curvatura {

OmegaForm omega_at(const LinkSurface& s, const Vec4& x) {
  const Mat4 H = s.F.hessian(x);
  const Vec4 nu = s.F.gradient(x);
  const Vec4 R = 0.5 * s.G.gradient(x);  // radial field (x, y, u, v)
  Mat4 A;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Mat4 d;
      d.col(0) = H.col(i);
      d.col(1) = Vec4::Unit(j);
      d.col(2) = R;
      d.col(3) = nu;
      A(i, j) = d.determinant();
    }
  }
  OmegaForm om;
  om.m = 0.5 * (A + A.transpose());
  om.basepoint = x;
  return om;
}

Mat4 omega_closed_form_23(const Vec4& p) {
  const double x = p[0], y = p[1], u = p[2], v = p[3];
  const double rho2 = u * u + v * v;
  Mat4 m;
  m(0, 0) = 0;
  m(0, 1) = 6 * v * (v * v - 3 * u * u);
  m(0, 2) = -y * v * (2 - 18 * u + 9 * rho2);
  m(0, 3) = y * (9 * (u * u - v * v) + u * (2 + 9 * rho2));
  m(1, 1) = 0;
  m(1, 2) = x * v * (2 + 18 * u + 9 * rho2);
  m(1, 3) = x * (9 * (u * u - v * v) - u * (2 + 9 * rho2));
  m(2, 2) = -24 * x * y * v;
  m(2, 3) = -24 * x * y * u;
  m(3, 3) = 24 * x * y * v;
  for (int i = 1; i < 4; ++i)
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
  return m;
}

double FrameQuadratic::scale() const {
  return std::max({std::abs(c20), std::abs(c11), std::abs(c02)});
}

FrameQuadratic omega_in_frame(const OmegaForm& om, const Vec4& v1, const Vec4& v2) {
  FrameQuadratic q;
  q.c20 = om(v1, v1);
  q.c11 = 2.0 * om(v1, v2);
  q.c02 = om(v2, v2);
  return q;
}

int quadratic_null_directions(const FrameQuadratic& q, std::array<Vec2, 2>& out,
                              double tol) {
  const double sc = q.scale();
  if (sc == 0) return 0;
  double disc = q.discriminant();
  if (disc < -tol * sc * sc)
    throw degenerate_frame("frame quadratic has no real null directions");
  disc = std::max(disc, 0.0);
  const double sq = std::sqrt(disc);
  const double tiny = 1e-14 * sc;
  if (std::abs(q.c20) >= std::abs(q.c02) && std::abs(q.c20) > tiny) {
    out[0] = Vec2((-q.c11 + sq) / (2 * q.c20), 1.0).normalized();
    out[1] = Vec2((-q.c11 - sq) / (2 * q.c20), 1.0).normalized();
  } else if (std::abs(q.c02) > tiny) {
    out[0] = Vec2(1.0, (-q.c11 + sq) / (2 * q.c02)).normalized();
    out[1] = Vec2(1.0, (-q.c11 - sq) / (2 * q.c02)).normalized();
  } else {
    // q = c11 l1 l2: the coordinate axes
    out[0] = Vec2(1, 0);
    out[1] = Vec2(0, 1);
  }
  return 2;
}

PrincipalCurvatures principal_curvatures(const LinkSurface& s,
                                         const SurfacePoint& sp,
                                         double eps_umbilic) {
  const Mat4 H = s.F.hessian(sp.position);
  const double nn = sp.nu.norm();
  if (nn < 1e-300) throw degenerate_frame("vanishing nu");
  Mat2 S;
  S(0, 0) = -sp.t1.dot(H * sp.t1) / nn;
  S(0, 1) = -sp.t1.dot(H * sp.t2) / nn;
  S(1, 0) = S(0, 1);
  S(1, 1) = -sp.t2.dot(H * sp.t2) / nn;

  Eigen::SelfAdjointEigenSolver<Mat2> es(S);
  PrincipalCurvatures pc;
  pc.shape = S;
  pc.kappa_min = es.eigenvalues()(0);
  pc.kappa_max = es.eigenvalues()(1);
  const Vec2 emin = es.eigenvectors().col(0), emax = es.eigenvectors().col(1);
  pc.dir_min = (emin(0) * sp.t1 + emin(1) * sp.t2).normalized();
  pc.dir_max = (emax(0) * sp.t1 + emax(1) * sp.t2).normalized();
  pc.umbilic = std::abs(pc.kappa_max - pc.kappa_min) <=
               eps_umbilic * (1 + std::abs(pc.kappa_max) + std::abs(pc.kappa_min));
  // deterministic sign: largest-magnitude component positive
  for (Vec4* d : {&pc.dir_min, &pc.dir_max}) {
    int imax = 0;
    for (int i = 1; i < 4; ++i)
      if (std::abs((*d)[i]) > std::abs((*d)[imax])) imax = i;
    if ((*d)[imax] < 0) *d = -*d;
  }
  return pc;
}

Mat2 shape_operator_fd(const LinkSurface& s, const SurfacePoint& sp, double h) {
  if (!(h > 0)) throw invalid_parameter("fd step must be positive");
  const Vec4 t[2] = {sp.t1, sp.t2};
  Mat2 S;
  for (int i = 0; i < 2; ++i) {
    const SurfacePoint plus = project_to_surface(s, sp.position + h * t[i]);
    const SurfacePoint minus = project_to_surface(s, sp.position - h * t[i]);
    const Vec4 dn = (plus.unit_nu() - minus.unit_nu()) / (2 * h);
    for (int j = 0; j < 2; ++j) S(i, j) = -dn.dot(t[j]);
  }
  return S;
}

double curvature_gap(const LinkSurface& s, const SurfacePoint& sp) {
  const PrincipalCurvatures pc = principal_curvatures(s, sp);
  return pc.kappa_max - pc.kappa_min;
}

}  // namespace curvatura
