#pragma once

#include <array>

#include "curvatura/fields.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

// Quadratic differential whose null directions are the nu-principal
// directions: Omega(X, X) = det[Hess(F) X, X, R, nu] with R the radial
// field (x, y, u, v). Stored symmetrized; evaluate as V^T Omega V.
struct OmegaForm {
  Mat4 m;
  Vec4 basepoint;

  double operator()(const Vec4& a, const Vec4& b) const {
    return a.dot(m * b);
  }
};

// Assembled from the field Hessian/gradient at x (any p, q).
OmegaForm omega_at(const LinkSurface& s, const Vec4& x);

// Closed-form entries for the (p, q) = (2, 3) surface; independent of r.
// Used as an exactness oracle for omega_at.
Mat4 omega_closed_form_23(const Vec4& x);

// Omega restricted to a tangent frame (V1, V2):
//   q(l1, l2) = c20 l1^2 + c11 l1 l2 + c02 l2^2
struct FrameQuadratic {
  double c20 = 0, c11 = 0, c02 = 0;

  double eval(double l1, double l2) const {
    return c20 * l1 * l1 + c11 * l1 * l2 + c02 * l2 * l2;
  }
  double discriminant() const { return c11 * c11 - 4 * c20 * c02; }
  double scale() const;
};

FrameQuadratic omega_in_frame(const OmegaForm& om, const Vec4& v1, const Vec4& v2);

// Real null directions of the quadratic, as frame coordinates (l1, l2).
// Returns 0 when the form vanishes identically (umbilic), otherwise 2
// (coincident for a double root). Throws degenerate_frame if the
// discriminant is negative beyond tolerance (cannot happen for a frame
// quadratic of this foliation; guards data corruption).
int quadratic_null_directions(const FrameQuadratic& q, std::array<Vec2, 2>& out,
                              double tol = 1e-12);

// Principal curvatures/directions via the shape operator of nu/|nu| in the
// orthonormal tangent basis of sp: S_ij = -t_i^T Hess(F) t_j / |nu|.
struct PrincipalCurvatures {
  double kappa_min = 0, kappa_max = 0;
  Vec4 dir_min, dir_max;  // unit tangent vectors in R^4
  Mat2 shape;             // in the (t1, t2) basis
  bool umbilic = false;
};

PrincipalCurvatures principal_curvatures(const LinkSurface& s,
                                         const SurfacePoint& sp,
                                         double eps_umbilic = 1e-8);

// Finite-difference shape operator: steps h along t1/t2, re-projects, and
// differences the unit normal. Returned raw (not symmetrized) so tests can
// measure the asymmetry residual.
Mat2 shape_operator_fd(const LinkSurface& s, const SurfacePoint& sp, double h);

// |dir| scaled gap kappa_max - kappa_min, the umbilic detector.
double curvature_gap(const LinkSurface& s, const SurfacePoint& sp);

}  // namespace curvatura
