#pragma once

#include <array>
#include <optional>

#include "curvatura/poly.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

// Polynomial scalar field on R^4 with cached gradient/Hessian polynomials.
class ScalarField4 {
 public:
  ScalarField4() = default;
  explicit ScalarField4(Poly4 f);

  double value(const Vec4& x) const;
  Vec4 gradient(const Vec4& x) const;
  Mat4 hessian(const Vec4& x) const;
  const Poly4& poly() const { return f_; }

 private:
  Poly4 f_;
  std::array<Poly4, 4> grad_;
  std::array<Poly4, 10> hess_;  // packed upper triangle, row-major
};

// The transversal pair F = Re((x+iy)^p + (u+iv)^q), G = |X|^2 - r^2.
// Their common zero set is the algebraic link of the singularity z1^p + z2^q
// cut on the sphere of radius r; for (p, q) = (2, 3) it is a genus-2 surface.
struct LinkSurface {
  int p = 2;
  int q = 3;
  double radius = 0;
  ScalarField4 F;  // nu = grad F is the distinguished normal field
  ScalarField4 G;  // mu = grad G is radial (twice the position)

  double eps_surface() const;  // residual threshold 1e-12 * max(1, r^2)
};

LinkSurface make_double_torus(int p, int q, double r);

// Re((a+ib)^n) as a polynomial in the two chosen variables.
Poly4 real_power_poly(int var_re, int var_im, int n);

// A point of the surface together with the normal pair and an orthonormal
// tangent basis. Construct via project_to_surface (Gauss-Newton projection)
// or surface_frame_at (for points already on the surface).
struct SurfacePoint {
  Vec4 position;
  Vec4 nu;  // grad F, unnormalized
  Vec4 mu;  // grad G, unnormalized
  Vec4 t1, t2;

  Vec4 unit_nu() const { return nu.normalized(); }
};

struct ProjectOptions {
  int max_iter = 50;
  double eps_gram = 1e-10;  // on unit normals; below this the frame degenerates
};

SurfacePoint project_to_surface(const LinkSurface& s, const Vec4& x0,
                                const ProjectOptions& opts = {});
SurfacePoint surface_frame_at(const LinkSurface& s, const Vec4& x,
                              const ProjectOptions& opts = {});

// --- double-torus charts over the curved hexagon H_uv ------------------
//
// rad1 = r^2 - u^2 - v^2 - (u^3 - 3 u v^2)   (square of sqrt(2) x)
// rad2 = r^2 - u^2 - v^2 + (u^3 - 3 u v^2)   (square of sqrt(2) y)
// chart(sx, sy): (sx sqrt(rad1)/sqrt2, sy sqrt(rad2)/sqrt2, u, v)

double chart_rad1(double r, double u, double v);
double chart_rad2(double r, double u, double v);
Vec4 chart_phi(double r, int sx, int sy, double u, double v);
// partial derivatives d(phi)/du, d(phi)/dv; requires interior point
std::array<Vec4, 2> chart_jacobian(double r, int sx, int sy, double u, double v);

// Hexagon boundary arcs, labeled by which radicand vanishes and the sign
// conditions on (u, v). X arcs carry x = 0 lifts, Y arcs carry y = 0 lifts.
enum class HexArc { X1, Y1, X2, Y2, X3, Y3 };

struct HexClass {
  enum Kind { Inside, Boundary, Outside } kind;
  std::optional<HexArc> arc;  // set when kind == Boundary
};

HexClass hexagon_classify(double r, double u, double v, double tol = 1e-12);
bool hexagon_contains(double r, double u, double v, double tol = 1e-12);

// radial extent of H_uv in direction theta (boundary is star-shaped)
double hexagon_boundary_radius(double r, double theta);

// Worker count: min(requested or hardware, CURVATURA_THREADS when set).
int effective_threads(int requested = 0);

}  // namespace curvatura
