#include "curvatura/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

namespace curvatura {

namespace {

int hess_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // row-major packed upper triangle of a 4x4 symmetric matrix
  static constexpr int row_start[4] = {0, 4, 7, 9};
  return row_start[i] + (j - i);
}

}  // namespace

ScalarField4::ScalarField4(Poly4 f) : f_(std::move(f)) {
  for (int i = 0; i < 4; ++i) grad_[i] = f_.diff(i);
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) hess_[hess_index(i, j)] = grad_[i].diff(j);
}

double ScalarField4::value(const Vec4& x) const {
  return f_.eval(std::array<double, 4>{x[0], x[1], x[2], x[3]});
}

Vec4 ScalarField4::gradient(const Vec4& x) const {
  const std::array<double, 4> p{x[0], x[1], x[2], x[3]};
  Vec4 g;
  for (int i = 0; i < 4; ++i) g[i] = grad_[i].eval(p);
  return g;
}

Mat4 ScalarField4::hessian(const Vec4& x) const {
  const std::array<double, 4> p{x[0], x[1], x[2], x[3]};
  Mat4 h;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) h(i, j) = h(j, i) = hess_[hess_index(i, j)].eval(p);
  return h;
}

Poly4 real_power_poly(int var_re, int var_im, int n) {
  // Re((a + i b)^n) = sum_{j even} (-1)^{j/2} C(n, j) a^{n-j} b^j
  Poly4 acc;
  double binom = 1;  // C(n, 0)
  for (int j = 0; j <= n; ++j) {
    if (j % 2 == 0) {
      const double sign = (j / 2) % 2 == 0 ? 1.0 : -1.0;
      acc = acc + Poly4::var(var_re, n - j) * Poly4::var(var_im, j) * (sign * binom);
    }
    binom = binom * (n - j) / (j + 1);
  }
  return acc;
}

double LinkSurface::eps_surface() const {
  return 1e-12 * std::max(1.0, radius * radius);
}

LinkSurface make_double_torus(int p, int q, double r) {
  if (p < 2 || q < 2)
    throw unsupported_exponents("exponents must satisfy p, q >= 2; got p=" +
                                std::to_string(p) + " q=" + std::to_string(q));
  if (!(r > 0) || !std::isfinite(r))
    throw invalid_parameter("radius must be positive and finite");
  LinkSurface s;
  s.p = p;
  s.q = q;
  s.radius = r;
  s.F = ScalarField4(real_power_poly(0, 1, p) + real_power_poly(2, 3, q));
  Poly4 g;
  for (int i = 0; i < 4; ++i) g = g + Poly4::var(i) * Poly4::var(i);
  s.G = ScalarField4(g + Poly4::constant(-r * r));
  return s;
}

namespace {

// Orthonormal tangent frame completing (nu, mu); positively oriented.
void attach_frame(SurfacePoint& sp, double eps_gram) {
  const double nn = sp.nu.norm();
  const double mn = sp.mu.norm();
  if (nn < 1e-300 || mn < 1e-300)
    throw degenerate_frame("vanishing normal field at surface point");
  const Vec4 n1 = sp.nu / nn;
  const double c = n1.dot(sp.mu / mn);
  if (1.0 - c * c < eps_gram)
    throw degenerate_frame("normal pair nearly parallel (gram defect " +
                           std::to_string(1.0 - c * c) + ")");
  Vec4 n2 = sp.mu - sp.mu.dot(n1) * n1;
  n2.normalize();

  // pick the two coordinate axes least aligned with span(n1, n2)
  std::array<int, 4> order{0, 1, 2, 3};
  std::array<double, 4> score;
  for (int i = 0; i < 4; ++i) score[i] = n1[i] * n1[i] + n2[i] * n2[i];
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return score[a] < score[b]; });

  Vec4 t1 = Vec4::Zero(), t2 = Vec4::Zero();
  int found = 0;
  for (int idx : order) {
    Vec4 t = Vec4::Unit(idx);
    t -= t.dot(n1) * n1;
    t -= t.dot(n2) * n2;
    if (found == 1) t -= t.dot(t1) * t1;
    const double len = t.norm();
    if (len < 1e-6) continue;
    t /= len;
    (found == 0 ? t1 : t2) = t;
    if (++found == 2) break;
  }
  if (found != 2) throw degenerate_frame("failed to complete tangent frame");

  Mat4 b;
  b.col(0) = n1;
  b.col(1) = n2;
  b.col(2) = t1;
  b.col(3) = t2;
  if (b.determinant() < 0) t2 = -t2;
  sp.t1 = t1;
  sp.t2 = t2;
}

}  // namespace

SurfacePoint project_to_surface(const LinkSurface& s, const Vec4& x0,
                                const ProjectOptions& opts) {
  const double eps = s.eps_surface();
  Vec4 x = x0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const double fv = s.F.value(x);
    const double gv = s.G.value(x);
    if (std::max(std::abs(fv), std::abs(gv)) <= eps) {
      SurfacePoint sp;
      sp.position = x;
      sp.nu = s.F.gradient(x);
      sp.mu = s.G.gradient(x);
      attach_frame(sp, opts.eps_gram);
      return sp;
    }
    Eigen::Matrix<double, 2, 4> J;
    J.row(0) = s.F.gradient(x).transpose();
    J.row(1) = s.G.gradient(x).transpose();
    const Mat2 JJt = J * J.transpose();
    const double det = JJt.determinant();
    if (!(std::abs(det) > 1e-300))
      throw degenerate_frame("dependent gradients during projection");
    const Vec2 rv(fv, gv);
    x -= J.transpose() * JJt.inverse() * rv;
    if (!x.allFinite()) throw no_convergence("projection diverged");
  }
  throw no_convergence("projection did not reach the residual threshold");
}

SurfacePoint surface_frame_at(const LinkSurface& s, const Vec4& x,
                              const ProjectOptions& opts) {
  return project_to_surface(s, x, opts);
}

double chart_rad1(double r, double u, double v) {
  return r * r - u * u - v * v - (u * u * u - 3 * u * v * v);
}

double chart_rad2(double r, double u, double v) {
  return r * r - u * u - v * v + (u * u * u - 3 * u * v * v);
}

Vec4 chart_phi(double r, int sx, int sy, double u, double v) {
  if (std::abs(sx) != 1 || std::abs(sy) != 1)
    throw invalid_parameter("chart signs must be +1 or -1");
  const double r1 = chart_rad1(r, u, v);
  const double r2 = chart_rad2(r, u, v);
  const double tol = -1e-12 * r * r;
  if (r1 < tol || r2 < tol)
    throw out_of_chart("(u, v) outside the chart hexagon");
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return Vec4(sx * std::sqrt(std::max(r1, 0.0)) * inv_sqrt2,
              sy * std::sqrt(std::max(r2, 0.0)) * inv_sqrt2, u, v);
}

std::array<Vec4, 2> chart_jacobian(double r, int sx, int sy, double u, double v) {
  const double r1 = chart_rad1(r, u, v);
  const double r2 = chart_rad2(r, u, v);
  if (r1 <= 0 || r2 <= 0)
    throw out_of_chart("chart jacobian requires an interior point");
  // d(rad)/du, d(rad)/dv
  const double r1u = -2 * u - 3 * u * u + 3 * v * v, r1v = -2 * v + 6 * u * v;
  const double r2u = -2 * u + 3 * u * u - 3 * v * v, r2v = -2 * v - 6 * u * v;
  // d/du [s sqrt(rad)/sqrt2] = s rad_u / (2 sqrt2 sqrt(rad))
  const double cx = sx / (2 * std::sqrt(2.0) * std::sqrt(r1));
  const double cy = sy / (2 * std::sqrt(2.0) * std::sqrt(r2));
  return {Vec4(cx * r1u, cy * r2u, 1, 0), Vec4(cx * r1v, cy * r2v, 0, 1)};
}

HexClass hexagon_classify(double r, double u, double v, double tol) {
  const double r1 = chart_rad1(r, u, v);
  const double r2 = chart_rad2(r, u, v);
  const double scale = std::max(1.0, r * r);
  const double t = tol * scale;
  if (r1 < -t || r2 < -t) return {HexClass::Outside, std::nullopt};
  if (r1 > t && r2 > t) return {HexClass::Inside, std::nullopt};
  // on the boundary: X arcs where rad1 = 0, Y arcs where rad2 = 0;
  // corners (both vanish) are assigned to the X arc they bound.
  HexArc arc;
  if (r1 <= t) {
    if (u >= 0)
      arc = HexArc::X1;
    else
      arc = v >= 0 ? HexArc::X2 : HexArc::X3;
  } else {
    if (u >= 0)
      arc = v >= 0 ? HexArc::Y1 : HexArc::Y3;
    else
      arc = HexArc::Y2;
  }
  return {HexClass::Boundary, arc};
}

bool hexagon_contains(double r, double u, double v, double tol) {
  return hexagon_classify(r, u, v, tol).kind != HexClass::Outside;
}

double hexagon_boundary_radius(double r, double theta) {
  // smaller radicand vanishes first: r^2 - rho^2 - rho^3 |cos 3 theta| = 0
  const double c = std::abs(std::cos(3 * theta));
  if (c < 1e-300) return r;
  // monotone decreasing in rho on [0, r]; bisection then Newton polish
  double lo = 0, hi = r;
  auto f = [&](double rho) { return r * r - rho * rho - c * rho * rho * rho; };
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  double rho = 0.5 * (lo + hi);
  for (int i = 0; i < 3; ++i) {
    const double d = -2 * rho - 3 * c * rho * rho;
    rho -= f(rho) / d;
  }
  return rho;
}

int effective_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int n = requested > 0 ? std::min(requested, hw) : hw;
  if (const char* env = std::getenv("CURVATURA_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(1, n);
}

}  // namespace curvatura
