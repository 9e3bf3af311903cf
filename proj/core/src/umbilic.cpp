#include "curvatura/umbilic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace curvatura {

namespace {

using P5 = RPoly5;
enum { VX = 0, VY = 1, VU = 2, VV = 3, VS = 4 };

P5 v5(int i, int p = 1, Rat c = Rat(1)) { return P5::var(i, p, c); }

using PVec = std::array<P5, 4>;

// det of the 4x4 polynomial matrix with columns c0..c3
P5 det4(const PVec& c0, const PVec& c1, const PVec& c2, const PVec& c3) {
  const std::array<const PVec*, 4> col{&c0, &c1, &c2, &c3};
  auto at = [&](int c, int r) -> const P5& { return (*col[c])[r]; };
  auto det3 = [&](int skip) {
    int rows[3], k = 0;
    for (int r = 0; r < 4; ++r)
      if (r != skip) rows[k++] = r;
    return at(1, rows[0]) * (at(2, rows[1]) * at(3, rows[2]) -
                             at(2, rows[2]) * at(3, rows[1])) -
           at(1, rows[1]) * (at(2, rows[0]) * at(3, rows[2]) -
                             at(2, rows[2]) * at(3, rows[0])) +
           at(1, rows[2]) * (at(2, rows[0]) * at(3, rows[1]) -
                             at(2, rows[1]) * at(3, rows[0]));
  };
  P5 acc;
  for (int i = 0; i < 4; ++i) {
    const P5 term = at(0, i) * det3(i);
    acc = (i % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

struct Pipeline {
  P5 F;
  PVec nu;
  std::array<PVec, 4> H;  // H[i][j] = d2F/dxi dxj
  PVec radial;
  PVec W1, W2;  // 2xy V1, 4xy V2

  Pipeline() {
    F = v5(VX, 2) - v5(VY, 2) + v5(VU, 3) + v5(VU) * v5(VV, 2) * Rat(-3);
    for (int i = 0; i < 4; ++i) nu[i] = F.diff(i);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) H[i][j] = nu[i].diff(j);
    radial = {v5(VX), v5(VY), v5(VU), v5(VV)};
    W1 = {v5(VY) * v5(VV) * Rat(-1) + v5(VY) * v5(VU) * v5(VV) * Rat(3),
          v5(VX) * v5(VV) * Rat(-1) + v5(VX) * v5(VU) * v5(VV) * Rat(-3),
          P5(), v5(VX) * v5(VY) * Rat(2)};
    W2 = {v5(VY) * (v5(VU, 1, Rat(-2)) + v5(VU, 2, Rat(-3)) + v5(VV, 2, Rat(3))),
          v5(VX) * (v5(VU, 1, Rat(-2)) + v5(VU, 2, Rat(3)) + v5(VV, 2, Rat(-3))),
          v5(VX) * v5(VY) * Rat(4), P5()};
  }

  PVec matvec(const PVec& w) const {
    PVec out;
    for (int i = 0; i < 4; ++i) {
      P5 acc;
      for (int j = 0; j < 4; ++j) acc = acc + H[i][j] * w[j];
      out[i] = acc;
    }
    return out;
  }

  P5 frame_coeff(const PVec& wa, const PVec& wb) const {
    return det4(matvec(wa), wb, radial, nu);
  }
};

P5 restrict_to_surface(const P5& p) {
  // x^2 -> (s - u^2 - v^2 - (u^3 - 3 u v^2))/2, y^2 -> (... + ...)/2
  const P5 cubic = v5(VU, 3) + v5(VU) * v5(VV, 2) * Rat(-3);
  const P5 base = v5(VS) - v5(VU, 2) - v5(VV, 2);
  const P5 ex = (base - cubic) * Rat(1, 2);
  const P5 ey = (base + cubic) * Rat(1, 2);
  return p.subst_square(VX, ex).subst_square(VY, ey);
}

}  // namespace

ScaledFrameCoefficients derive_scaled_frame_coefficients() {
  const Pipeline pl;
  ScaledFrameCoefficients sc;
  sc.c11 = pl.frame_coeff(pl.W1, pl.W1).div_exact_monomial({1, 1, 0, 0, 0}, Rat(4));
  sc.c12 = pl.frame_coeff(pl.W1, pl.W2).div_exact_monomial({1, 1, 0, 0, 0}, Rat(8));
  sc.c21 = pl.frame_coeff(pl.W2, pl.W1).div_exact_monomial({1, 1, 0, 0, 0}, Rat(8));
  sc.c22 = pl.frame_coeff(pl.W2, pl.W2).div_exact_monomial({1, 1, 0, 0, 0}, Rat(16));
  return sc;
}

RestrictedOmegas derive_restricted_omegas() {
  const ScaledFrameCoefficients sc = derive_scaled_frame_coefficients();
  RestrictedOmegas ro;
  ro.scaled11 = restrict_to_surface(sc.c11);
  ro.scaled1221 = restrict_to_surface(sc.c12 + sc.c21);
  ro.scaled22 = restrict_to_surface(sc.c22);
  ro.omega1 = ro.scaled11.div_exact_monomial({0, 0, 0, 1, 0}, Rat(1));
  ro.omega2 = ro.scaled1221.div_exact_monomial({0, 0, 1, 0, 0}, Rat(1));
  ro.omega3 = ro.scaled22.div_exact_monomial({0, 0, 0, 1, 0}, Rat(1));
  return ro;
}

double RestrictedOmegas::eval(int i, double u, double v, double r2) const {
  const P5* p = i == 1 ? &omega1 : i == 2 ? &omega2 : i == 3 ? &omega3 : nullptr;
  if (!p) throw invalid_parameter("omega index must be 1, 2 or 3");
  return p->eval(std::array<double, 5>{0, 0, u, v, r2});
}

RPoly2 reduce_to_wz(const RPoly5& p) {
  const P5 q = p.subst_const(VS, Rat(1, 10));
  RPoly2 out;
  for (const auto& t : q.terms()) {
    if (t.e[VX] != 0 || t.e[VY] != 0 || t.e[VS] != 0)
      throw invalid_parameter("reduce_to_wz: unexpected x/y/s exponent");
    if (t.e[VU] % 2 != 0 || t.e[VV] % 2 != 0)
      throw invalid_parameter("reduce_to_wz: odd u/v exponent");
    out = out + RPoly2::var(0, t.e[VU] / 2, t.c) * RPoly2::var(1, t.e[VV] / 2);
  }
  return out;
}

ThetaSystem make_theta_system(Rat perturb) {
  auto wz = [](int a, int b, Rat c) {
    return RPoly2::var(0, a, c) * RPoly2::var(1, b);
  };
  ThetaSystem ts;
  ts.r2 = Rat(1, 10);
  ts.theta[0] = wz(0, 0, Rat(3, 50)) + wz(1, 0, Rat(-3, 2)) + wz(2, 0, Rat(97, 10)) +
                wz(3, 0, Rat(-15)) + wz(0, 1, Rat(-3, 10)) + wz(1, 1, Rat(57, 10)) +
                wz(2, 1, Rat(-27));
  ts.theta[1] = wz(0, 0, Rat(-6, 25)) + wz(1, 0, Rat(-6, 5)) + wz(2, 0, Rat(67, 5)) +
                wz(3, 0, Rat(-21)) + wz(0, 1, Rat(18, 5)) + wz(1, 1, Rat(12)) +
                wz(2, 1, Rat(-27)) + wz(0, 2, Rat(-87, 5)) + wz(1, 2, Rat(-27)) +
                wz(0, 3, Rat(27));
  ts.theta[2] = wz(0, 0, Rat(-6, 25)) + wz(1, 0, Rat(12, 5)) + wz(2, 0, Rat(-67, 10)) +
                wz(3, 0, Rat(6)) + wz(0, 1, Rat(12, 5)) + wz(1, 1, Rat(-127, 5)) +
                wz(2, 1, Rat(72)) + wz(0, 2, Rat(-27, 10)) + wz(1, 2, Rat(18));
  if (!perturb.is_zero()) ts.theta[0] = ts.theta[0] + RPoly2::constant(perturb);
  return ts;
}

bool check_theta_reduction(const RestrictedOmegas& ro, const ThetaSystem& ts,
                           std::string* msg) {
  const RPoly2 red1 = reduce_to_wz(ro.omega1);
  const RPoly2 red2 = reduce_to_wz(ro.omega2);
  const RPoly2 red3 = reduce_to_wz(ro.omega3);
  // the reduced system generates the same equations up to constant factors:
  // theta1 = red1, theta2 = 4 red3, theta3 = 2 red2
  const bool ok1 = ts.theta[0] == red1;
  const bool ok2 = ts.theta[1] == red3 * Rat(4);
  const bool ok3 = ts.theta[2] == red2 * Rat(2);
  if (ok1 && ok2 && ok3) return true;
  if (msg) {
    std::ostringstream os;
    os << "theta-reduction mismatch:";
    if (!ok1) os << " theta1 != reduction of omega1";
    if (!ok2) os << " theta2 != 4 x reduction of omega3";
    if (!ok3) os << " theta3 != 2 x reduction of omega2";
    *msg += os.str();
  }
  return false;
}

// ---------------------------------------------------------------------
// Root certificate
// ---------------------------------------------------------------------

const std::array<long long, 8>& g1_coefficients() {
  // ascending powers z^0 .. z^7
  static const std::array<long long, 8> c{
      2457LL,           355500LL,        -16427260LL,    227180200LL,
      -1418476000LL,    4524012000LL,    -7251120000LL,  4665600000LL};
  return c;
}

const std::array<long long, 8>& g2_coefficients() {
  // [w coefficient, then z^0 .. z^6]
  static const std::array<long long, 8> c{
      651925265295213LL,      -272440432411875LL,    3881340837877779LL,
      6558340381939640LL,     -389422787482597000LL, 2318821632923662800LL,
      -5434755866556408000LL, 4628749229159040000LL};
  return c;
}

long double eval_g1(long double z) {
  const auto& c = g1_coefficients();
  long double acc = 0;
  for (int k = 7; k >= 0; --k) acc = acc * z + static_cast<long double>(c[k]);
  return acc;
}

long double eval_g2(long double w, long double z) {
  const auto& c = g2_coefficients();
  long double acc = 0;
  for (int k = 7; k >= 1; --k) acc = acc * z + static_cast<long double>(c[k]);
  return acc + static_cast<long double>(c[0]) * w;
}

namespace {

long double eval_theta_ld(const RPoly2& t, long double w, long double z) {
  return t.eval(std::array<long double, 2>{w, z});
}

}  // namespace

RootCertificate certify_no_interior_umbilics() {
  const auto& c1 = g1_coefficients();
  // Cauchy bound: 1 + max |c_k| / |c_7|
  long double maxc = 0;
  for (int k = 0; k < 7; ++k)
    maxc = std::max(maxc, std::abs(static_cast<long double>(c1[k])));
  const long double bound = 1 + maxc / std::abs(static_cast<long double>(c1[7]));

  const int kScan = 200000;
  std::vector<std::pair<long double, long double>> brackets;
  long double zprev = -bound, fprev = eval_g1(zprev);
  for (int i = 1; i <= kScan; ++i) {
    const long double zi = -bound + 2 * bound * i / kScan;
    const long double fi = eval_g1(zi);
    if (fprev == 0) brackets.emplace_back(zprev, zprev);
    else if (fprev * fi < 0) brackets.emplace_back(zprev, zi);
    zprev = zi;
    fprev = fi;
  }
  if (fprev == 0) brackets.emplace_back(zprev, zprev);

  const ThetaSystem ts = make_theta_system();
  const long double r2 = 0.1L;

  RootCertificate cert;
  for (auto [lo, hi] : brackets) {
    long double flo = eval_g1(lo);
    for (int it = 0; it < 200 && hi > lo; ++it) {
      const long double mid = 0.5L * (lo + hi);
      const long double fm = eval_g1(mid);
      if (fm == 0) { lo = hi = mid; break; }
      if (flo * fm < 0) hi = mid;
      else { lo = mid; flo = fm; }
    }
    const long double z = 0.5L * (lo + hi);
    // w from the generator linear in w
    const auto& c2 = g2_coefficients();
    long double pz = 0;
    for (int k = 7; k >= 1; --k) pz = pz * z + static_cast<long double>(c2[k]);
    const long double w = -pz / static_cast<long double>(c2[0]);

    CertifiedRoot root;
    root.z = static_cast<double>(z);
    root.w = static_cast<double>(w);
    root.g1_residual = static_cast<double>(std::abs(eval_g1(z)));
    for (int i = 0; i < 3; ++i)
      root.theta_residual[i] =
          static_cast<double>(std::abs(eval_theta_ld(ts.theta[i], w, z)));

    const long double eps = 1e-12L;
    if (z <= eps)
      root.exclusion = "z <= 0: v^2 must be positive off the symmetry set";
    else if (w <= eps)
      root.exclusion = "w <= 0: u^2 must be positive off the symmetry set";
    else if (w + z > r2 * (1 + 1e-9L))
      root.exclusion = "w + z > r^2: outside the chart hexagon";
    else
      root.admissible = true;
    cert.roots.push_back(root);
  }
  cert.interior_excluded =
      std::none_of(cert.roots.begin(), cert.roots.end(),
                   [](const CertifiedRoot& r) { return r.admissible; });
  return cert;
}

// ---------------------------------------------------------------------
// Monge jets, slopes, index
// ---------------------------------------------------------------------

MongeJet monge_jet_at_umbilic(const LinkSurface& s, int sx, int sy) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("umbilic jets are implemented for (p, q) = (2, 3)");
  if (std::abs(sx) != 1 || std::abs(sy) != 1)
    throw invalid_parameter("umbilic signs must be +1 or -1");
  // Heights of the chart graph over the (u, v) tangent plane at
  // (sx r/sqrt2, sy r/sqrt2, 0, 0), measured toward the surface:
  //   f = sx (r - sqrt(rad1)) / sqrt2 = sx (u^2 + v^2 + u^3 - 3 u v^2) / (2 sqrt2 r) + O(4)
  //   g = sy (r - sqrt(rad2)) / sqrt2 = sy (u^2 + v^2 - u^3 + 3 u v^2) / (2 sqrt2 r) + O(4)
  // The normal plane does not rotate at cubic order along the tangent
  // directions (the turning of nu against mu starts at order 3), so the
  // rotation rates m, n vanish.
  const double c2 = 1.0 / (2.0 * std::sqrt(2.0) * s.radius);
  MongeJet j;
  j.sx = sx;
  j.sy = sy;
  j.k = 2 * c2 * sx;
  j.a = 6 * c2 * sx;
  j.b = -6 * c2 * sx;
  j.c = 0;
  j.alpha = 2 * c2 * sy;
  j.beta = 0;
  j.gamma = 2 * c2 * sy;
  j.delta = -6 * c2 * sy;
  j.eps = 0;
  j.zeta = 6 * c2 * sy;
  j.eta = 0;
  j.m = 0;
  j.n = 0;
  return j;
}

double MongeJet::height1(double u, double v) const {
  return k / 2 * (u * u + v * v) + a / 6 * u * u * u + b / 2 * u * v * v +
         c / 6 * v * v * v;
}

double MongeJet::height2(double u, double v) const {
  return alpha / 2 * u * u + beta * u * v + gamma / 2 * v * v +
         delta / 6 * u * u * u + eps / 2 * u * u * v + zeta / 2 * u * v * v +
         eta / 6 * v * v * v;
}

namespace {

// real roots of c3 p^3 + c2 p^2 + c1 p + c0, ascending
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0) {
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale == 0) throw degenerate_cubic("slope cubic vanishes identically");
  const double tiny = 1e-14 * scale;
  std::vector<double> roots;
  if (std::abs(c3) <= tiny) {
    if (std::abs(c2) <= tiny) {
      if (std::abs(c1) <= tiny) throw degenerate_cubic("slope equation has no direction content");
      roots = {-c0 / c1};
    } else {
      const double disc = c1 * c1 - 4 * c2 * c0;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        roots = {(-c1 + sq) / (2 * c2), (-c1 - sq) / (2 * c2)};
      }
    }
  } else {
    // depressed cubic t^3 + pt + q with p = c2/c3 shift
    const double A = c2 / c3, B = c1 / c3, C = c0 / c3;
    const double p = B - A * A / 3;
    const double q = 2 * A * A * A / 27 - A * B / 3 + C;
    const double discr = -4 * p * p * p - 27 * q * q;
    const double shift = -A / 3;
    if (discr >= 0) {
      // three real roots (possibly repeated): trigonometric form
      if (std::abs(p) < 1e-300) {
        roots = {shift + std::cbrt(-q), shift + std::cbrt(-q), shift + std::cbrt(-q)};
        roots.resize(1);
      } else {
        const double m = 2 * std::sqrt(-p / 3);
        double arg = 3 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3;
        for (int k = 0; k < 3; ++k)
          roots.push_back(shift + m * std::cos(phi - 2 * M_PI * k / 3));
      }
    } else {
      // one real root: Cardano
      const double sq = std::sqrt(q * q / 4 + p * p * p / 27);
      roots = {shift + std::cbrt(-q / 2 + sq) + std::cbrt(-q / 2 - sq)};
    }
  }
  // Newton polish on the original cubic
  for (double& r : roots) {
    for (int it = 0; it < 3; ++it) {
      const double f = ((c3 * r + c2) * r + c1) * r + c0;
      const double d = (3 * c3 * r + 2 * c2) * r + c1;
      if (std::abs(d) < 1e-300) break;
      r -= f / d;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

std::vector<double> separatrix_slopes(const MongeJet& j) {
  const double c3 = j.b + j.beta * j.n;
  const double c2 = j.beta * j.m - j.c - (j.gamma - j.alpha) * j.n;
  const double c1 = -(2 * j.b - j.a + (j.gamma - j.alpha) * j.m + j.beta * j.n);
  const double c0 = -j.beta * j.m;
  return real_cubic_roots(c3, c2, c1, c0);
}

double umbilic_index(const LinkSurface& s, int sx, int sy, double loop_frac,
                     int samples) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("umbilic index loop assumes the (2, 3) charts");
  if (samples < 16) throw invalid_parameter("too few winding samples");
  const double r = s.radius;
  const double rho = loop_frac * r;
  double total = 0;
  double prev = 0;
  double first = 0;
  for (int i = 0; i <= samples; ++i) {
    const double th = 2 * M_PI * i / samples;
    const double u = rho * std::cos(th), v = rho * std::sin(th);
    const Vec4 pos = chart_phi(r, sx, sy, u, v);
    const SurfacePoint sp = project_to_surface(s, pos);
    const PrincipalCurvatures pc = principal_curvatures(s, sp);
    if (pc.umbilic)
      throw winding_ambiguous("principal direction undefined on the winding loop");
    const auto jac = chart_jacobian(r, sx, sy, u, v);
    // coordinates of dir_max in the chart frame (Gram solve)
    Mat2 G;
    G << jac[0].dot(jac[0]), jac[0].dot(jac[1]), jac[1].dot(jac[0]),
        jac[1].dot(jac[1]);
    const Vec2 rhs(pc.dir_max.dot(jac[0]), pc.dir_max.dot(jac[1]));
    const Vec2 cc = G.inverse() * rhs;
    const double ang = std::atan2(cc[1], cc[0]);
    if (i == 0) {
      first = prev = ang;
      continue;
    }
    double d = ang - prev;
    d -= M_PI * std::round(d / M_PI);  // line field: defined mod pi
    if (std::abs(d) > M_PI / 2 * 0.98)
      throw winding_ambiguous("direction turned by ~pi/2 in one winding step");
    total += d;
    prev = prev + d;
  }
  (void)first;
  const double index = total / (2 * M_PI);
  const double snapped = std::round(index * 2) / 2;
  if (std::abs(index - snapped) > 0.05)
    throw winding_ambiguous("winding total is not close to a half-integer");
  return snapped;
}

// ---------------------------------------------------------------------
// Census
// ---------------------------------------------------------------------

namespace {

struct SweepHit {
  double u = 0, v = 0, gap = 0;
};

// curvature gap on the (+,+) chart lift; +inf outside the hexagon
double gap_at(const LinkSurface& s, double u, double v) {
  const double r = s.radius;
  if (chart_rad1(r, u, v) < 0 || chart_rad2(r, u, v) < 0)
    return std::numeric_limits<double>::infinity();
  try {
    const SurfacePoint sp = project_to_surface(s, chart_phi(r, 1, 1, u, v));
    return curvature_gap(s, sp);
  } catch (const error&) {
    return std::numeric_limits<double>::infinity();
  }
}

// Gauss-Newton on the restricted system (omega1, omega2, omega3)(u, v) = 0
bool refine_umbilic(const RestrictedOmegas& ro, double r2, double& u, double& v) {
  const std::array<const P5*, 3> sys{&ro.omega1, &ro.omega2, &ro.omega3};
  std::array<P5, 3> du, dv;
  for (int i = 0; i < 3; ++i) {
    du[i] = sys[i]->diff(VU);
    dv[i] = sys[i]->diff(VV);
  }
  for (int it = 0; it < 60; ++it) {
    Eigen::Vector3d rv;
    Eigen::Matrix<double, 3, 2> J;
    const std::array<double, 5> at{0, 0, u, v, r2};
    for (int i = 0; i < 3; ++i) {
      rv[i] = sys[i]->eval(at);
      J(i, 0) = du[i].eval(at);
      J(i, 1) = dv[i].eval(at);
    }
    const Mat2 JtJ = J.transpose() * J;
    if (std::abs(JtJ.determinant()) < 1e-300) return false;
    const Vec2 step = JtJ.inverse() * (J.transpose() * rv);
    u -= step[0];
    v -= step[1];
    if (step.norm() < 1e-15) break;
    if (!std::isfinite(u) || !std::isfinite(v)) return false;
  }
  const std::array<double, 5> at{0, 0, u, v, r2};
  double resid = 0;
  for (int i = 0; i < 3; ++i) resid = std::max(resid, std::abs(sys[i]->eval(at)));
  return resid <= 1e-10 * std::max(1.0, r2 * r2 * r2);
}

}  // namespace

std::vector<UmbilicReport> find_umbilics(const LinkSurface& s,
                                         const UmbilicSearchOptions& opts) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("umbilic census is implemented for (p, q) = (2, 3)");
  const double r = s.radius;
  const double r2 = r * r;

  const RestrictedOmegas ro = derive_restricted_omegas();

  // (a) the chart origin annihilates all three restricted coefficients:
  // every term carries a positive power of u or v
  for (const P5* p : {&ro.scaled11, &ro.scaled1221, &ro.scaled22})
    for (const auto& t : p->terms())
      if (t.e[VU] == 0 && t.e[VV] == 0)
        throw degenerate_frame("restricted coefficient has a (u,v)-constant term");

  // (b) the eliminated system excludes umbilics off the symmetry set
  const ThetaSystem ts = make_theta_system();
  std::string msg;
  if (!check_theta_reduction(ro, ts, &msg)) throw invalid_parameter(msg);
  const RootCertificate cert = certify_no_interior_umbilics();
  if (!cert.interior_excluded)
    throw invalid_parameter("root certificate reports an admissible interior root");

  // (c) optional dense sweep for unexpected curvature-gap minima
  std::vector<UmbilicReport> extras;
  if (opts.run_sweep) {
    const double h = opts.sweep_step_frac * r;
    const int half = static_cast<int>(std::ceil(r / h)) + 1;
    const int n = 2 * half + 1;
    std::vector<float> gap(static_cast<size_t>(n) * n,
                           std::numeric_limits<float>::infinity());
    const int nthreads = effective_threads(opts.threads);
    std::atomic<int> next_row{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (int iu; (iu = next_row.fetch_add(1)) < n;) {
          const double u = (iu - half) * h;
          for (int iv = 0; iv < n; ++iv) {
            const double v = (iv - half) * h;
            gap[static_cast<size_t>(iu) * n + iv] =
                static_cast<float>(gap_at(s, u, v));
          }
        }
      });
    for (auto& th : pool) th.join();

    auto g = [&](int iu, int iv) -> float {
      return gap[static_cast<size_t>(iu) * n + iv];
    };
    std::vector<SweepHit> minima;
    for (int iu = 1; iu + 1 < n; ++iu)
      for (int iv = 1; iv + 1 < n; ++iv) {
        const float c = g(iu, iv);
        if (!std::isfinite(c)) continue;
        bool ismin = true;
        for (int a = -1; a <= 1 && ismin; ++a)
          for (int b = -1; b <= 1; ++b) {
            if (a == 0 && b == 0) continue;
            if (std::isfinite(g(iu + a, iv + b)) && g(iu + a, iv + b) < c) {
              ismin = false;
              break;
            }
          }
        if (ismin) minima.push_back({(iu - half) * h, (iv - half) * h, c});
      }
    for (const SweepHit& hit : minima) {
      double u = hit.u, v = hit.v;
      if (!refine_umbilic(ro, r2, u, v)) continue;
      if (std::hypot(u, v) <= 1e-6 * r) continue;  // the known chart origin
      if (!hexagon_contains(r, u, v)) continue;
      UmbilicReport rep;
      rep.position = chart_phi(r, 1, 1, u, v);
      rep.type = "interior";
      extras.push_back(rep);
    }
  }

  std::vector<UmbilicReport> out;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const int signs[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (const auto& sg : signs) {
    UmbilicReport rep;
    rep.sx = sg[0];
    rep.sy = sg[1];
    rep.position = Vec4(sg[0] * r * inv_sqrt2, sg[1] * r * inv_sqrt2, 0, 0);
    const MongeJet jet = monge_jet_at_umbilic(s, sg[0], sg[1]);
    rep.slopes = separatrix_slopes(jet);
    rep.index = umbilic_index(s, sg[0], sg[1], opts.index_loop_frac,
                              opts.index_samples);
    const bool d3 = rep.slopes.size() == 3 && std::abs(rep.index + 0.5) <= 0.05;
    rep.type = d3 ? "D3" : "irregular";
    out.push_back(rep);
  }
  out.insert(out.end(), extras.begin(), extras.end());
  return out;
}

}  // namespace curvatura
