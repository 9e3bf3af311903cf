#include "curvatura/tracer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace curvatura {

// ---------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------

AffineMap AffineMap::after(const AffineMap& first) const {
  AffineMap out;
  out.linear = linear * first.linear;
  out.offset = linear * first.offset + offset;
  return out;
}

AffineMap AffineMap::inverse() const {
  AffineMap out;
  out.linear = linear.inverse();
  out.offset = -(out.linear * offset);
  return out;
}

AffineMap gamma1() {
  AffineMap g;
  g.linear(1, 1) = -1;
  return g;
}

AffineMap gamma2() {
  AffineMap g;
  g.linear(0, 0) = -1;
  return g;
}

AffineMap gamma3(int k) {
  k = ((k % 3) + 3) % 3;
  AffineMap g;
  if (k == 0) return g;
  static const double s3 = std::sqrt(3.0) / 2;
  const double c = -0.5;
  const double s = k == 1 ? s3 : -s3;
  g.linear(2, 2) = c;
  g.linear(2, 3) = -s;
  g.linear(3, 2) = s;
  g.linear(3, 3) = c;
  return g;
}

std::vector<AffineMap> symmetry_group() {
  std::vector<AffineMap> out;
  out.reserve(12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 3; ++k) {
        AffineMap g = gamma3(k);
        if (j) g = gamma2().after(g);
        if (i) g = gamma1().after(g);
        out.push_back(g);
      }
  return out;
}

AffineMap rotation_about(const Vec4& c, int k) {
  const AffineMap rot = gamma3(k);
  AffineMap out;
  out.linear = rot.linear;
  out.offset = c - rot.linear * c;
  return out;
}

// ---------------------------------------------------------------------
// Separatrices
// ---------------------------------------------------------------------

double branch_parameter_bound(double r) {
  if (!(r > 0)) throw invalid_parameter("radius must be positive");
  // positive root of t^3 + t^2 = r^2 (monotone for t > 0)
  double lo = 0, hi = std::max(1.0, r);
  auto f = [&](double t) { return t * t * t + t * t - r * r; };
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 4; ++i) t -= f(t) / (3 * t * t + 2 * t);
  // land on the first floating value at or past the root so that the
  // radicands r^2 - t^2 -+ t^3 of the branch lifts clamp to exactly zero
  // at the parameter ends
  for (int i = 0; i < 64 && f(t) < 0; ++i)
    t = std::nextafter(t, std::numeric_limits<double>::infinity());
  return t;
}

Vec4 SeparatrixBranch::at(double t) const {
  const double r1 = std::max(chart_rad1(r, t, 0.0), 0.0);
  const double r2 = std::max(chart_rad2(r, t, 0.0), 0.0);
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Vec4 base(sx * std::sqrt(r1) * inv_sqrt2, sy * std::sqrt(r2) * inv_sqrt2, t, 0);
  return gamma3(family)(base);
}

Vec4 SeparatrixBranch::velocity(double t) const {
  const double r1 = chart_rad1(r, t, 0.0);
  const double r2 = chart_rad2(r, t, 0.0);
  const double eps = 1e-9 * r * r;
  if (r1 > eps && r2 > eps) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const double d1 = -2 * t - 3 * t * t;  // d(rad1)/dt at v = 0
    const double d2 = -2 * t + 3 * t * t;
    const Vec4 base(sx * d1 / (2 * std::sqrt(r1)) * inv_sqrt2,
                    sy * d2 / (2 * std::sqrt(r2)) * inv_sqrt2, 1, 0);
    return gamma3(family).linear * base;
  }
  // one-sided difference near the branch endpoints
  const double h = 1e-7 * std::max(t_max, 1e-12);
  const double dir = t > 0 ? -1.0 : 1.0;
  return (at(t + dir * h) - at(t)) / (dir * h);
}

SeparatrixSet separatrix_set(const LinkSurface& s) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("explicit separatrices exist for (p, q) = (2, 3)");
  SeparatrixSet set;
  set.t_max = branch_parameter_bound(s.radius);
  const int signs[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  for (int family = 0; family < 3; ++family)
    for (const auto& sg : signs) {
      SeparatrixBranch b;
      b.family = family;
      b.sx = sg[0];
      b.sy = sg[1];
      b.r = s.radius;
      b.t_max = set.t_max;
      set.branches.push_back(b);
    }
  const double c = s.radius / std::sqrt(2.0);
  set.umbilics = {Vec4(-c, -c, 0, 0), Vec4(c, -c, 0, 0), Vec4(c, c, 0, 0),
                  Vec4(-c, c, 0, 0)};
  return set;
}

// ---------------------------------------------------------------------
// Tracing
// ---------------------------------------------------------------------

namespace {

struct ResolvedTraceOptions {
  double h, eps_close, max_arc, guard, min_closure_arc, h_min;
  int max_steps;
};

ResolvedTraceOptions resolve(const TraceOptions& o, double r) {
  ResolvedTraceOptions t;
  t.h = o.step > 0 ? o.step : 1e-3 * r;
  t.eps_close = o.eps_close > 0 ? o.eps_close : 10 * t.h;
  t.max_arc = o.max_arc > 0 ? o.max_arc : 100 * r;
  t.guard = o.umbilic_guard > 0 ? o.umbilic_guard : std::max(3 * t.h, 1e-3 * r);
  t.min_closure_arc =
      o.min_closure_arc > 0 ? o.min_closure_arc : std::max(20 * t.h, 5 * t.eps_close);
  t.h_min = 1e-6 * r;
  t.max_steps = o.max_steps;
  return t;
}

// principal direction of the chosen foliation, oriented along ref
Vec4 oriented_direction(const LinkSurface& s, const SurfacePoint& sp, Foliation fol,
                        const Vec4& ref) {
  const PrincipalCurvatures pc = principal_curvatures(s, sp);
  if (pc.umbilic)
    throw degenerate_frame("principal direction undefined: umbilic encountered");
  Vec4 d = fol == Foliation::Max ? pc.dir_max : pc.dir_min;
  if (d.dot(ref) < 0) d = -d;
  return d;
}

std::array<std::int8_t, 2> tag_of(const Vec4& x) {
  auto sgn = [](double a) -> std::int8_t {
    if (std::abs(a) <= 1e-14) return 0;
    return a > 0 ? 1 : -1;
  };
  return {sgn(x[0]), sgn(x[1])};
}

}  // namespace

Trace trace_curvature_line(const LinkSurface& s, const SurfacePoint& seed,
                           Foliation fol, const TraceOptions& opts) {
  const ResolvedTraceOptions o = resolve(opts, s.radius);
  const double c = s.radius / std::sqrt(2.0);
  const std::array<Vec4, 4> umbilics{Vec4(-c, -c, 0, 0), Vec4(c, -c, 0, 0),
                                     Vec4(c, c, 0, 0), Vec4(-c, c, 0, 0)};
  auto near_umbilic = [&](const Vec4& x) {
    for (const Vec4& u : umbilics)
      if ((x - u).norm() < o.guard) return true;
    return false;
  };

  Trace tr;
  tr.foliation = fol;
  if (near_umbilic(seed.position))
    throw degenerate_frame("seed lies inside the umbilic guard disk");

  // deterministic initial orientation: largest-|component| positive
  Vec4 ref;
  {
    const PrincipalCurvatures pc = principal_curvatures(s, seed);
    if (pc.umbilic) throw degenerate_frame("seed is umbilic");
    ref = fol == Foliation::Max ? pc.dir_max : pc.dir_min;
  }
  const Vec4 d0 = oriented_direction(s, seed, fol, ref);
  tr.start_direction = d0;
  tr.vertices.push_back(seed.position);
  tr.chart_tags.push_back(tag_of(seed.position));

  Vec4 pos = seed.position;
  Vec4 dprev = d0;
  double h = o.h;
  const Vec4 start = seed.position;

  auto dir_at = [&](const Vec4& raw, const Vec4& orient) {
    const SurfacePoint sp = project_to_surface(s, raw);
    return oriented_direction(s, sp, fol, orient);
  };

  for (int step = 0; step < o.max_steps; ++step) {
    if (tr.arc_length > o.max_arc) break;

    // adaptive RK4 predictor + projection corrector
    Vec4 new_pos, dnew;
    while (true) {
      bool ok = true;
      try {
        const Vec4 k1 = dprev;
        const Vec4 k2 = dir_at(pos + 0.5 * h * k1, k1);
        const Vec4 k3 = dir_at(pos + 0.5 * h * k2, k2);
        const Vec4 k4 = dir_at(pos + h * k3, k3);
        const Vec4 raw = pos + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        ProjectOptions po;
        po.max_iter = 6;  // corrector needing more than ~5 iterations => halve
        const SurfacePoint spn = project_to_surface(s, raw, po);
        if ((spn.position - raw).norm() > 0.2 * h) ok = false;
        dnew = oriented_direction(s, spn, fol, dprev);
        if (dnew.dot(dprev) < std::cos(5.0 * M_PI / 180.0)) ok = false;
        new_pos = spn.position;
      } catch (const error&) {
        ok = false;
      }
      if (ok) break;
      h *= 0.5;
      if (h < o.h_min)
        throw no_convergence("step size underflow while tracing");
    }

    const double seg = (new_pos - pos).norm();

    // closure: crossing of the hyperplane through start normal to d0,
    // within the closeness ball, after a minimal arc
    if (tr.arc_length + seg >= o.min_closure_arc) {
      const double a = (pos - start).dot(d0);
      const double b = (new_pos - start).dot(d0);
      if (a < 0 && b >= 0 && (pos - start).norm() <= o.eps_close) {
        const double tau = a / (a - b);
        const Vec4 hit = pos + tau * (new_pos - pos);
        const SurfacePoint sph = project_to_surface(s, hit);
        const Vec4 dhit = oriented_direction(s, sph, fol, dprev);
        if ((sph.position - start).norm() <= o.eps_close &&
            dhit.dot(d0) > std::cos(1e-3)) {
          tr.arc_length += (sph.position - pos).norm();
          tr.vertices.push_back(sph.position);
          tr.chart_tags.push_back(tag_of(sph.position));
          tr.closed = true;
          return tr;
        }
      }
    }

    pos = new_pos;
    dprev = dnew;
    tr.arc_length += seg;
    tr.vertices.push_back(pos);
    tr.chart_tags.push_back(tag_of(pos));

    if (near_umbilic(pos)) {
      tr.hit_umbilic_guard = true;
      return tr;
    }
    if (h < o.h) h = std::min(o.h, h * 2);  // recover after halving
  }
  return tr;
}

int Trace::sign_changes(int coord) const {
  int changes = 0;
  std::int8_t prev = 0;
  for (size_t i = 1; i + 1 < chart_tags.size(); ++i) {  // interior vertices only
    const std::int8_t t = chart_tags[i][coord];
    if (t == 0) continue;
    if (prev != 0 && t != prev) ++changes;
    prev = t;
  }
  return changes;
}

std::vector<SurfacePoint> seeds_on_e2(const LinkSurface& s, int count) {
  if (count < 1) throw invalid_parameter("seed count must be >= 1");
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("e2 seeding assumes the (2, 3) charts");
  const double r = s.radius;
  std::vector<SurfacePoint> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double v = 0.5 * r * (k + 1) / (count + 1);
    // on e2: rad1(u, v) = 0 with u > 0 (upper half of the first x-arc)
    auto f = [&](double u) { return chart_rad1(r, u, v); };
    double hi = std::max(1.0, r);
    while (f(hi) > 0) hi *= 2;
    double lo = 0;
    for (int i = 0; i < 100; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) > 0 ? lo : hi) = mid;
    }
    double u = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) {
      const double d = -2 * u - 3 * u * u + 3 * v * v;
      if (std::abs(d) < 1e-300) break;
      u -= f(u) / d;
    }
    const double rad2 = std::max(chart_rad2(r, u, v), 0.0);
    const Vec4 pos(0.0, std::sqrt(rad2 / 2.0), u, v);
    out.push_back(project_to_surface(s, pos));
  }
  return out;
}

std::vector<Trace> foliation_atlas(const LinkSurface& s, int count, Foliation fol,
                                   const TraceOptions& opts) {
  const std::vector<SurfacePoint> seeds = seeds_on_e2(s, count);
  std::vector<Trace> traces(seeds.size());
  const int nthreads = std::min<int>(effective_threads(), static_cast<int>(seeds.size()));
  if (nthreads <= 1) {
    for (size_t i = 0; i < seeds.size(); ++i)
      traces[i] = trace_curvature_line(s, seeds[i], fol, opts);
    return traces;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(seeds.size());
  for (int t = 0; t < nthreads; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < seeds.size();) {
        try {
          traces[i] = trace_curvature_line(s, seeds[i], fol, opts);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return traces;
}

Trace apply_symmetry(const AffineMap& g, const Trace& t) {
  Trace out = t;
  for (auto& v : out.vertices) v = g(v);
  out.chart_tags.clear();
  out.chart_tags.reserve(out.vertices.size());
  for (const auto& v : out.vertices) out.chart_tags.push_back(tag_of(v));
  out.start_direction = g.linear * t.start_direction;
  return out;
}

// ---------------------------------------------------------------------
// CW complex
// ---------------------------------------------------------------------

namespace {

Vec4 boundary_lift(double r, double theta, int sx, int sy) {
  // On the hexagon boundary the smaller radicand vanishes; build the lift
  // with the vanishing coordinate pinned to zero exactly. At corners both
  // radicands vanish (up to root-solve noise), so both coordinates pin.
  const double rho = hexagon_boundary_radius(r, theta);
  const double u = rho * std::cos(theta), v = rho * std::sin(theta);
  const double rad1 = std::max(chart_rad1(r, u, v), 0.0);
  const double rad2 = std::max(chart_rad2(r, u, v), 0.0);
  const double corner_tol = 1e-12 * r * r;
  static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  if (rad1 <= rad2)  // x-arc
    return Vec4(0.0, rad2 <= corner_tol ? 0.0 : sy * std::sqrt(rad2) * inv_sqrt2, u, v);
  return Vec4(rad1 <= corner_tol ? 0.0 : sx * std::sqrt(rad1) * inv_sqrt2, 0.0, u, v);
}

}  // namespace

CWComplex build_cw_complex(const LinkSurface& s, int samples_per_edge) {
  if (s.p != 2 || s.q != 3)
    throw unsupported_exponents("the cell decomposition is specific to (p, q) = (2, 3)");
  if (samples_per_edge < 2) throw invalid_parameter("need >= 2 samples per edge");
  const double r = s.radius;
  const double tp = branch_parameter_bound(r);
  const double deg = M_PI / 180.0;
  const int signs[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  auto sign_slot = [&](int sx, int sy) {
    for (int i = 0; i < 4; ++i)
      if (signs[i][0] == sx && signs[i][1] == sy) return i;
    throw invalid_parameter("bad sign pair");
  };

  CWComplex cw;
  auto add_cell = [&](int dim, const std::string& orbit) -> CWCell& {
    CWCell c;
    c.id = static_cast<int>(cw.cells.size());
    c.dim = dim;
    c.orbit = orbit;
    cw.cells.push_back(std::move(c));
    ++cw.counts[static_cast<size_t>(dim)];
    return cw.cells.back();
  };

  // --- 0-cells ---
  int v0[4];  // umbilics, by sign slot
  const double cc = r / std::sqrt(2.0);
  for (const auto& sg : signs) {
    CWCell& c = add_cell(0, "v0");
    c.sample = Vec4(sg[0] * cc, sg[1] * cc, 0, 0);
    v0[sign_slot(sg[0], sg[1])] = c.id;
  }
  int v1[3][2];  // x-arc midpoint lifts, [sector][sy<0 ? 0 : 1]
  for (int k = 0; k < 3; ++k)
    for (int isy = 0; isy < 2; ++isy) {
      const int sy = isy == 0 ? -1 : 1;
      CWCell& c = add_cell(0, "v1");
      const Vec4 uvpt = gamma3(k)(Vec4(0, 0, tp, 0));
      c.sample = Vec4(0, sy * std::pow(tp, 1.5), uvpt[2], uvpt[3]);
      v1[k][isy] = c.id;
    }
  int v2[3], v3[3];  // hexagon corners (I-points) at 90 + 120 k and 30 + 120 k
  for (int k = 0; k < 3; ++k) {
    CWCell& c2 = add_cell(0, "v2");
    const double th2 = (90 + 120 * k) * deg;
    c2.sample = Vec4(0, 0, r * std::cos(th2), r * std::sin(th2));
    v2[k] = c2.id;
    CWCell& c3 = add_cell(0, "v3");
    const double th3 = (30 + 120 * k) * deg;
    c3.sample = Vec4(0, 0, r * std::cos(th3), r * std::sin(th3));
    v3[k] = c3.id;
  }

  // --- 1-cells ---
  const int m = samples_per_edge;
  int a1[3][4];  // separatrix rays umbilic -> v1, [sector][sign slot]
  for (int k = 0; k < 3; ++k)
    for (const auto& sg : signs) {
      CWCell& c = add_cell(1, "a1");
      c.separatrix = true;
      SeparatrixBranch b;
      b.family = k;
      b.sx = sg[0];
      b.sy = sg[1];
      b.r = r;
      b.t_max = tp;
      for (int i = 0; i < m; ++i) c.polyline.push_back(b.at(tp * i / (m - 1)));
      c.sample = b.at(0.5 * tp);
      c.boundary = {v0[sign_slot(sg[0], sg[1])], v1[k][sg[1] > 0 ? 1 : 0]};
      a1[k][sign_slot(sg[0], sg[1])] = c.id;
    }
  auto arc_cell = [&](const char* orbit, double th_a, double th_b, int sx, int sy,
                      int vid_a, int vid_b) {
    CWCell& c = add_cell(1, orbit);
    for (int i = 0; i < m; ++i)
      c.polyline.push_back(boundary_lift(r, th_a + (th_b - th_a) * i / (m - 1), sx, sy));
    c.sample = boundary_lift(r, 0.5 * (th_a + th_b), sx, sy);
    c.boundary = {vid_a, vid_b};
    return c.id;
  };
  int a2[3][2], a4[3][2];  // x-arc halves (sx welded out), keyed by sy
  int a3[3][2];            // y-arcs (sy welded out), keyed by sx
  for (int k = 0; k < 3; ++k) {
    for (int isy = 0; isy < 2; ++isy) {
      const int sy = isy == 0 ? -1 : 1;
      a2[k][isy] = arc_cell("a2", (120.0 * k) * deg, (120.0 * k + 30) * deg, 1, sy,
                            v1[k][isy], v3[k]);
      a4[k][isy] = arc_cell("a4", (120.0 * k + 90) * deg, (120.0 * k + 120) * deg, 1,
                            sy, v2[k], v1[(k + 1) % 3][isy]);
    }
    for (int isx = 0; isx < 2; ++isx) {
      const int sx = isx == 0 ? -1 : 1;
      a3[k][isx] = arc_cell("a3", (120.0 * k + 30) * deg, (120.0 * k + 90) * deg, sx,
                            1, v3[k], v2[k]);
    }
  }

  // --- 2-cells: pentagons (sector k, chart signs) ---
  for (int k = 0; k < 3; ++k)
    for (const auto& sg : signs) {
      CWCell& c = add_cell(2, "f");
      const int slot = sign_slot(sg[0], sg[1]);
      c.boundary = {a1[k][slot], a2[k][sg[1] > 0 ? 1 : 0], a3[k][sg[0] > 0 ? 1 : 0],
                    a4[k][sg[1] > 0 ? 1 : 0], a1[(k + 1) % 3][slot]};
      // interior representative: mid-sector ray at 60 degrees into sector k
      const double th = (120.0 * k + 60) * deg;
      const double rho = 0.5 * hexagon_boundary_radius(r, th);
      c.sample = chart_phi(r, sg[0], sg[1], rho * std::cos(th), rho * std::sin(th));
    }

  return cw;
}

}  // namespace curvatura
