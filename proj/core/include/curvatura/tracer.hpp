#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "curvatura/curvature.hpp"
#include "curvatura/fields.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

// ---------------------------------------------------------------------
// Ambient symmetries of the (2,3) surface.
// ---------------------------------------------------------------------

struct AffineMap {
  Mat4 linear = Mat4::Identity();
  Vec4 offset = Vec4::Zero();

  Vec4 operator()(const Vec4& x) const { return linear * x + offset; }
  AffineMap after(const AffineMap& first) const;  // this ∘ first
  AffineMap inverse() const;
};

AffineMap gamma1();        // (x, -y, u, v)
AffineMap gamma2();        // (-x, y, u, v)
AffineMap gamma3(int k = 1);  // identity on (x, y), rotation by 2*pi*k/3 in (u, v)

// All 12 products gamma1^i gamma2^j gamma3^k (Z2 x Z2 x Z3).
std::vector<AffineMap> symmetry_group();

// Rotation by 2*pi*k/3 conjugated to be centered at c. The centers of
// interest (the umbilics) are fixed by gamma3, so conjugation is a no-op
// for them; kept general for clarity at call sites.
AffineMap rotation_about(const Vec4& c, int k);

// ---------------------------------------------------------------------
// Umbilic separatrices. The four branches through the v = 0 section are
//   t -> (sx sqrt(rad1(t,0))/sqrt2, sy sqrt(rad2(t,0))/sqrt2, t, 0),
// t in [-t_plus, t_plus] with t_plus the positive root of t^3 + t^2 = r^2;
// the other two families are their gamma3 rotations.
// ---------------------------------------------------------------------

double branch_parameter_bound(double r);  // t_plus

struct SeparatrixBranch {
  int family = 0;  // 0, 1, 2: power of gamma3 applied
  int sx = 1, sy = 1;
  double r = 0;
  double t_max = 0;

  Vec4 at(double t) const;
  Vec4 velocity(double t) const;  // d/dt, one-sided at the ends
};

struct SeparatrixSet {
  std::vector<SeparatrixBranch> branches;  // 12 = 3 families x 4 sign pairs
  std::array<Vec4, 4> umbilics;            // (-,-), (+,-), (+,+), (-,+)
  double t_max = 0;
};

SeparatrixSet separatrix_set(const LinkSurface& s);

// ---------------------------------------------------------------------
// Numerical integration of the principal foliations.
// ---------------------------------------------------------------------

enum class Foliation { Max, Min };

struct TraceOptions {
  double step = 0;            // <= 0: 1e-3 * r
  double eps_close = 0;       // <= 0: 10 * step
  double max_arc = 0;         // <= 0: 100 * r
  double umbilic_guard = 0;   // <= 0: max(3 * step, 1e-3 * r)
  double min_closure_arc = 0; // <= 0: max(20 * step, 5 * eps_close)
  int max_steps = 2000000;
};

struct Trace {
  Foliation foliation = Foliation::Max;
  std::vector<Vec4> vertices;
  // sign(x), sign(y) per vertex; 0 within 1e-14 of a coordinate hyperplane
  std::vector<std::array<std::int8_t, 2>> chart_tags;
  bool closed = false;
  bool hit_umbilic_guard = false;
  double arc_length = 0;
  Vec4 start_direction;

  // number of interior sign changes of component `coord` (0 = x, 1 = y)
  int sign_changes(int coord) const;
};

// Fourth-order integration of the chosen principal direction field with
// Gauss-Newton reprojection, orientation continuation, adaptive halving
// (corrector > 5 iterations or direction turning > 5 degrees per step),
// closure detection against the seed, and an umbilic guard.
Trace trace_curvature_line(const LinkSurface& s, const SurfacePoint& seed,
                           Foliation fol, const TraceOptions& opts = {});

// Seeds on the lift of the hexagon edge e2 = { x = 0, rad1 = 0, u,v > 0 }
// of the (+,+)-pentagon boundary: v_k = (r/2) (k+1)/(count+1).
std::vector<SurfacePoint> seeds_on_e2(const LinkSurface& s, int count);

// Traces the chosen foliation from `count` e2-lift seeds; results ordered by
// seed index (traces may be computed concurrently).
std::vector<Trace> foliation_atlas(const LinkSurface& s, int count, Foliation fol,
                                   const TraceOptions& opts = {});

// Vertex-wise image of a trace under an ambient symmetry; no re-integration.
Trace apply_symmetry(const AffineMap& g, const Trace& t);

// ---------------------------------------------------------------------
// CW decomposition induced by the principal foliations: 16 vertices,
// 30 edges, 12 pentagonal faces (Euler characteristic -2).
// ---------------------------------------------------------------------

struct CWCell {
  int id = -1;
  int dim = 0;
  std::string orbit;           // v0, v1, v2, v3 / a1..a4 / f
  std::vector<int> boundary;   // ids of cells of dimension dim-1 in the closure
  Vec4 sample;                 // representative point
  std::vector<Vec4> polyline;  // sampled geometry for 1-cells
  bool separatrix = false;     // a1 edges (umbilic separatrices)
};

struct CWComplex {
  std::vector<CWCell> cells;
  std::array<int, 3> counts{};  // per dimension

  int euler() const { return counts[0] - counts[1] + counts[2]; }
  const CWCell& cell(int id) const { return cells.at(static_cast<size_t>(id)); }
};

CWComplex build_cw_complex(const LinkSurface& s, int samples_per_edge = 33);

}  // namespace curvatura
