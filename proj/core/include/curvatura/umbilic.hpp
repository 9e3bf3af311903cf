#pragma once

#include <array>
#include <string>
#include <vector>

#include "curvatura/curvature.hpp"
#include "curvatura/fields.hpp"
#include "curvatura/rational.hpp"
#include "curvatura/types.hpp"

namespace curvatura {

// ---------------------------------------------------------------------
// Exact elimination pipeline for the (2,3) surface.
//
// The curvature-line quadratic in the chart frame has coefficients that are
// polynomial after scaling by powers of 2xy. Substituting
//   x^2 = (s - u^2 - v^2 - (u^3 - 3 u v^2)) / 2
//   y^2 = (s - u^2 - v^2 + (u^3 - 3 u v^2)) / 2        (s = r^2)
// restricts them to the surface; each factors through v, u, v respectively.
// Umbilics are common zeros of the three reduced polynomials.
// ---------------------------------------------------------------------

// xy-scaled curvature-line quadratic coefficients in the chart frame,
// before restriction: polynomials in (x, y, u, v), radius-independent.
struct ScaledFrameCoefficients {
  RPoly5 c11, c12, c21, c22;
};

ScaledFrameCoefficients derive_scaled_frame_coefficients();

struct RestrictedOmegas {
  RPoly5 scaled11, scaled1221, scaled22;  // xy-scaled frame coefficients, restricted
  RPoly5 omega1, omega2, omega3;          // divided by v, u, v

  // evaluate omega_i at (u, v) with s = r^2
  double eval(int i, double u, double v, double r2) const;
};

RestrictedOmegas derive_restricted_omegas();

// substitute s = 1/10, u^2 = w, v^2 = z (poly must be even in u and v)
RPoly2 reduce_to_wz(const RPoly5& p);

// ---------------------------------------------------------------------
// Eliminated system in w = u^2, z = v^2 for r^2 = 1/10, plus the lex
// Groebner generators of its ideal. theta_reduction_map checks the exact
// identities tying the reduced system back to the restriction pipeline:
//   theta1 = red(omega1), theta2 = 4 red(omega3), theta3 = 2 red(omega2)
// where red substitutes s = 1/10, u^2 = w, v^2 = z (all three omegas are
// even in u and v). perturb corrupts theta1's constant coefficient, turning
// the check into a negative control.
// ---------------------------------------------------------------------

struct ThetaSystem {
  std::array<RPoly2, 3> theta;  // variables (w, z)
  Rat r2;                       // 1/10
};

ThetaSystem make_theta_system(Rat perturb = Rat(0));

// Returns true iff the three identities hold exactly; on failure appends a
// "theta-reduction" diagnostic to msg.
bool check_theta_reduction(const RestrictedOmegas& ro, const ThetaSystem& ts,
                           std::string* msg = nullptr);

// ---------------------------------------------------------------------
// Root certificate: the lex Groebner basis of the theta ideal contains a
// degree-7 univariate g1(z) and a generator g2(w, z) linear in w. Interior
// umbilics off the symmetry axes would give admissible solutions
// (w > 0, z > 0, w + z <= r^2). The certificate isolates all real roots of
// g1, solves for w, and reports why each solution is excluded.
// ---------------------------------------------------------------------

struct CertifiedRoot {
  double z = 0, w = 0;
  double g1_residual = 0;                 // |g1(z)| after refinement
  std::array<double, 3> theta_residual{}; // |theta_i(w, z)|
  bool admissible = false;
  std::string exclusion;                  // empty when admissible
};

struct RootCertificate {
  std::vector<CertifiedRoot> roots;  // all real roots of g1
  bool interior_excluded = false;    // true iff no root is admissible
};

// Valid for r^2 = 1/10; umbilic positions for other radii follow from the
// weighted homothety taking the surface family into itself.
RootCertificate certify_no_interior_umbilics();

// g1 coefficients ascending (z^0 .. z^7) and g2 = cw * w + p(z) with p of
// degree 6, stored as [cw, z^0, ..., z^6].
const std::array<long long, 8>& g1_coefficients();
const std::array<long long, 8>& g2_coefficients();

long double eval_g1(long double z);
long double eval_g2(long double w, long double z);

// ---------------------------------------------------------------------
// Monge-form jets at the four umbilics (sx r/sqrt2, sy r/sqrt2, 0, 0) and
// the separatrix slope cubic derived from them.
// ---------------------------------------------------------------------

struct MongeJet {
  int sx = 1, sy = 1;
  double k = 0, a = 0, b = 0, c = 0;      // first height: quadratic k, cubic a,b,c
  double alpha = 0, beta = 0, gamma = 0;  // second height quadratic
  double delta = 0, eps = 0, zeta = 0, eta = 0;  // second height cubic
  double m = 0, n = 0;                    // normal-plane rotation rates

  // Degree-3 Taylor values of the graph heights measured from the
  // tangent plane toward the coordinate hyperplanes, so the chart
  // satisfies x = sx r/sqrt2 - height1(u,v) + O(rho^4) and
  // y = sy r/sqrt2 - height2(u,v) + O(rho^4).
  double height1(double u, double v) const;
  double height2(double u, double v) const;
};

MongeJet monge_jet_at_umbilic(const LinkSurface& s, int sx, int sy);

// Real roots p of the slope cubic
//   (b + beta n) p^3 + (beta m - c - (gamma - alpha) n) p^2
//   - (2b - a + (gamma - alpha) m + beta n) p - beta m = 0,
// sorted ascending. Throws degenerate_cubic if all coefficients vanish.
std::vector<double> separatrix_slopes(const MongeJet& jet);

// Index of the principal line field around the umbilic, computed by winding
// the max-direction against the chart coordinate frame on a loop of radius
// loop_frac * r. Result is a multiple of 1/2; throws winding_ambiguous if
// the accumulated angle is farther than 0.05 turns from a half-integer or a
// single sample step turns the direction by more than pi/2.
double umbilic_index(const LinkSurface& s, int sx, int sy,
                     double loop_frac = 0.05, int samples = 720);

// ---------------------------------------------------------------------
// Full umbilic census for the (2,3) surface.
// ---------------------------------------------------------------------

struct UmbilicReport {
  Vec4 position;
  int sx = 1, sy = 1;
  double index = 0;
  std::vector<double> slopes;
  std::string type;  // "D3" for the lemon-star trisector pattern here
};

struct UmbilicSearchOptions {
  bool run_sweep = true;      // dense curvature-gap sweep over one chart
  double sweep_step_frac = 1.0 / 200;  // grid step as a fraction of r
  double eps_gap = 1e-8;
  int threads = 0;
  double index_loop_frac = 0.05;
  int index_samples = 720;
};

// Returns the four umbilics (order: (-,-), (+,-), (+,+), (-,+)) after
// verifying (a) the restricted omegas vanish at the chart origin, (b) the
// certificate excludes interior umbilics, and (c) optionally, that a dense
// curvature-gap sweep finds no further minima that refine to umbilics.
std::vector<UmbilicReport> find_umbilics(const LinkSurface& s,
                                         const UmbilicSearchOptions& opts = {});

}  // namespace curvatura
