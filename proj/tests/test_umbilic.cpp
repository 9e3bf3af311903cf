#include <array>
#include <cmath>
#include <random>

#include "curvatura/umbilic.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace curvatura;
using namespace curvatura::testing;

namespace {

const double kR = 1.0 / std::sqrt(10.0);

Rat rpow(const Rat& a, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) r *= a;
  return r;
}

// Exact evaluation of a rational polynomial at a rational point (the member
// eval<T> is for floating-point types).
template <class P>
Rat eval_exact(const P& p, const std::vector<Rat>& pt) {
  Rat acc(0);
  for (const auto& t : p.terms()) {
    Rat m = t.c;
    for (std::size_t i = 0; i < pt.size(); ++i) m *= rpow(pt[i], t.e[i]);
    acc += m;
  }
  return acc;
}

// Independently transcribed reference values for the xy-scaled frame
// coefficients of the curvature-line quadratic, as exact rationals.
Rat ref11(const Rat& x, const Rat& y, const Rat& u, const Rat& v) {
  const Rat x2 = x * x, y2 = y * y, u2 = u * u, v2 = v * v;
  const Rat d = x2 - y2, ss = x2 + y2;
  return v * (Rat(-18) * u2 * u * d + Rat(2) * u * (Rat(1) + Rat(18) * v2) * d +
              Rat(27) * u2 * u2 * (Rat(3) * v2 + ss) -
              Rat(3) * u2 * (Rat(9) * v2 * v2 + ss + v2 * (Rat(3) - Rat(9) * x2 - Rat(9) * y2)) +
              Rat(3) * (v2 * v2 + Rat(8) * x2 * y2 + Rat(3) * v2 * ss));
}

Rat ref12(const Rat& x, const Rat& y, const Rat& u, const Rat& v) {
  const Rat x2 = x * x, y2 = y * y, u2 = u * u, v2 = v * v;
  const Rat d = x2 - y2, ss = x2 + y2;
  return Rat(1, 2) *
         (Rat(36) * u2 * u2 * d - Rat(54) * u2 * v2 * d +
          Rat(2) * v2 * (Rat(-2) + Rat(9) * v2) * d -
          Rat(27) * u2 * u2 * u * (Rat(3) * v2 + ss) +
          Rat(6) * u2 * u * (Rat(-3) * v2 + Rat(18) * v2 * v2 - Rat(2) * ss) -
          Rat(3) * u *
              (Rat(9) * rpow(v, 6) + Rat(16) * x2 * y2 + Rat(4) * v2 * ss -
               v2 * v2 * (Rat(2) + Rat(9) * x2 + Rat(9) * y2)));
}

Rat ref21(const Rat& x, const Rat& y, const Rat& u, const Rat& v) {
  const Rat x2 = x * x, y2 = y * y, u2 = u * u, v2 = v * v;
  const Rat d = x2 - y2, ss = x2 + y2;
  return Rat(1, 2) *
         (Rat(-81) * rpow(u, 5) * v2 + Rat(9) * u2 * u2 * d -
          Rat(4) * u2 * (Rat(-1) + Rat(27) * v2) * d - Rat(9) * v2 * v2 * d +
          Rat(6) * u2 * u *
              (Rat(18) * v2 * v2 - Rat(2) * ss -
               Rat(3) * v2 * (Rat(1) + Rat(3) * x2 + Rat(3) * y2)) -
          Rat(3) * u *
              (Rat(9) * rpow(v, 6) + Rat(16) * x2 * y2 + Rat(4) * v2 * ss +
               Rat(2) * v2 * v2 * (Rat(-1) + Rat(9) * x2 + Rat(9) * y2)));
}

Rat ref22(const Rat& x, const Rat& y, const Rat& u, const Rat& v) {
  const Rat x2 = x * x, y2 = y * y, u2 = u * u, v2 = v * v;
  const Rat d = x2 - y2, ss = x2 + y2;
  return Rat(-1, 4) * v *
         (Rat(-81) * rpow(u, 6) +
          Rat(9) * u2 * u2 * (Rat(4) + Rat(21) * v2 - Rat(6) * x2 - Rat(6) * y2) -
          Rat(72) * u2 * u * d + Rat(8) * u * (Rat(1) + Rat(18) * v2) * d -
          Rat(3) * u2 * (Rat(4) * v2 + Rat(45) * v2 * v2 - Rat(20) * ss) +
          Rat(3) * (Rat(9) * rpow(v, 6) + Rat(32) * x2 * y2 + Rat(4) * v2 * ss +
                    Rat(18) * v2 * v2 * ss));
}

// Reference values for the coefficients restricted to the surface,
// polynomials in (u, v) and s = r^2.
Rat refE11(const Rat& u, const Rat& v, const Rat& s) {
  const Rat u2 = u * u, v2 = v * v;
  return v * (Rat(6) * s * s - Rat(15) * rpow(u, 6) + Rat(3) * u2 * v2 +
              u2 * u2 * (Rat(7) - Rat(27) * v2) +
              Rat(3) * s * (Rat(9) * u2 * u2 - v2 + u2 * (Rat(-5) + Rat(9) * v2)));
}

Rat refE1221(const Rat& u, const Rat& v, const Rat& s) {
  const Rat u2 = u * u, v2 = v * v;
  return Rat(1, 2) * u *
         (Rat(-24) * s * s -
          Rat(3) * s *
              (Rat(9) * u2 * u2 + v2 * (Rat(-8) + Rat(9) * v2) +
               Rat(2) * u2 * (Rat(-4) + Rat(9) * v2)) +
          Rat(2) * u2 *
              (Rat(3) * u2 * u2 + v2 * (Rat(-10) + Rat(9) * v2) +
               u2 * (Rat(-2) + Rat(36) * v2)));
}

Rat refE22(const Rat& u, const Rat& v, const Rat& s) {
  const Rat u2 = u * u, v2 = v * v;
  return Rat(1, 4) * v *
         (Rat(-24) * s * s - Rat(21) * rpow(u, 6) +
          u2 * u2 * (Rat(8) - Rat(27) * v2) -
          Rat(3) * u2 * v2 * (Rat(-4) + Rat(9) * v2) +
          Rat(3) * v2 * v2 * (Rat(-4) + Rat(9) * v2) +
          Rat(6) * s * (Rat(-2) * u2 + Rat(9) * u2 * u2 + Rat(6) * v2 - Rat(9) * v2 * v2));
}

std::mt19937& shared_rng() {
  static std::mt19937 rng(42);
  return rng;
}

Rat small_rat(std::mt19937& rng) {
  return Rat(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3));
}

}  // namespace

TEST_CASE("scaled frame coefficients match the transcribed reference exactly") {
  const ScaledFrameCoefficients sc = derive_scaled_frame_coefficients();
  auto& rng = shared_rng();
  for (int i = 0; i < 25; ++i) {
    const Rat x = small_rat(rng), y = small_rat(rng), u = small_rat(rng),
              v = small_rat(rng);
    const std::vector<Rat> pt{x, y, u, v, Rat(0)};
    CHECK(eval_exact(sc.c11, pt) == ref11(x, y, u, v));
    CHECK(eval_exact(sc.c12, pt) == ref12(x, y, u, v));
    CHECK(eval_exact(sc.c21, pt) == ref21(x, y, u, v));
    CHECK(eval_exact(sc.c22, pt) == ref22(x, y, u, v));
  }
}

TEST_CASE("scaled coefficients vanish on the normal axis u = v = 0") {
  const ScaledFrameCoefficients sc = derive_scaled_frame_coefficients();
  for (const RPoly5* p : {&sc.c11, &sc.c12, &sc.c21, &sc.c22}) {
    const RPoly5 at0 = p->subst_const(2, Rat(0)).subst_const(3, Rat(0));
    CHECK(at0.is_zero());
  }
}

TEST_CASE("restricted coefficients match the transcribed reference exactly") {
  const RestrictedOmegas ro = derive_restricted_omegas();
  auto& rng = shared_rng();
  for (int i = 0; i < 25; ++i) {
    const Rat u = small_rat(rng), v = small_rat(rng), s = small_rat(rng);
    const std::vector<Rat> pt{Rat(0), Rat(0), u, v, s};
    CHECK(eval_exact(ro.scaled11, pt) == refE11(u, v, s));
    CHECK(eval_exact(ro.scaled1221, pt) == refE1221(u, v, s));
    CHECK(eval_exact(ro.scaled22, pt) == refE22(u, v, s));
    // the divided factors reassemble the scaled forms
    CHECK(eval_exact(ro.omega1, pt) * v == refE11(u, v, s));
    CHECK(eval_exact(ro.omega2, pt) * u == refE1221(u, v, s));
    CHECK(eval_exact(ro.omega3, pt) * v == refE22(u, v, s));
  }
}

TEST_CASE("restricted omegas as doubles agree with the exact values") {
  const RestrictedOmegas ro = derive_restricted_omegas();
  auto& rng = shared_rng();
  for (int i = 0; i < 50; ++i) {
    const double u = urand(rng, -0.3, 0.3), v = urand(rng, -0.3, 0.3);
    const double r2 = kR * kR;
    for (int k = 1; k <= 3; ++k) CHECK(std::isfinite(ro.eval(k, u, v, r2)));
    // cross-check one component against the reference formula in doubles
    const double s = r2, u2 = u * u, v2 = v * v;
    const double e11 =
        v * (6 * s * s - 15 * std::pow(u, 6) + 3 * u2 * v2 +
             u2 * u2 * (7 - 27 * v2) +
             3 * s * (9 * u2 * u2 - v2 + u2 * (-5 + 9 * v2)));
    if (std::abs(v) > 1e-3)
      CHECK(ro.eval(1, u, v, r2) * v ==
            doctest::Approx(e11).epsilon(1e-10).scale(1e-6));
  }
}

TEST_CASE("reduce_to_wz maps even polynomials and rejects odd ones") {
  const RPoly5 u = RPoly5::var(2), v = RPoly5::var(3), s = RPoly5::var(4);
  // u^2 v^4 s -> (1/10) w z^2
  const RPoly2 r = reduce_to_wz(u * u * RPoly5::pow(v, 4) * s);
  const RPoly2 w = RPoly2::var(0), z = RPoly2::var(1);
  CHECK(r == Rat(1, 10) * (w * RPoly2::pow(z, 2)));
  CHECK_THROWS_AS(reduce_to_wz(RPoly5::var(2, 3)), invalid_parameter);
  CHECK_THROWS_AS(reduce_to_wz(RPoly5::var(0)), invalid_parameter);
}

TEST_CASE("reduced system ties exactly to the restriction pipeline") {
  const RestrictedOmegas ro = derive_restricted_omegas();
  const ThetaSystem ts = make_theta_system();
  CHECK(ts.r2 == Rat(1, 10));
  std::string msg;
  CHECK(check_theta_reduction(ro, ts, &msg));
  CHECK(msg.empty());
}

TEST_CASE("corrupting the reduced system is detected and named") {
  const RestrictedOmegas ro = derive_restricted_omegas();
  const ThetaSystem bad = make_theta_system(Rat(1, 1000000));
  std::string msg;
  CHECK(!check_theta_reduction(ro, bad, &msg));
  CHECK(msg.find("theta-reduction") != std::string::npos);
}

TEST_CASE("published reduced coefficients are the frozen transcription") {
  // independent retyping of the three reduced polynomials at r^2 = 1/10
  const ThetaSystem ts = make_theta_system();
  const RPoly2 w = RPoly2::var(0), z = RPoly2::var(1);
  auto t = [&](long long n, long long d, int ew, int ez) {
    return RPoly2::pow(w, ew) * RPoly2::pow(z, ez) * Rat(n, d);
  };
  const RPoly2 theta1 = t(3, 50, 0, 0) + t(-3, 2, 1, 0) + t(97, 10, 2, 0) +
                        t(-15, 1, 3, 0) + t(-3, 10, 0, 1) + t(57, 10, 1, 1) +
                        t(-27, 1, 2, 1);
  const RPoly2 theta2 = t(-6, 25, 0, 0) + t(-6, 5, 1, 0) + t(67, 5, 2, 0) +
                        t(-21, 1, 3, 0) + t(18, 5, 0, 1) + t(12, 1, 1, 1) +
                        t(-27, 1, 2, 1) + t(-87, 5, 0, 2) + t(-27, 1, 1, 2) +
                        t(27, 1, 0, 3);
  const RPoly2 theta3 = t(-6, 25, 0, 0) + t(12, 5, 1, 0) + t(-67, 10, 2, 0) +
                        t(6, 1, 3, 0) + t(12, 5, 0, 1) + t(-127, 5, 1, 1) +
                        t(72, 1, 2, 1) + t(-27, 10, 0, 2) + t(18, 1, 1, 2);
  CHECK(ts.theta[0] == theta1);
  CHECK(ts.theta[1] == theta2);
  CHECK(ts.theta[2] == theta3);
}

TEST_CASE("elimination ideal generators vanish exactly at the rational root") {
  const auto& g1 = g1_coefficients();
  const auto& g2 = g2_coefficients();
  // g1(1/20) * 20^7 as an exact integer
  __int128 acc1 = 0;
  __int128 p20 = 1;
  for (int k = 7; k >= 0; --k) {
    // term a_k * 20^(7-k)
    __int128 scale = 1;
    for (int i = 0; i < 7 - k; ++i) scale *= 20;
    acc1 += static_cast<__int128>(g1[k]) * scale;
  }
  (void)p20;
  CHECK(acc1 == 0);
  // g2(3/20, 1/20) * 20^6 with g2 = c_w w + sum_k p_k z^k
  __int128 acc2 = static_cast<__int128>(g2[0]) * 3;
  for (int i = 0; i < 5; ++i) acc2 *= 20;  // c_w * (3/20) * 20^6 = c_w * 3 * 20^5
  for (int k = 0; k <= 6; ++k) {
    __int128 scale = 1;
    for (int i = 0; i < 6 - k; ++i) scale *= 20;
    acc2 += static_cast<__int128>(g2[k + 1]) * scale;
  }
  CHECK(acc2 == 0);
  // long double evaluators agree
  CHECK(std::abs(static_cast<double>(eval_g1(0.05L))) <= 1e-12);
  CHECK(std::abs(static_cast<double>(eval_g2(0.15L, 0.05L))) <= 1e-3);
}

TEST_CASE("root certificate isolates and excludes all real roots") {
  const RootCertificate cert = certify_no_interior_umbilics();
  REQUIRE(cert.roots.size() == 3);
  CHECK(cert.interior_excluded);

  const CertifiedRoot& r0 = cert.roots[0];
  const CertifiedRoot& r1 = cert.roots[1];
  const CertifiedRoot& r2 = cert.roots[2];
  CHECK(r0.z < r1.z);
  CHECK(r1.z < r2.z);

  // frozen high-precision values
  CHECK(r0.z == doctest::Approx(-0.00543838045011904872).epsilon(1e-13));
  CHECK(r1.z == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(r2.z == doctest::Approx(0.12315041633952562799).epsilon(1e-13));
  CHECK(r1.w == doctest::Approx(0.15).epsilon(1e-12));

  // the negative root satisfies w + z = 4/9 exactly
  CHECK(r0.w + r0.z == doctest::Approx(4.0 / 9.0).epsilon(1e-12));

  // closed-form second positive root
  const double sigma = 1289.0 - 216.0 * std::sqrt(35.0);
  const double z2cf =
      (67.0 - std::cbrt(371293.0 / sigma) - std::cbrt(13.0 * sigma)) / 240.0;
  CHECK(std::abs(r2.z - z2cf) <= 1e-12);

  for (const CertifiedRoot& rt : cert.roots) {
    CHECK(!rt.admissible);
    CHECK(!rt.exclusion.empty());
    CHECK(rt.g1_residual <= 1e-12);
    for (double t : rt.theta_residual) CHECK(std::abs(t) <= 1e-9);
  }
  CHECK(r0.exclusion.find("z") != std::string::npos);
  CHECK(r1.exclusion.find("w + z") != std::string::npos);
  CHECK(r2.exclusion.find("w + z") != std::string::npos);

  // positive roots land outside the chart: w + z above r^2 = 1/10
  CHECK(r1.w + r1.z > 0.1);
  CHECK(r2.w + r2.z > 0.1);
}

TEST_CASE("Monge jets reproduce the chart heights to third order") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  auto& rng = shared_rng();
  const double c = kR / std::sqrt(2.0);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) {
      const MongeJet jet = monge_jet_at_umbilic(s, sx, sy);
      CHECK(jet.sx == sx);
      CHECK(jet.sy == sy);
      // structural facts the slope cubic rests on
      CHECK(jet.m == 0);
      CHECK(jet.n == 0);
      CHECK(jet.beta == 0);
      CHECK(jet.c == 0);
      CHECK(jet.b == doctest::Approx(-jet.a).epsilon(1e-14));
      CHECK((2 * jet.b - jet.a) / jet.b == doctest::Approx(3.0).epsilon(1e-14));

      for (double delta : {1e-2 * kR, 3e-2 * kR}) {
        double worst1 = 0, worst2 = 0;
        for (int i = 0; i < 40; ++i) {
          const double th = urand(rng, 0, 2 * M_PI);
          const double rho = delta * std::sqrt(urand(rng, 0.25, 1.0));
          const double u = rho * std::cos(th), v = rho * std::sin(th);
          const Vec4 q = chart_phi(kR, sx, sy, u, v);
          // heights are measured toward the coordinate hyperplanes:
          // x = sx r/sqrt2 - height1, y = sy r/sqrt2 - height2
          worst1 = std::max(worst1,
                            std::abs(q[0] - (sx * c - jet.height1(u, v))));
          worst2 = std::max(worst2,
                            std::abs(q[1] - (sy * c - jet.height2(u, v))));
        }
        const double bound = 50.0 * delta * delta * delta * delta / (kR * kR * kR);
        CHECK(worst1 <= bound);
        CHECK(worst2 <= bound);
      }
    }
}

TEST_CASE("separatrix slope cubic roots at the umbilics") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  const double s3 = std::sqrt(3.0);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) {
      const auto slopes = separatrix_slopes(monge_jet_at_umbilic(s, sx, sy));
      REQUIRE(slopes.size() == 3);
      CHECK(slopes[0] == doctest::Approx(-s3).epsilon(1e-12));
      CHECK(std::abs(slopes[1]) <= 1e-12);
      CHECK(slopes[2] == doctest::Approx(s3).epsilon(1e-12));
    }
}

TEST_CASE("slope cubic solver on synthetic jets") {
  SUBCASE("pure cubic term: p^3 - 2p") {
    MongeJet j;
    j.b = 1;
    const auto r = separatrix_slopes(j);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(r[1]) <= 1e-12);
    CHECK(r[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("single real root: p^3 - 1") {
    MongeJet j;
    j.b = 1;
    j.beta = 1;
    j.m = 1;
    j.c = 1;
    j.a = 2;
    const auto r = separatrix_slopes(j);
    REQUIRE(r.size() == 1);
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("all-zero cubic throws") {
    MongeJet j;
    CHECK_THROWS_AS(separatrix_slopes(j), degenerate_cubic);
  }
}

TEST_CASE("line-field winding index at each umbilic") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) CHECK(umbilic_index(s, sx, sy) == -0.5);
}

TEST_CASE("full census finds exactly the four axis umbilics") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  UmbilicSearchOptions opts;
  opts.sweep_step_frac = 1.0 / 80;  // keep the unit test quick
  const auto umb = find_umbilics(s, opts);
  REQUIRE(umb.size() == 4);
  const double c = kR / std::sqrt(2.0);
  const int expect_sx[4] = {-1, 1, 1, -1};
  const int expect_sy[4] = {-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) {
    CHECK(umb[i].sx == expect_sx[i]);
    CHECK(umb[i].sy == expect_sy[i]);
    const Vec4 expect(expect_sx[i] * c, expect_sy[i] * c, 0, 0);
    CHECK((umb[i].position - expect).norm() <= 1e-10);
    CHECK(umb[i].index == -0.5);
    CHECK(umb[i].type == "D3");
    REQUIRE(umb[i].slopes.size() == 3);
    CHECK(umb[i].slopes[0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-9));
    CHECK(std::abs(umb[i].slopes[1]) <= 1e-9);
    CHECK(umb[i].slopes[2] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
  }
}

TEST_CASE("census scales with the radius") {
  const LinkSurface s = make_double_torus(2, 3, 1.0);
  UmbilicSearchOptions opts;
  opts.run_sweep = false;  // algebraic path only
  const auto umb = find_umbilics(s, opts);
  REQUIRE(umb.size() == 4);
  const double c = 1.0 / std::sqrt(2.0);
  for (const auto& u : umb) {
    CHECK(std::abs(std::abs(u.position[0]) - c) <= 1e-10);
    CHECK(std::abs(std::abs(u.position[1]) - c) <= 1e-10);
    CHECK(std::abs(u.position[2]) <= 1e-12);
    CHECK(std::abs(u.position[3]) <= 1e-12);
  }
}

TEST_CASE("census rejects unsupported exponent pairs") {
  const LinkSurface s = make_double_torus(2, 2, kR);
  CHECK_THROWS_AS(find_umbilics(s), unsupported_exponents);
  CHECK_THROWS_AS(monge_jet_at_umbilic(s, 1, 1), unsupported_exponents);
  CHECK_THROWS_AS(umbilic_index(s, 1, 1), unsupported_exponents);
}
