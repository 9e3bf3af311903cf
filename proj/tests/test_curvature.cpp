#include <cmath>
#include <random>

#include "curvatura/curvature.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace curvatura;
using namespace curvatura::testing;

namespace {
const double kR = 1.0 / std::sqrt(10.0);

// Reference for the quadratic differential straight from its definition:
// symmetrized det[Hess(F) a, b, R, nu], with R the radial field.
double omega_reference(const LinkSurface& s, const Vec4& x, const Vec4& a,
                       const Vec4& b) {
  const Mat4 H = s.F.hessian(x);
  const Vec4 nu = s.F.gradient(x);
  auto det4 = [](const Vec4& c0, const Vec4& c1, const Vec4& c2, const Vec4& c3) {
    Mat4 m;
    m.col(0) = c0;
    m.col(1) = c1;
    m.col(2) = c2;
    m.col(3) = c3;
    return m.determinant();
  };
  return 0.5 * (det4(H * a, b, x, nu) + det4(H * b, a, x, nu));
}
}  // namespace

TEST_CASE("omega_at is symmetric and matches its defining determinant") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(201);
  for (int i = 0; i < 100; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const OmegaForm om = omega_at(s, sp.position);
    CHECK((om.m - om.m.transpose()).norm() <= 1e-14 * std::max(1.0, om.m.norm()));
    CHECK((om.basepoint - sp.position).norm() == 0.0);
    for (int k = 0; k < 5; ++k) {
      Vec4 a, b;
      for (int j = 0; j < 4; ++j) {
        a[j] = urand(rng, -1, 1);
        b[j] = urand(rng, -1, 1);
      }
      const double ref = omega_reference(s, sp.position, a, b);
      CHECK(om(a, b) == doctest::Approx(ref).epsilon(1e-11).scale(1.0));
    }
  }
}

TEST_CASE("omega_at agrees with the closed-form matrix on the (2,3) surface") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(202);
  double worst = 0;
  for (int i = 0; i < 500; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const Mat4 a = omega_at(s, sp.position).m;
    const Mat4 b = omega_closed_form_23(sp.position);
    worst = std::max(worst, (a - b).norm() / std::max(a.norm(), 1e-300));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("closed form is radius-independent and works off the surface") {
  // the entries depend only on the point coordinates
  const LinkSurface s1 = make_double_torus(2, 3, kR);
  const LinkSurface s2 = make_double_torus(2, 3, 1.0);
  const Vec4 q(0.21, -0.34, 0.12, 0.05);
  const Mat4 a = omega_at(s1, q).m;
  const Mat4 b = omega_at(s2, q).m;
  const Mat4 c = omega_closed_form_23(q);
  CHECK((a - b).norm() <= 1e-14 * c.norm());
  CHECK((a - c).norm() <= 1e-13 * c.norm());
}

TEST_CASE("frame quadratic evaluates the form in frame coordinates") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(203);
  for (int i = 0; i < 50; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const OmegaForm om = omega_at(s, sp.position);
    const FrameQuadratic q = omega_in_frame(om, sp.t1, sp.t2);
    for (int k = 0; k < 5; ++k) {
      const double l1 = urand(rng, -2, 2), l2 = urand(rng, -2, 2);
      const Vec4 w = l1 * sp.t1 + l2 * sp.t2;
      CHECK(q.eval(l1, l2) ==
            doctest::Approx(om(w, w)).epsilon(1e-11).scale(q.scale()));
    }
  }
}

TEST_CASE("quadratic null directions annihilate the form") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(204);
  for (int i = 0; i < 200; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const FrameQuadratic q = omega_in_frame(omega_at(s, sp.position), sp.t1, sp.t2);
    std::array<Vec2, 2> dirs;
    const int n = quadratic_null_directions(q, dirs);
    REQUIRE(n == 2);
    for (int k = 0; k < 2; ++k) {
      CHECK(dirs[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(q.eval(dirs[k][0], dirs[k][1])) <= 1e-12 * q.scale());
    }
    // the two directions are distinct lines
    CHECK(std::abs(dirs[0][0] * dirs[1][1] - dirs[0][1] * dirs[1][0]) > 1e-8);
  }
}

TEST_CASE("quadratic null directions handle special shapes") {
  std::array<Vec2, 2> dirs;
  SUBCASE("identically zero form (umbilic)") {
    CHECK(quadratic_null_directions({0, 0, 0}, dirs) == 0);
  }
  SUBCASE("pure cross term vanishes on the axes") {
    REQUIRE(quadratic_null_directions({0, 3.0, 0}, dirs) == 2);
    const double p0 = std::abs(dirs[0][0] * dirs[0][1]);
    const double p1 = std::abs(dirs[1][0] * dirs[1][1]);
    CHECK(p0 <= 1e-14);
    CHECK(p1 <= 1e-14);
  }
  SUBCASE("perfect square gives a doubled root") {
    // (l1 - l2)^2
    REQUIRE(quadratic_null_directions({1, -2, 1}, dirs) == 2);
    CHECK((dirs[0] - dirs[1]).norm() <= 1e-6);
    CHECK(dirs[0][0] == doctest::Approx(dirs[0][1]).epsilon(1e-9));
  }
  SUBCASE("negative discriminant is rejected") {
    CHECK_THROWS_AS(quadratic_null_directions({1, 0, 1}, dirs),
                    degenerate_frame);
  }
}

TEST_CASE("principal curvatures: eigenstructure and conventions") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(205);
  for (int i = 0; i < 100; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const PrincipalCurvatures pc = principal_curvatures(s, sp);
    CHECK(pc.kappa_min <= pc.kappa_max);
    CHECK(pc.shape(0, 1) == doctest::Approx(pc.shape(1, 0)).epsilon(1e-12));
    CHECK(pc.dir_min.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pc.dir_max.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(pc.dir_min.dot(pc.dir_max)) <= 1e-10);
    // directions are tangent
    CHECK(std::abs(pc.dir_min.dot(sp.nu)) <= 1e-9 * sp.nu.norm());
    CHECK(std::abs(pc.dir_min.dot(sp.mu)) <= 1e-9 * sp.mu.norm());
    // eigen equation in the frame: S d = kappa d
    const Vec2 dmin(pc.dir_min.dot(sp.t1), pc.dir_min.dot(sp.t2));
    CHECK((pc.shape * dmin - pc.kappa_min * dmin).norm() <=
          1e-9 * std::max(1.0, std::abs(pc.kappa_min)));
    // trace/determinant consistency
    CHECK(pc.shape.trace() ==
          doctest::Approx(pc.kappa_min + pc.kappa_max).epsilon(1e-10));
  }
}

TEST_CASE("principal directions are deterministic") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  const SurfacePoint sp = project_to_surface(s, Vec4(0.3, 0.2, 0.05, 0.08));
  const PrincipalCurvatures a = principal_curvatures(s, sp);
  const PrincipalCurvatures b = principal_curvatures(s, sp);
  CHECK((a.dir_min - b.dir_min).norm() == 0.0);
  CHECK((a.dir_max - b.dir_max).norm() == 0.0);
  // sign convention: the largest-magnitude component is positive
  int imax = 0;
  a.dir_max.cwiseAbs().maxCoeff(&imax);
  CHECK(a.dir_max[imax] > 0);
}

TEST_CASE("null directions of the quadratic are the principal directions") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(206);
  for (int i = 0; i < 200; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const PrincipalCurvatures pc = principal_curvatures(s, sp);
    const FrameQuadratic q = omega_in_frame(omega_at(s, sp.position), sp.t1, sp.t2);
    std::array<Vec2, 2> dirs;
    REQUIRE(quadratic_null_directions(q, dirs) == 2);
    for (int k = 0; k < 2; ++k) {
      const Vec4 d = dirs[k][0] * sp.t1 + dirs[k][1] * sp.t2;
      const double amin = angle_between_lines(d, pc.dir_min);
      const double amax = angle_between_lines(d, pc.dir_max);
      CHECK(std::min(amin, amax) <= 1e-9);
    }
  }
}

TEST_CASE("finite-difference shape operator converges to the analytic one") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  std::mt19937 rng(207);
  for (int i = 0; i < 50; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng);
    const PrincipalCurvatures pc = principal_curvatures(s, sp);
    const Mat2 fd = shape_operator_fd(s, sp, 1e-5 * kR);
    const Mat2 sym = 0.5 * (fd + fd.transpose());
    CHECK((sym - pc.shape).norm() <= 1e-5 * std::max(1.0, pc.shape.norm()));
    // the raw operator is nearly symmetric already
    CHECK((fd - fd.transpose()).norm() <= 1e-4 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("curvature gap vanishes exactly at the umbilics and nowhere typical") {
  const LinkSurface s = make_double_torus(2, 3, kR);
  const double c = kR / std::sqrt(2.0);
  for (int sx : {-1, 1})
    for (int sy : {-1, 1}) {
      const SurfacePoint sp = surface_frame_at(s, Vec4(sx * c, sy * c, 0, 0));
      CHECK(curvature_gap(s, sp) <= 1e-10);
      CHECK(principal_curvatures(s, sp).umbilic);
    }
  std::mt19937 rng(208);
  for (int i = 0; i < 50; ++i) {
    const SurfacePoint sp = random_surface_point(s, rng, 0.1);
    if ((sp.position - Vec4(c, c, 0, 0)).norm() < 0.05 * kR) continue;
    CHECK(curvature_gap(s, sp) >= 0);
  }
}
