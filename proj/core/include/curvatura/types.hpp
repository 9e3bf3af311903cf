#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace curvatura {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Error hierarchy. Every failure mode raised by the library derives from
// curvatura::error so callers can catch coarsely or by specific condition.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_parameter : error { using error::error; };
struct unsupported_exponents : error { using error::error; };
struct no_convergence : error { using error::error; };
struct degenerate_frame : error { using error::error; };
struct out_of_chart : error { using error::error; };
struct degenerate_cubic : error { using error::error; };
struct winding_ambiguous : error { using error::error; };
struct weld_failure : error { using error::error; };
struct bad_pole : error { using error::error; };
struct io_failure : error { using error::error; };

}  // namespace curvatura
