#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "curvatura/stereo.hpp"
#include "curvatura/tracer.hpp"
#include "curvatura/umbilic.hpp"

namespace curvatura {

// Shortest-roundtrip decimal form of a double (printf %.17g semantics with
// trailing-zero trimming disabled): deterministic, locale-independent.
std::string format_g17(double x);

// ASCII PLY: mesh vertices+faces first, then trace polylines appended as
// extra vertices with an edge element.
void write_ply(std::ostream& os, const SurfaceMesh* mesh,
               const std::vector<std::vector<Vec3>>* polylines,
               const std::vector<bool>* polyline_closed);

// Wavefront OBJ: v / f / l records (1-based); closed polylines repeat the
// first index.
void write_obj(std::ostream& os, const SurfaceMesh* mesh,
               const std::vector<std::vector<Vec3>>* polylines,
               const std::vector<bool>* polyline_closed);

// CSV of trace vertices: header x,y,u,v,sx,sy,sz,foliation,closed.
void write_traces_csv(std::ostream& os, const std::vector<Trace>& traces,
                      const StereoMap& st);

// JSON report: radius, umbilic table (position/index/slopes/type) and CW
// cell counts with the Euler characteristic.
void write_umbilics_json(std::ostream& os, double radius,
                         const std::vector<UmbilicReport>& umbilics,
                         const CWComplex* cw = nullptr);

// File-opening wrappers (throw io_failure).
void save_ply(const std::string& path, const SurfaceMesh* mesh,
              const std::vector<std::vector<Vec3>>* polylines,
              const std::vector<bool>* polyline_closed);
void save_obj(const std::string& path, const SurfaceMesh* mesh,
              const std::vector<std::vector<Vec3>>* polylines,
              const std::vector<bool>* polyline_closed);
void save_traces_csv(const std::string& path, const std::vector<Trace>& traces,
                     const StereoMap& st);
void save_umbilics_json(const std::string& path, double radius,
                        const std::vector<UmbilicReport>& umbilics,
                        const CWComplex* cw = nullptr);

}  // namespace curvatura
