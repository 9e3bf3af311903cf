// Command-line driver for the curvatura library: umbilic census, separatrix
// slopes, curvature-line tracing, separatrix/cell-complex extraction, chart
// meshing, and a one-shot verification battery.
//
// Subcommands: umbilics | slopes | trace | separatrices | mesh | verify
// Global flags mirror the config file keys; flags override file values.
// Exit codes: 0 success, 1 a requested check failed, 2 usage/parameter error.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "curvatura/config.hpp"
#include "curvatura/curvature.hpp"
#include "curvatura/fields.hpp"
#include "curvatura/geom_export.hpp"
#include "curvatura/stereo.hpp"
#include "curvatura/tracer.hpp"
#include "curvatura/types.hpp"
#include "curvatura/umbilic.hpp"

namespace {

using namespace curvatura;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_vec4(const Vec4& v) {
  return "(" + format_g17(v[0]) + ", " + format_g17(v[1]) + ", " +
         format_g17(v[2]) + ", " + format_g17(v[3]) + ")";
}

Vec4 parse_vec4(const std::string& text) {
  std::stringstream ss(text);
  std::string tok;
  std::vector<double> c;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t pos = 0;
      const double value = std::stod(tok, &pos);
      while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
      if (pos != tok.size()) throw std::invalid_argument(tok);
      c.push_back(value);
    } catch (const std::exception&) {
      throw invalid_parameter("bad coordinate '" + tok + "' in '" + text + "'");
    }
  }
  if (c.size() != 4)
    throw invalid_parameter("expected 4 comma-separated coordinates, got " +
                            std::to_string(c.size()) + " in '" + text + "'");
  return Vec4(c[0], c[1], c[2], c[3]);
}

Vec4 pole_of(const RunConfig& cfg) {
  if (cfg.pole) return Vec4((*cfg.pole)[0], (*cfg.pole)[1], (*cfg.pole)[2], (*cfg.pole)[3]);
  return StereoMap::default_pole(cfg.radius);
}

double effective_step(const RunConfig& cfg) {
  return cfg.step > 0 ? cfg.step : 1e-3 * cfg.radius;
}

void require_23(const RunConfig& cfg, const std::string& what) {
  if (cfg.p != 2 || cfg.q != 3)
    throw unsupported_exponents(what + " is implemented for (p, q) = (2, 3); got (" +
                                std::to_string(cfg.p) + ", " + std::to_string(cfg.q) + ")");
}

// Uniform sample of a chart pentagon: polar point of the parameter hexagon
// (area-weighted radius, pulled marginally inside) lifted through a random
// sign chart.
Vec4 random_surface_position(const LinkSurface& s, std::mt19937& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double theta = 2.0 * M_PI * U(rng);
    const double rho = 0.999 * hexagon_boundary_radius(s.radius, theta) * std::sqrt(U(rng));
    const double u = rho * std::cos(theta), v = rho * std::sin(theta);
    if (!hexagon_contains(s.radius, u, v)) continue;
    const int sx = U(rng) < 0.5 ? -1 : 1;
    const int sy = U(rng) < 0.5 ? -1 : 1;
    return chart_phi(s.radius, sx, sy, u, v);
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

// ---------------------------------------------------------------------
// umbilics: census with certification, slope and index table, JSON report.
// ---------------------------------------------------------------------

int cmd_umbilics(const RunConfig& cfg) {
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  UmbilicSearchOptions opts;
  opts.threads = cfg.threads;
  if (cfg.quick) opts.sweep_step_frac = 1.0 / 20;  // 10x coarser certification sweep
  const std::vector<UmbilicReport> umb = find_umbilics(s, opts);

  std::cout << "radius: " << format_g17(cfg.radius) << "\n";
  std::cout << "exponents: (" << cfg.p << ", " << cfg.q << ")\n";
  std::cout << "umbilics: " << umb.size() << "\n";
  double index_sum = 0;
  for (size_t i = 0; i < umb.size(); ++i) {
    const UmbilicReport& r = umb[i];
    index_sum += r.index;
    std::cout << "umbilic " << i << ": signs (" << (r.sx > 0 ? "+" : "-") << ", "
              << (r.sy > 0 ? "+" : "-") << ")  position " << fmt_vec4(r.position) << "\n";
    std::cout << "  type " << r.type << "  index " << format_g17(r.index) << "  slopes:";
    for (double p : r.slopes) std::cout << " " << format_g17(p);
    std::cout << "\n";
  }
  std::cout << "index sum: " << format_g17(index_sum) << "\n";

  const std::string path = cfg.out + "_umbilics.json";
  save_umbilics_json(path, cfg.radius, umb);
  std::cout << "wrote: " << path << "\n";

  if (std::abs(index_sum + 2.0) > 1e-9) {
    std::cerr << "certification failure: umbilic indices sum to "
              << format_g17(index_sum) << ", expected -2\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------
// slopes: separatrix slope cubic at each umbilic, from the Monge-form jets.
// ---------------------------------------------------------------------

int cmd_slopes(const RunConfig& cfg) {
  require_23(cfg, "the slope cubic");
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  static constexpr int kSigns[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  const double c = cfg.radius / std::sqrt(2.0);

  std::cout << "radius: " << format_g17(cfg.radius) << "\n";
  for (const auto& sgn : kSigns) {
    const MongeJet jet = monge_jet_at_umbilic(s, sgn[0], sgn[1]);
    const std::vector<double> slopes = separatrix_slopes(jet);
    const Vec4 pos(sgn[0] * c, sgn[1] * c, 0, 0);
    std::cout << "umbilic (" << (sgn[0] > 0 ? "+" : "-") << ", " << (sgn[1] > 0 ? "+" : "-")
              << ") at " << fmt_vec4(pos) << "  slopes:";
    for (double p : slopes) std::cout << " " << format_g17(p);
    std::cout << "\n";
  }
  std::cout << "expected: -sqrt(3), 0, sqrt(3) = " << format_g17(-std::sqrt(3.0)) << ", 0, "
            << format_g17(std::sqrt(3.0)) << "\n";
  return 0;
}

// ---------------------------------------------------------------------
// trace: both principal foliations from each seed, closure census, export.
// ---------------------------------------------------------------------

int cmd_trace(const RunConfig& cfg, const std::vector<std::string>& seed_args) {
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  const StereoMap st = StereoMap::make(s, pole_of(cfg));
  TraceOptions topts;
  topts.step = cfg.step;

  std::vector<SurfacePoint> seeds;
  if (seed_args.empty()) {
    require_23(cfg, "seeding on the e2 edge lift");
    seeds = seeds_on_e2(s, cfg.seeds);
    std::cout << "seeds: " << seeds.size() << " (e2 edge lift)\n";
  } else {
    for (const std::string& arg : seed_args) {
      const Vec4 x = parse_vec4(arg);
      const double residual = std::max(std::abs(s.F.value(x)), std::abs(s.G.value(x)));
      if (residual > s.eps_surface()) {
        const SurfacePoint sp = project_to_surface(s, x);
        std::cout << "note: seed " << fmt_vec4(x) << " is off-surface (residual "
                  << format_g17(residual) << "); projected to " << fmt_vec4(sp.position)
                  << " (moved " << format_g17((sp.position - x).norm()) << ")\n";
        seeds.push_back(sp);
      } else {
        seeds.push_back(surface_frame_at(s, x));
      }
    }
    std::cout << "seeds: " << seeds.size() << " (explicit)\n";
  }
  std::cout << "step: " << format_g17(effective_step(cfg)) << "\n";

  std::vector<Trace> traces;
  traces.reserve(2 * seeds.size());
  for (Foliation fol : {Foliation::Max, Foliation::Min}) {
    int closed = 0;
    if (seed_args.empty()) {
      std::vector<Trace> batch = foliation_atlas(s, static_cast<int>(seeds.size()), fol, topts);
      for (Trace& t : batch) {
        closed += t.closed ? 1 : 0;
        traces.push_back(std::move(t));
      }
    } else {
      for (const SurfacePoint& seed : seeds) {
        Trace t = trace_curvature_line(s, seed, fol, topts);
        closed += t.closed ? 1 : 0;
        traces.push_back(std::move(t));
      }
    }
    std::cout << "closed: " << closed << "/" << seeds.size() << " ("
              << (fol == Foliation::Max ? "max" : "min") << " foliation)\n";
  }

  const std::string csv_path = cfg.out + "_traces.csv";
  save_traces_csv(csv_path, traces, st);
  std::cout << "wrote: " << csv_path << "\n";

  if (cfg.format == "ply" || cfg.format == "obj") {
    const std::vector<std::vector<Vec3>> polys = project_traces(st, traces);
    std::vector<bool> closed_flags;
    closed_flags.reserve(traces.size());
    for (const Trace& t : traces) closed_flags.push_back(t.closed);
    const std::string path = cfg.out + "_traces." + cfg.format;
    if (cfg.format == "ply")
      save_ply(path, nullptr, &polys, &closed_flags);
    else
      save_obj(path, nullptr, &polys, &closed_flags);
    std::cout << "wrote: " << path << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------
// separatrices: explicit branches + the induced cell decomposition.
// ---------------------------------------------------------------------

int cmd_separatrices(const RunConfig& cfg) {
  if (cfg.format == "csv")
    throw invalid_parameter("separatrices: csv export is not supported; use json, ply, or obj");
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  const SeparatrixSet set = separatrix_set(s);
  const CWComplex cw = build_cw_complex(s, cfg.quick ? 9 : 33);

  std::cout << "radius: " << format_g17(cfg.radius) << "\n";
  std::cout << "branches: " << set.branches.size() << " (3 families x 4 charts), parameter bound "
            << format_g17(set.t_max) << "\n";
  std::cout << "cells: " << cw.counts[0] << " vertices, " << cw.counts[1] << " edges, "
            << cw.counts[2] << " faces\n";
  std::cout << "chi = " << cw.euler() << "\n";

  UmbilicSearchOptions opts;
  opts.run_sweep = false;  // census only; the sweep belongs to `umbilics`
  opts.threads = cfg.threads;
  const std::vector<UmbilicReport> umb = find_umbilics(s, opts);
  const std::string json_path = cfg.out + "_separatrices.json";
  save_umbilics_json(json_path, cfg.radius, umb, &cw);
  std::cout << "wrote: " << json_path << "\n";

  if (cfg.format == "ply" || cfg.format == "obj") {
    const StereoMap st = StereoMap::make(s, pole_of(cfg));
    std::vector<std::vector<Vec3>> polys;
    std::vector<bool> closed_flags;
    for (const CWCell& cell : cw.cells) {
      if (cell.dim != 1) continue;
      std::vector<Vec3> poly;
      poly.reserve(cell.polyline.size());
      for (const Vec4& x : cell.polyline) poly.push_back(st.project(x));
      polys.push_back(std::move(poly));
      closed_flags.push_back(false);
    }
    const std::string path = cfg.out + "_separatrices." + cfg.format;
    if (cfg.format == "ply")
      save_ply(path, nullptr, &polys, &closed_flags);
    else
      save_obj(path, nullptr, &polys, &closed_flags);
    std::cout << "wrote: " << path << " (" << polys.size() << " edge polylines)\n";
  }

  const bool ok = cw.counts[0] == 16 && cw.counts[1] == 30 && cw.counts[2] == 12 &&
                  cw.euler() == -2;
  if (!ok) {
    std::cerr << "certification failure: cell counts " << cw.counts[0] << "/" << cw.counts[1]
              << "/" << cw.counts[2] << ", chi = " << cw.euler() << "\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------
// mesh: watertight chart mesh, topology report, export.
// ---------------------------------------------------------------------

int cmd_mesh(const RunConfig& cfg) {
  if (cfg.format == "csv")
    throw invalid_parameter("mesh: csv export is not supported; use ply, obj, or json");
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  const StereoMap st = StereoMap::make(s, pole_of(cfg));
  const SurfaceMesh mesh = mesh_double_torus(s, st, cfg.mesh_rings);
  const MeshTopologyReport top = mesh_topology(mesh);

  std::cout << "radius: " << format_g17(cfg.radius) << "\n";
  std::cout << "pole: " << fmt_vec4(st.pole()) << "\n";
  std::cout << "rings: " << mesh.rings << "\n";
  std::cout << "vertices: " << top.vertex_count << "  edges: " << top.edge_count
            << "  faces: " << top.face_count << "\n";
  std::cout << "euler: " << top.euler << "  closed: " << (top.closed ? "yes" : "no")
            << "  oriented: " << (top.oriented ? "yes" : "no") << "\n";

  if (cfg.format == "json") {
    std::ostringstream os;
    os << "{\n"
       << "  \"rings\": " << mesh.rings << ",\n"
       << "  \"vertices\": " << top.vertex_count << ",\n"
       << "  \"edges\": " << top.edge_count << ",\n"
       << "  \"faces\": " << top.face_count << ",\n"
       << "  \"euler\": " << top.euler << ",\n"
       << "  \"closed\": " << (top.closed ? "true" : "false") << ",\n"
       << "  \"oriented\": " << (top.oriented ? "true" : "false") << ",\n"
       << "  \"boundary_edges\": " << top.boundary_edges << ",\n"
       << "  \"nonmanifold_edges\": " << top.nonmanifold_edges << "\n"
       << "}\n";
    const std::string path = cfg.out + "_mesh.json";
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io_failure("cannot open for writing: " + path);
    f << os.str();
    if (!f) throw io_failure("write failed: " + path);
    std::cout << "wrote: " << path << "\n";
  } else {
    const std::string path = cfg.out + "_mesh." + cfg.format;
    if (cfg.format == "ply")
      save_ply(path, &mesh, nullptr, nullptr);
    else
      save_obj(path, &mesh, nullptr, nullptr);
    std::cout << "wrote: " << path << "\n";
  }

  if (!(top.closed && top.oriented && top.euler == -2)) {
    std::cerr << "certification failure: mesh topology (closed " << top.closed << ", oriented "
              << top.oriented << ", euler " << top.euler << ")\n";
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------
// verify: the full invariant battery with a machine-readable summary.
// Human progress goes to stderr; the JSON summary (deterministic for a
// fixed config) goes to stdout. Exit 0 iff every check passes.
// ---------------------------------------------------------------------

struct CheckOutcome {
  bool pass = false;
  std::string detail;
};

int cmd_verify(const RunConfig& cfg) {
  require_23(cfg, "the verification battery");
  const LinkSurface s = make_double_torus(cfg.p, cfg.q, cfg.radius);
  const int scale = cfg.quick ? 10 : 1;
  const double r = cfg.radius;

  int euler_cw = 0;

  const auto gradient_check = [&]() -> CheckOutcome {
    std::mt19937 rng(8811);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const double box = std::max(1.0, r);
    const double h = 1e-5 * box;
    const int n = std::max(2, 200 / scale);
    double worst_g = 0, worst_h = 0;
    for (int i = 0; i < n; ++i) {
      Vec4 x;
      for (int k = 0; k < 4; ++k) x[k] = box * U(rng);
      for (const ScalarField4* f : {&s.F, &s.G}) {
        const Vec4 g = f->gradient(x);
        const Mat4 H = f->hessian(x);
        for (int k = 0; k < 4; ++k) {
          Vec4 e = Vec4::Zero();
          e[k] = h;
          const double fd = (f->value(x + e) - f->value(x - e)) / (2 * h);
          worst_g = std::max(worst_g, std::abs(fd - g[k]) / std::max(1.0, g.norm()));
          const Vec4 gfd = (f->gradient(x + e) - f->gradient(x - e)) / (2 * h);
          worst_h = std::max(worst_h, (gfd - H.col(k)).norm() / std::max(1.0, H.norm()));
        }
      }
    }
    const bool ok = worst_g <= 1e-6 && worst_h <= 1e-6;
    return {ok, "max relative FD deviation over " + std::to_string(n) +
                    " points: gradient " + format_g17(worst_g) + ", hessian " +
                    format_g17(worst_h)};
  };

  const auto omega_cross = [&]() -> CheckOutcome {
    std::mt19937 rng(2718);
    const int n = std::max(10, 1000 / scale);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
      const Vec4 x = random_surface_position(s, rng);
      const Mat4 a = omega_at(s, x).m;
      const Mat4 c = omega_closed_form_23(x);
      const double denom = std::max(c.cwiseAbs().maxCoeff(), 1e-300);
      worst = std::max(worst, (a - c).cwiseAbs().maxCoeff() / denom);
    }
    return {worst <= 1e-9, "max relative deviation of the assembled form from the closed form: " +
                               format_g17(worst) + " over " + std::to_string(n) + " points"};
  };

  const auto theta_reduction = [&]() -> CheckOutcome {
    if (std::abs(cfg.theta_perturb) > 1e9)
      throw invalid_parameter("theta_perturb out of range");
    // quantized to millionths so the perturbation stays an exact rational
    const Rat perturb(std::llround(cfg.theta_perturb * 1e6), 1000000);
    const RestrictedOmegas ro = derive_restricted_omegas();
    const ThetaSystem ts = make_theta_system(perturb);
    std::string msg;
    const bool ok = check_theta_reduction(ro, ts, &msg);
    return {ok, ok ? "reduced system matches the restriction pipeline exactly" : msg};
  };

  const auto root_exclusion = [&]() -> CheckOutcome {
    const RootCertificate cert = certify_no_interior_umbilics();
    bool ok = cert.interior_excluded && cert.roots.size() == 3;
    // the two rational-free root values the certificate must reproduce
    const double sigma = 1289.0 - 216.0 * std::sqrt(35.0);
    const double z2 = (67.0 - std::cbrt(std::pow(13.0, 5) / sigma) - std::cbrt(13.0 * sigma)) / 240.0;
    bool saw_z1 = false, saw_z2 = false;
    std::string roots_txt;
    for (const CertifiedRoot& rt : cert.roots) {
      ok = ok && !rt.admissible;
      if (std::abs(rt.z - 0.05) <= 1e-12 && std::abs(rt.w - 0.15) <= 1e-12) saw_z1 = true;
      if (std::abs(rt.z - z2) <= 1e-12) saw_z2 = true;
      roots_txt += " z=" + format_g17(rt.z) + " (" + (rt.exclusion.empty() ? "admissible" : rt.exclusion) + ")";
    }
    ok = ok && saw_z1 && saw_z2;
    return {ok, "univariate generator has " + std::to_string(cert.roots.size()) +
                    " real roots, all excluded:" + roots_txt};
  };

  const auto separatrix_residuals = [&]() -> CheckOutcome {
    const SeparatrixSet set = separatrix_set(s);
    const int n = std::max(10, 1000 / scale);
    double worst_surf = 0, worst_quad = 0;
    for (const SeparatrixBranch& b : set.branches) {
      for (int i = 0; i < n; ++i) {
        const double t = b.t_max * (2.0 * (i + 0.5) / n - 1.0);
        const Vec4 x = b.at(t);
        worst_surf = std::max(worst_surf,
                              std::max(std::abs(s.F.value(x)), std::abs(s.G.value(x))));
        const SurfacePoint sp = surface_frame_at(s, x);
        const Vec4 vel = b.velocity(t);
        const FrameQuadratic q = omega_in_frame(omega_at(s, sp.position), sp.t1, sp.t2);
        const double l1 = vel.dot(sp.t1), l2 = vel.dot(sp.t2);
        const double denom = q.scale() * (l1 * l1 + l2 * l2);
        if (denom > 0) worst_quad = std::max(worst_quad, std::abs(q.eval(l1, l2)) / denom);
      }
    }
    const bool ok = worst_surf <= 1e-12 * std::max(1.0, r * r) && worst_quad <= 1e-10;
    return {ok, "12 branches, " + std::to_string(n) + " parameters each: surface residual " +
                    format_g17(worst_surf) + ", line-field quadratic residual " +
                    format_g17(worst_quad)};
  };

  const auto cw_counts = [&]() -> CheckOutcome {
    const CWComplex cw = build_cw_complex(s, cfg.quick ? 9 : 33);
    euler_cw = cw.euler();
    bool ok = cw.counts[0] == 16 && cw.counts[1] == 30 && cw.counts[2] == 12 && cw.euler() == -2;
    std::vector<int> edge_use(cw.cells.size(), 0);
    for (const CWCell& c : cw.cells)
      if (c.dim == 2)
        for (int b : c.boundary) ++edge_use[static_cast<size_t>(b)];
    for (const CWCell& c : cw.cells) {
      if (c.dim == 1) ok = ok && edge_use[static_cast<size_t>(c.id)] == 2 && c.boundary.size() == 2;
    }
    return {ok, "cells " + std::to_string(cw.counts[0]) + "/" + std::to_string(cw.counts[1]) +
                    "/" + std::to_string(cw.counts[2]) + ", chi = " + std::to_string(cw.euler()) +
                    ", every edge borders exactly two faces"};
  };

  const auto stereo_transfer = [&]() -> CheckOutcome {
    const StereoMap st = StereoMap::make(s, pole_of(cfg));
    std::mt19937 rng(3141);
    const int n = std::max(5, 500 / scale);
    double worst_rt = 0, worst_conf = 0, worst_norm = 0;
    for (int i = 0; i < n; ++i) {
      const Vec4 x = random_surface_position(s, rng);
      worst_rt = std::max(worst_rt, (st.unproject(st.project(x)) - x).norm());
      const SurfacePoint sp = surface_frame_at(s, x);
      const Vec3 d1 = st.differential(x, sp.t1);
      const Vec3 d2 = st.differential(x, sp.t2);
      worst_conf = std::max(worst_conf, std::abs(d1.dot(d2)) / (d1.norm() * d2.norm()));
      worst_conf = std::max(worst_conf, std::abs(d1.norm() / d2.norm() - 1.0));
      const Vec3 nimg = st.differential(x, nu_orthogonal_to_mu(sp));
      worst_norm = std::max(worst_norm, std::abs(nimg.dot(d1)) / (nimg.norm() * d1.norm()));
      worst_norm = std::max(worst_norm, std::abs(nimg.dot(d2)) / (nimg.norm() * d2.norm()));
    }
    const int rings = cfg.quick ? 8 : 16;
    const MeshTopologyReport top = mesh_topology(mesh_double_torus(s, st, rings));
    const bool ok = worst_rt <= 1e-12 * std::max(1.0, r) && worst_conf <= 1e-8 &&
                    worst_norm <= 1e-8 && top.closed && top.oriented && top.euler == -2;
    return {ok, "round trip " + format_g17(worst_rt) + ", conformality defect " +
                    format_g17(worst_conf) + ", normal transfer defect " + format_g17(worst_norm) +
                    " over " + std::to_string(n) + " points; welded mesh (rings " +
                    std::to_string(rings) + ") chi = " + std::to_string(top.euler)};
  };

  const std::vector<std::pair<std::string, std::function<CheckOutcome()>>> checks = {
      {"gradient-check", gradient_check},
      {"omega-cross-validation", omega_cross},
      {"theta-reduction", theta_reduction},
      {"groebner-root-exclusion", root_exclusion},
      {"separatrix-residuals", separatrix_residuals},
      {"cw-counts", cw_counts},
      {"stereographic-transfer", stereo_transfer},
  };

  std::vector<std::pair<std::string, CheckOutcome>> results;
  int passed = 0;
  for (const auto& [name, fn] : checks) {
    const auto t0 = Clock::now();
    CheckOutcome oc;
    try {
      oc = fn();
    } catch (const std::exception& e) {
      oc.pass = false;
      oc.detail = std::string("exception: ") + e.what();
    }
    passed += oc.pass ? 1 : 0;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds_since(t0));
    std::cerr << (oc.pass ? "[ ok ] " : "[FAIL] ") << name << ": " << oc.detail << " (" << timing
              << ")\n";
    results.emplace_back(name, std::move(oc));
  }

  std::cerr << "chi = " << euler_cw << "\n";
  const bool all_pass = passed == static_cast<int>(checks.size());
  std::cerr << "verify: " << (all_pass ? "PASS" : "FAIL") << " (" << passed << "/"
            << checks.size() << ")";
  if (!all_pass) {
    std::cerr << " --";
    for (const auto& [name, oc] : results)
      if (!oc.pass) std::cerr << " " << name;
  }
  std::cerr << "\n";

  // machine-readable summary; deterministic for a fixed config
  std::ostringstream os;
  os << "{\n";
  os << "  \"radius\": " << format_g17(cfg.radius) << ",\n";
  os << "  \"exponents\": [" << cfg.p << ", " << cfg.q << "],\n";
  os << "  \"quick\": " << (cfg.quick ? "true" : "false") << ",\n";
  os << "  \"theta_perturb\": " << format_g17(cfg.theta_perturb) << ",\n";
  os << "  \"checks\": [\n";
  for (size_t i = 0; i < results.size(); ++i) {
    os << "    {\"name\": \"" << results[i].first << "\", \"pass\": "
       << (results[i].second.pass ? "true" : "false") << ", \"detail\": \""
       << json_escape(results[i].second.detail) << "\"}" << (i + 1 < results.size() ? "," : "")
       << "\n";
  }
  os << "  ],\n";
  os << "  \"euler\": " << euler_cw << ",\n";
  os << "  \"pass\": " << (all_pass ? "true" : "false") << "\n";
  os << "}\n";
  std::cout << os.str();

  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nu-principal curvature foliations of the double-torus algebraic link"};
  app.fallthrough();
  app.require_subcommand(1);

  // config file first (lowest precedence), then flags on top
  RunConfig cfg;
  std::string config_path;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc)
      config_path = argv[i + 1];
    else if (a.rfind("--config=", 0) == 0)
      config_path = a.substr(9);
  }
  if (!config_path.empty()) {
    try {
      cfg = load_config(config_path);
    } catch (const error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }

  std::string config_dummy, pole_str;
  app.add_option("--config", config_dummy, "config file (flat key = value; flags override)");
  app.add_option("--radius", cfg.radius, "sphere radius r");
  app.add_option("--p", cfg.p, "first exponent");
  app.add_option("--q", cfg.q, "second exponent");
  app.add_option("--step", cfg.step, "integrator step (<= 0 derives 1e-3 * r)");
  app.add_option("--seeds", cfg.seeds, "seed count per foliation");
  CLI::Option* pole_opt =
      app.add_option("--pole", pole_str, "projection pole x,y,u,v (default 0,0,r,0)");
  app.add_option("--format", cfg.format, "output format: json | csv | ply | obj");
  app.add_option("--out", cfg.out, "output path prefix");
  app.add_flag("--quick,!--no-quick", cfg.quick, "10x smaller sample sizes");
  app.add_option("--threads", cfg.threads, "worker cap (0 = hardware; env CURVATURA_THREADS also caps)");
  app.add_option("--theta-perturb", cfg.theta_perturb,
                 "corrupt the reduced-system constant term (negative control)");

  CLI::App* sub_umbilics = app.add_subcommand("umbilics", "umbilic census with certification");
  CLI::App* sub_slopes = app.add_subcommand("slopes", "separatrix slopes at each umbilic");
  CLI::App* sub_trace = app.add_subcommand("trace", "trace both principal foliations from seeds");
  std::vector<std::string> seed_args;
  sub_trace->add_option("--seed", seed_args, "explicit seed x,y,u,v (repeatable; default: e2 edge lift)");
  CLI::App* sub_separatrices =
      app.add_subcommand("separatrices", "explicit separatrix branches and the cell decomposition");
  CLI::App* sub_mesh = app.add_subcommand("mesh", "watertight chart mesh with topology report");
  sub_mesh->add_option("--rings", cfg.mesh_rings, "rings per chart (>= 8)");
  CLI::App* sub_verify = app.add_subcommand("verify", "run the full invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (pole_opt->count() > 0) {
      const Vec4 p = parse_vec4(pole_str);
      cfg.pole = std::array<double, 4>{p[0], p[1], p[2], p[3]};
    }
    validate_config(cfg);
    if (app.got_subcommand(sub_umbilics)) return cmd_umbilics(cfg);
    if (app.got_subcommand(sub_slopes)) return cmd_slopes(cfg);
    if (app.got_subcommand(sub_trace)) return cmd_trace(cfg, seed_args);
    if (app.got_subcommand(sub_separatrices)) return cmd_separatrices(cfg);
    if (app.got_subcommand(sub_mesh)) return cmd_mesh(cfg);
    if (app.got_subcommand(sub_verify)) return cmd_verify(cfg);
  } catch (const unsupported_exponents& e) {
    std::cerr << "error: unsupported-exponents: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;  // unreachable with require_subcommand(1)
}
