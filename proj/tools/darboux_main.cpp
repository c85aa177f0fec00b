// Batch driver: builds curvature specs, runs the verification suites, and
// emits machine-readable JSON reports plus CSV field dumps.
//
// Subcommands:
//   curvature build   materialize K, certify smoothness per square, dump K
//   metric from-k     solve for g = dx^2 + G^2 dy^2 and check the round trip
//   verify identities divergence/chi/trace + integral identity suites
//   verify appendix   normal-component, flatness and development round trip
//   scan lemma2       boundary hessian scan + gradient smallness certificate
//   reduce            characteristic-coordinates pipeline at a point
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include <CLI11.hpp>

#include "darboux/curvature_build.hpp"
#include "darboux/embedding.hpp"
#include "darboux/identities.hpp"
#include "darboux/reduction.hpp"
#include "darboux/report.hpp"

namespace fs = std::filesystem;
using namespace darboux;

namespace {

struct CommonOpts {
  std::string out_dir = "out";
  std::string fixture;
  std::string spec_path;
  double h = 0.0;  // 0 = command default
  int quad_order = kDefaultQuadOrder;
  double tol = 0.0;  // 0 = per-check defaults
  int nmax = 8;
  std::string point = "0,0";
  unsigned long long seed = 20240801ULL;
};

Point parse_point(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ConfigError("--point expects \"x,y\"");
  try {
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw ConfigError("--point expects \"x,y\" with numeric entries");
  }
}

Rect parse_domain(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("--domain expects \"lo:hi\"");
  try {
    const double lo = std::stod(text.substr(0, colon));
    const double hi = std::stod(text.substr(colon + 1));
    if (!(hi > lo)) throw ConfigError("--domain: hi must exceed lo");
    return {lo, hi, lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("--domain expects \"lo:hi\" with numeric bounds");
  }
}

CurvatureSpec load_spec(const CommonOpts& opt) {
  if (!opt.spec_path.empty()) {
    std::ifstream in(opt.spec_path);
    if (!in) throw ConfigError("cannot open spec file: " + opt.spec_path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return CurvatureSpec::from_json(text);
  }
  if (opt.nmax < 1) throw ConfigError("--nmax must be >= 1");
  return CurvatureSpec::defaults(opt.nmax);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << text;
}

int finish(const RunReport& rep, const CommonOpts& opt) {
  fs::create_directories(opt.out_dir);
  write_text(fs::path(opt.out_dir) / "report.json", rep.dump());
  for (const auto& c : rep.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  value=" << c.value
              << " tolerance=" << c.tolerance << "\n";
  std::cout << (rep.pass() ? "PASS" : "FAIL") << ": " << rep.command << " (" << rep.checks.size()
            << " checks)\n";
  return rep.pass() ? 0 : 1;
}

double tol_or(const CommonOpts& opt, double fallback) {
  return opt.tol > 0.0 ? opt.tol : fallback;
}

Fixture fixture_or_throw(const CommonOpts& opt) {
  if (opt.fixture.empty()) throw ConfigError("--fixture is required");
  return make_fixture(opt.fixture);
}

std::vector<Point> grid_points(Rect r, int n) {
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      pts.push_back({r.x0 + r.width() * i / (n - 1), r.y0 + r.height() * j / (n - 1)});
  return pts;
}

double uniform_draw(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * ((rng() >> 11) * 0x1.0p-53);
}

int cmd_curvature_build(const CommonOpts& opt) {
  CurvatureSpec spec = load_spec(opt);
  RunReport rep;
  rep.command = "curvature build";
  rep.config = nlohmann::ordered_json::parse(spec.to_json());
  rep.config["out"] = opt.out_dir;

  rep.require("squares_disjoint_exact_1e4", squares_disjoint_exact(10000));
  for (int n = 1; n <= spec.family.n_max; ++n) {
    SmoothnessReport sr = smoothness_certificate(spec, n, 4);
    rep.require("smoothness_certificate_n" + std::to_string(n), sr.pass, sr.observed_at_order_k,
                sr.decay_bound);
    rep.require_below("boundary_value_n" + std::to_string(n), sr.max_boundary_value, 1e-300);
    const double center = k_eval(spec, {SquareFamily::center_x(n), 0.0});
    rep.require("k_positive_inside_n" + std::to_string(n), center > 0.0, center, 0.0);
  }
  rep.require("k_zero_outside", k_eval(spec, {-0.5, 0.0}) == 0.0 &&
                                    k_eval(spec, {0.3, 0.7}) == 0.0 &&
                                    k_eval(spec, {2.0, 0.0}) == 0.0);

  const double h = opt.h > 0.0 ? opt.h : 5e-3;
  Rect dump_rect{0.0, 1.3, -0.3, 0.3};
  Grid2D grid = Grid2D::covering(dump_rect, h);
  ScalarField K = curvature_spec_field(spec, Rect{-1.0, 2.0, -1.0, 1.0});
  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "k_field.csv", std::ios::binary);
  dump_csv(csv, K, grid);
  return finish(rep, opt);
}

int cmd_metric_from_k(const CommonOpts& opt, double constant, bool has_constant,
                      const std::string& domain_text) {
  Rect dom = parse_domain(domain_text.empty() ? "-0.4:0.4" : domain_text);
  const double step = opt.h > 0.0 ? opt.h : 1e-3;

  RunReport rep;
  rep.command = "metric from-k";
  rep.config["domain"] = {dom.x0, dom.x1};
  rep.config["step"] = step;

  ScalarField K;
  Rect kdom{dom.x0 - 0.1, dom.x1 + 0.1, dom.y0 - 0.1, dom.y1 + 0.1};
  if (has_constant) {
    rep.config["constant"] = constant;
    K = ScalarField::constant(kdom, constant);
  } else {
    CurvatureSpec spec = load_spec(opt);
    rep.config["spec"] = nlohmann::ordered_json::parse(spec.to_json());
    K = curvature_spec_field(spec, kdom);
  }

  CurvedMetric cm = metric_from_curvature(K, dom, step);
  rep.require_below("curvature_roundtrip", curvature_roundtrip_error(cm, K, 21),
                    tol_or(opt, 1e-6));
  if (has_constant && constant == 1.0) {
    double worst = 0.0;
    for (int i = 0; i <= 32; ++i) {
      const double x = dom.x0 + dom.width() * i / 32.0;
      worst = std::max(worst, std::abs(cm.G(x, 0.0) - std::cos(x)));
    }
    rep.require_below("G_matches_cos", worst, 1e-8);
  }
  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "G.csv", std::ios::binary);
  Grid2D dump_grid = Grid2D::inside(cm.grid.rect(), std::max(step, 5e-3));
  dump_csv(csv, cm.G, dump_grid);
  return finish(rep, opt);
}

int cmd_verify_identities(const CommonOpts& opt) {
  Fixture fx = fixture_or_throw(opt);
  RunReport rep;
  rep.command = "verify identities";
  rep.config["fixture"] = fx.name;
  rep.config["seed"] = opt.seed;
  rep.config["quad_order"] = opt.quad_order;

  const double tol_div = tol_or(opt, 1e-8);
  const double tol_chi = tol_or(opt, 1e-10);
  const double tol_int = tol_or(opt, 1e-8);
  rep.config["tolerances"] = {{"divergence", tol_div}, {"chi_trace", tol_chi},
                              {"integral", tol_int}};

  Rect inner = fx.domain.inset(0.02 * fx.domain.width());
  auto pts = grid_points(inner, 25);

  for (unsigned k = 0; k < 10; ++k) {
    ScalarField z = random_polynomial_field(fx.domain, opt.seed + k);
    double worst = 0.0;
    for (const Point& p : pts) {
      auto r = divergence_identity_residual(fx.metric, z, p);
      worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
    }
    rep.require_below("divergence_identity_z" + std::to_string(k), worst, tol_div);
  }

  double worst_chi = 0.0, worst_trace = 0.0;
  for (const Point& p : grid_points(inner, 15)) {
    auto chi = chi_identity_residual(fx.metric, p);
    auto tr = christoffel_trace_residual(fx.metric, p);
    worst_chi = std::max({worst_chi, std::abs(chi[0]), std::abs(chi[1])});
    worst_trace = std::max({worst_trace, std::abs(tr[0]), std::abs(tr[1])});
  }
  rep.require_below("chi_identity", worst_chi, tol_chi);
  rep.require_below("christoffel_trace_identity", worst_trace, tol_chi);

  std::mt19937_64 rng(opt.seed ^ 0x5bf03635ULL);
  const double half = 0.15 * std::min(fx.domain.width(), fx.domain.height());
  std::vector<std::string> identity_lines;
  for (int k = 0; k < 5; ++k) {
    Point c{uniform_draw(rng, inner.x0 + half, inner.x1 - half),
            uniform_draw(rng, inner.y0 + half, inner.y1 - half)};
    Rect sq = Rect::square(c, half);
    ScalarField z = random_polynomial_field(fx.domain, opt.seed + 100 + k);
    IdentityCheck pc = parts_identity_check(fx.metric, z, sq, tol_int, opt.quad_order);
    identity_lines.push_back(pc.to_json());
    rep.require_below("parts_identity_sq" + std::to_string(k), std::abs(pc.residual), tol_int);
    if (fx.z) {
      IdentityCheck fc =
          darboux_flux_check(fx.metric, *fx.z, fx.curvature, sq, tol_int, opt.quad_order);
      identity_lines.push_back(fc.to_json());
      rep.require_below("darboux_flux_identity_sq" + std::to_string(k), std::abs(fc.residual),
                        tol_int);
    }
  }
  fs::create_directories(opt.out_dir);
  {
    std::ofstream out(fs::path(opt.out_dir) / "identity_checks.json", std::ios::binary);
    out << "[\n";
    for (size_t i = 0; i < identity_lines.size(); ++i)
      out << "  " << identity_lines[i] << (i + 1 < identity_lines.size() ? ",\n" : "\n");
    out << "]\n";
  }
  return finish(rep, opt);
}

int cmd_verify_appendix(const CommonOpts& opt) {
  Fixture fx = fixture_or_throw(opt);
  if (!fx.embedding)
    throw ConfigError("fixture '" + fx.name + "' has no embedding; appendix checks need one");
  RunReport rep;
  rep.command = "verify appendix";
  rep.config["fixture"] = fx.name;

  double worst_nc = 0.0;
  for (const Point& p : grid_points(fx.domain.inset(1e-3), 9))
    worst_nc = std::max(worst_nc, std::abs(normal_component_sq(*fx.embedding, p).difference()));
  rep.require_below("normal_component_two_routes", worst_nc, tol_or(opt, 1e-10));

  rep.require_below("gauss_darboux_residual", max_darboux_residual(*fx.embedding, 15),
                    tol_or(opt, 1e-8));

  rep.require_below("flatness_of_g_minus_dz2", flatness_residual(fx.metric, *fx.z, 11),
                    tol_or(opt, 1e-6));

  Metric2 hm = metric_minus_dz2(fx.metric, *fx.z);
  FlatChart chart = develop_flat(hm, fx.domain.center());
  rep.require_below("development_path_dependence", chart.path_dependence, tol_or(opt, 1e-6));
  Embedding3 rebuilt{chart.z1, chart.z2, *fx.z};
  Metric2 gr = induced_metric(rebuilt);
  double worst_rt = 0.0;
  for (const Point& p : grid_points(fx.domain.inset(0.05 * fx.domain.width()), 5)) {
    SymMat2 a = fx.metric.values(p), b = gr.values(p);
    worst_rt = std::max(
        {worst_rt, std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a22 - b.a22)});
  }
  rep.require_below("development_round_trip_metric", worst_rt, tol_or(opt, 1e-4));

  Embedding3 norm = rigid_normalize(*fx.embedding, fx.domain.center());
  const double gx = norm.z3.derivative(fx.domain.center(), 1, 0);
  const double gy = norm.z3.derivative(fx.domain.center(), 0, 1);
  rep.require_below("rigid_normalize_gradient", std::hypot(gx, gy), 1e-12);
  Metric2 gnorm = induced_metric(norm);
  double worst_inv = 0.0;
  for (const Point& p : grid_points(fx.domain.inset(0.05 * fx.domain.width()), 5)) {
    SymMat2 a = fx.metric.values(p), b = gnorm.values(p);
    worst_inv = std::max(
        {worst_inv, std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a22 - b.a22)});
  }
  rep.require_below("rigid_normalize_metric_invariance", worst_inv, 1e-10);

  fs::create_directories(opt.out_dir);
  std::ofstream csv(fs::path(opt.out_dir) / "embedding.csv", std::ios::binary);
  csv << "x,y,z1,z2,z3\n";
  char buf[160];
  Grid2D dump = Grid2D::inside(fx.domain, fx.domain.width() / 16.0);
  for (int j = 0; j < dump.ny; ++j)
    for (int i = 0; i < dump.nx; ++i) {
      Point p{dump.x(i), dump.y(j)};
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p.x, p.y,
                    fx.embedding->z1.value(p), fx.embedding->z2.value(p),
                    fx.embedding->z3.value(p));
      csv << buf;
    }
  return finish(rep, opt);
}

int cmd_scan_lemma2(const CommonOpts& opt) {
  Fixture fx = fixture_or_throw(opt);
  if (!fx.z || !fx.embedding)
    throw ConfigError("fixture '" + fx.name + "' has no height field; scan needs one");
  RunReport rep;
  rep.command = "scan lemma2";
  rep.config["fixture"] = fx.name;
  rep.config["nmax"] = opt.nmax;

  Embedding3 norm = rigid_normalize(*fx.embedding, {0.0, 0.0});
  Metric2 gnorm = induced_metric(norm);

  int used = 0;
  for (int n = 1; n <= opt.nmax; ++n) {
    SquareFamily fam;
    Rect outer = fam.outer_square(n);
    if (!fx.domain.contains(outer)) continue;
    ++used;
    Rect sq = fam.inner_square(n);
    BoundaryScanResult scan = boundary_hessian_scan(fx.metric, *fx.z, sq);
    rep.require("boundary_scan_max_n" + std::to_string(n), scan.overall >= 0.0, scan.overall,
                0.0);
    const double smallness = gradient_smallness_min(gnorm, norm.z3, sq);
    rep.require_above("smallness_certificate_n" + std::to_string(n), smallness, 1.0);
  }
  if (used == 0)
    throw ConfigError("no family square fits inside fixture '" + fx.name +
                      "' for nmax=" + std::to_string(opt.nmax));
  return finish(rep, opt);
}

int cmd_reduce(const CommonOpts& opt) {
  Fixture fx = fixture_or_throw(opt);
  if (!fx.z) throw ConfigError("fixture '" + fx.name + "' has no height field; reduce needs one");
  Point p = parse_point(opt.point);
  const double h = opt.h > 0.0 ? opt.h : 5e-3;

  RunReport rep;
  rep.command = "reduce";
  rep.config["fixture"] = fx.name;
  rep.config["point"] = {p.x, p.y};
  rep.config["h"] = h;

  ChartOptions copt;
  copt.h = h;
  ReductionArtifacts art;
  ReductionReport r = reduce_to_linear(fx.metric, *fx.z, fx.curvature, p, copt, &art);
  ChartOptions copt2 = copt;
  copt2.h = 0.5 * h;
  ReductionReport r2 = reduce_to_linear(fx.metric, *fx.z, fx.curvature, p, copt2);
  const double convergence_order = std::log2(r.max_residual / r2.max_residual);

  rep.config["c"] = r.c;
  rep.config["b11_p"] = r.b11_p;
  rep.config["fbar_ratio"] = r.fbar_ratio;
  rep.config["max_eq3_residual"] = r.max_residual;
  rep.config["min_f"] = r.min_f;
  rep.config["f_at_p"] = r.f_at_p;
  rep.config["convergence_order"] = convergence_order;

  rep.require_below("fbar_ratio_minus_one", std::abs(r.fbar_ratio - 1.0), tol_or(opt, 1e-8));
  rep.require_below("characteristic_transport_residual", r.transport_residual_rel, tol_or(opt, 1e-8));
  rep.require_below("transformed_b12_relative", r.b12_rel, tol_or(opt, 1e-6));
  rep.require_below("transformed_b22_closed_form", r.b22_rel, tol_or(opt, 1e-6));
  rep.require_below("chart_round_trip", r.chart_roundtrip, tol_or(opt, 1e-10));
  rep.require_below("reduced_equation_residual", r.max_residual, tol_or(opt, 1e-4));
  rep.require_above("halving_factor", r.max_residual / r2.max_residual, 3.5);

  fs::create_directories(opt.out_dir);
  {
    std::ofstream csv(fs::path(opt.out_dir) / "s.csv", std::ios::binary);
    dump_csv(csv, art.chart.s_field, art.chart.xy_grid);
  }
  {
    std::ofstream csv(fs::path(opt.out_dir) / "u.csv", std::ios::binary);
    dump_csv(csv, art.u, art.chart.ts_grid);
  }
  {
    std::ofstream csv(fs::path(opt.out_dir) / "f.csv", std::ios::binary);
    dump_csv(csv, art.f, art.chart.ts_grid);
  }
  return finish(rep, opt);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Darboux equation verification workbench"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  CommonOpts opt;
  double constant = 0.0;
  std::string domain_text;

  auto add_common = [&opt](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");  // leave --h free for spacing
    cmd->add_option("--out", opt.out_dir, "output directory for report.json and CSV dumps");
    cmd->add_option("--h", opt.h, "grid spacing / ODE step (command-specific default)");
    cmd->add_option("--quad-order", opt.quad_order, "Gauss-Legendre nodes per cell");
    cmd->add_option("--tol", opt.tol, "override every check tolerance");
    cmd->add_option("--seed", opt.seed, "seed for the randomized suites");
    cmd->add_option("--nmax", opt.nmax, "number of materialized family squares");
    cmd->add_option("--spec", opt.spec_path, "curvature spec JSON file");
    cmd->add_option("--fixture", opt.fixture, "fixture name");
    cmd->add_option("--point", opt.point, "basepoint \"x,y\"");
  };

  CLI::App* curvature = app.add_subcommand("curvature", "curvature construction commands");
  CLI::App* curvature_build = curvature->add_subcommand("build", "materialize and certify K");
  add_common(curvature_build);

  CLI::App* metric = app.add_subcommand("metric", "metric construction commands");
  CLI::App* from_k = metric->add_subcommand("from-k", "metric with prescribed curvature");
  add_common(from_k);
  CLI::Option* const_opt = from_k->add_option("--constant", constant, "constant curvature value");
  from_k->add_option("--domain", domain_text, "square domain \"lo:hi\"");

  CLI::App* verify = app.add_subcommand("verify", "verification suites");
  CLI::App* identities = verify->add_subcommand("identities", "tensor/integral identity suites");
  add_common(identities);
  CLI::App* appendix = verify->add_subcommand("appendix", "embedding equivalence suite");
  add_common(appendix);

  CLI::App* scan = app.add_subcommand("scan", "boundary scans");
  CLI::App* lemma2 = scan->add_subcommand("lemma2", "boundary hessian scan + smallness");
  add_common(lemma2);

  CLI::App* reduce = app.add_subcommand("reduce", "characteristic reduction pipeline");
  add_common(reduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (curvature_build->parsed()) return cmd_curvature_build(opt);
    if (from_k->parsed())
      return cmd_metric_from_k(opt, constant, const_opt->count() > 0, domain_text);
    if (identities->parsed()) return cmd_verify_identities(opt);
    if (appendix->parsed()) return cmd_verify_appendix(opt);
    if (lemma2->parsed()) return cmd_scan_lemma2(opt);
    if (reduce->parsed()) return cmd_reduce(opt);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
