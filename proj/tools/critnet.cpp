// Command-line front end: generate, relax, verify, density, cuts, rects, info.
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error,
// 3 numeric failure (non-convergence, collapse, rejected samples).

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "critnet/checks.hpp"
#include "critnet/criticality.hpp"
#include "critnet/currents.hpp"
#include "critnet/density.hpp"
#include "critnet/generators.hpp"
#include "critnet/io.hpp"
#include "critnet/net.hpp"

namespace {

using namespace critnet;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

Vector parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::string token;
  std::istringstream ss(text);
  while (std::getline(ss, token, ',')) {
    try {
      vals.push_back(std::stod(token));
    } catch (const std::exception&) {
      throw ValidationError("cannot parse '" + token + "' as a number");
    }
  }
  if (vals.empty()) throw ValidationError("empty vector argument");
  Vector v(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) v[i] = vals[i];
  return v;
}

Vector parse_direction(const std::string& text, int dim) {
  Vector v = parse_vector(text);
  if (v.size() != dim)
    throw ValidationError("direction has dimension " + std::to_string(v.size()) +
                          ", net has k = " + std::to_string(dim));
  const double n = v.norm();
  if (n < 1e-12) throw ValidationError("direction must be nonzero");
  return v / n;
}

void print_net_summary(const Net& net, const std::map<std::string, double>& meta) {
  int interior_edges = 0;
  for (const auto& e : net.edges())
    if (net.is_interior_edge(e[0], e[1])) ++interior_edges;
  std::cout << "dimension " << net.dimension() << "\n"
            << "interior vertices " << net.interior_count() << "\n"
            << "leaves " << net.leaf_count() << "\n"
            << "edges " << net.edge_count() << " (interior " << interior_edges << ")\n"
            << "interior length " << format_double(net.total_interior_length()) << "\n";
  for (const auto& [key, value] : meta)
    std::cout << "meta " << key << " " << format_double(value) << "\n";
}

struct VerifyArgs {
  std::string input;
  std::string checks;
  std::string csv_path, json_path, per_direction_path;
  std::uint64_t seed = 0;
  int directions = 20;
  int domains = 5;
  int vectors = 10;
  double tol = 0.0;  // 0 keeps the per-check defaults
  std::string center;
  bool perturb = false;
};

int run_verify(const VerifyArgs& args) {
  const Net net = read_net_file(args.input);
  CheckOptions options;
  options.seed = args.seed;
  options.directions = args.directions;
  options.domains = args.domains;
  options.vectors = args.vectors;
  options.perturb_directions = args.perturb;
  if (args.tol > 0.0) {
    options.tol_identity = args.tol;
    options.tol_balance = args.tol;
    options.tol_unit_sum = args.tol;
  }
  if (!args.center.empty()) options.center = parse_vector(args.center);

  CsvHeader header{{"input", args.input},
                   {"seed", std::to_string(args.seed)},
                   {"directions", std::to_string(args.directions)},
                   {"domains", std::to_string(args.domains)},
                   {"vectors", std::to_string(args.vectors)}};

  SuiteReport suite;
  if (args.checks.empty()) {
    suite = run_suite(net, options);
  } else {
    std::istringstream ss(args.checks);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (!check_exists(id)) throw ValidationError("unknown check '" + id + "'");
      suite.reports.push_back(run_check(net, id, options));
    }
    for (const auto& rep : suite.reports) {
      if (rep.status == CheckStatus::Pass) ++suite.passed;
      if (rep.status == CheckStatus::Fail) ++suite.failed;
      if (rep.status == CheckStatus::Skipped) ++suite.skipped;
    }
    suite.all_applicable_pass = suite.failed == 0;
  }

  for (const auto& rep : suite.reports) {
    std::cout << "[" << check_status_name(rep.status) << "] " << rep.id;
    if (rep.status != CheckStatus::Skipped)
      std::cout << " residual=" << format_double(rep.residual)
                << " tol=" << format_double(rep.tolerance);
    if (!rep.detail.empty()) std::cout << " (" << rep.detail << ")";
    std::cout << "\n";
  }
  std::cout << "passed " << suite.passed << ", failed " << suite.failed << ", skipped "
            << suite.skipped << "\n";

  if (!args.csv_path.empty()) write_text_file(args.csv_path, suite_csv(suite, header));
  if (!args.json_path.empty()) write_text_file(args.json_path, suite_json(suite, header));

  if (!args.per_direction_path.empty()) {
    // Per-direction breakdown for the direction-driven checks.
    std::ostringstream os;
    for (const auto& [k, v] : header) os << "# " << k << "=" << v << "\n";
    os << "check,index,direction,measured,bound,margin\n";
    auto want = [&](const std::string& id) {
      return args.checks.empty() || args.checks.find(id) != std::string::npos;
    };
    const double L = net.total_interior_length();
    double nu_int = 0.0;
    for (int v : net.interior()) nu_int += net.degree(v);
    auto dir_string = [&](const Vector& v) {
      std::string s;
      for (int i = 0; i < v.size(); ++i)
        s += (i ? ";" : "") + format_double(v[i]);
      return s;
    };
    if (want("cin_bound")) {
      Rng rng(args.seed + 1009);
      for (int t = 0; t < args.directions; ++t) {
        const Vector v = rng.unit_vector(net.dimension());
        const double cin = current_profile(net, v).c_in;
        const double bound = 0.5 * net.leaf_count();
        os << "cin_bound," << t << "," << dir_string(v) << "," << format_double(cin)
           << "," << format_double(bound) << "," << format_double(bound - cin) << "\n";
      }
    }
    if (want("cut_lemma")) {
      Rng rng(args.seed + 1201);
      for (int t = 0; t < args.directions; ++t) {
        const Vector v = rng.unit_vector(net.dimension());
        const CutScan scan = cut_scan(net, v);
        const double worst = std::max(
            {scan.max_interior_jump, scan.max_flux_mismatch, scan.max_over_cin});
        os << "cut_lemma," << t << "," << dir_string(v) << "," << format_double(worst)
           << ",0," << format_double(-worst) << "\n";
      }
    }
    if (want("isoperimetric")) {
      Rng rng(args.seed + 1401);
      for (int t = 0; t < args.directions; ++t) {
        const auto basis = rng.orthonormal_basis(net.dimension());
        double sum_sq = 0.0;
        for (const auto& v : basis) {
          double lo = std::numeric_limits<double>::infinity(), hi = -lo;
          for (int x : net.interior()) {
            const double p = net.position(x).dot(v);
            lo = std::min(lo, p);
            hi = std::max(hi, p);
          }
          const double spread = net.interior().empty() ? 0.0 : hi - lo;
          sum_sq += spread * spread;
        }
        const double bound = std::sqrt(sum_sq) * net.leaf_count();
        os << "isoperimetric," << t << "," << dir_string(basis[0]) << ","
           << format_double(2.0 * L) << "," << format_double(bound) << ","
           << format_double(bound - 2.0 * L) << "\n";
      }
    }
    if (want("combinatorial")) {
      Rng rng(args.seed + 1601);
      for (int t = 0; t < args.directions; ++t) {
        const auto basis = rng.orthonormal_basis(net.dimension());
        double sum_sq = 0.0;
        bool ok = true;
        for (const auto& v : basis) {
          try {
            const int d = args.perturb
                              ? longest_oriented_path_perturbed(net, v, args.seed).length
                              : longest_oriented_path(net, v).length;
            sum_sq += static_cast<double>(d) * d;
          } catch (const GeometryError&) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          os << "combinatorial," << t << "," << dir_string(basis[0])
             << ",nan,nan,nan\n";
          continue;
        }
        const double bound =
            2.0 * net.leaf_count() + std::sqrt(sum_sq) * net.leaf_count();
        os << "combinatorial," << t << "," << dir_string(basis[0]) << ","
           << format_double(nu_int) << "," << format_double(bound) << ","
           << format_double(bound - nu_int) << "\n";
      }
    }
    write_text_file(args.per_direction_path, os.str());
  }

  return suite.all_applicable_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"critical net construction, relaxation and certification"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "construct a canonical net");
  std::string gen_family, gen_name = "CROSS", gen_out;
  int gen_d = 2, gen_n = 1, gen_rows = 1, gen_cols = 1, gen_k = 0, gen_count = 3;
  double gen_radius = 4.0;
  std::uint64_t gen_seed = 0;
  std::vector<std::string> gen_lines;
  gen->add_option("family", gen_family, "grid | hex | lines | exadiam | fixture")
      ->required();
  gen->add_option("--d", gen_d, "grid dimension");
  gen->add_option("--n", gen_n, "grid side / exadiam side");
  gen->add_option("--rows", gen_rows, "hexagon rows");
  gen->add_option("--cols", gen_cols, "hexagon columns");
  gen->add_option("--k", gen_k, "number of added lines (exadiam)");
  gen->add_option("--name", gen_name, "fixture name (CROSS, FERMAT3, STEINER4)");
  gen->add_option("--line", gen_lines,
                  "explicit line px,py,dx,dy (repeatable; lines family)");
  gen->add_option("--count", gen_count, "number of seeded lines (lines family)");
  gen->add_option("--radius", gen_radius, "disk radius (lines family)");
  gen->add_option("--seed", gen_seed, "seed for the seeded line family");
  gen->add_option("-o,--output", gen_out, "net file to write")->required();

  // relax
  auto* rlx = app.add_subcommand("relax", "drive a net to a critical embedding");
  std::string rlx_in, rlx_out, rlx_trace;
  SolverParams rlx_params;
  rlx->add_option("input", rlx_in, "net file")->required();
  rlx->add_option("-o,--output", rlx_out, "relaxed net file")->required();
  rlx->add_option("--trace", rlx_trace, "convergence trace CSV");
  rlx->add_option("--tol", rlx_params.tolerance, "residual tolerance");
  rlx->add_option("--max-sweeps", rlx_params.max_sweeps, "sweep budget");
  rlx->add_option("--eta", rlx_params.damping, "damping factor in (0,1]");
  rlx->add_option("--collapse-tol", rlx_params.collapse_threshold,
                  "edge collapse threshold");
  rlx->add_option("--seed", rlx_params.seed, "jitter seed");

  // verify
  auto* ver = app.add_subcommand("verify", "run the certification checks");
  VerifyArgs vargs;
  ver->add_option("input", vargs.input, "net file")->required();
  ver->add_option("--checks", vargs.checks, "comma-separated check ids (default: all)");
  ver->add_option("--directions", vargs.directions, "seeded directions per check");
  ver->add_option("--domains", vargs.domains, "seeded domains");
  ver->add_option("--vectors", vargs.vectors, "seeded probe vectors");
  ver->add_option("--seed", vargs.seed, "seed");
  ver->add_option("--tol", vargs.tol, "override the identity/balance tolerances");
  ver->add_option("--center", vargs.center, "center x,y[,z...]");
  ver->add_flag("--perturb", vargs.perturb, "retry perpendicular directions");
  ver->add_option("--csv", vargs.csv_path, "summary CSV path");
  ver->add_option("--json", vargs.json_path, "report JSON path");
  ver->add_option("--per-direction", vargs.per_direction_path,
                  "per-direction CSV for the direction-driven checks");

  // density
  auto* den = app.add_subcommand("density", "length density profile");
  std::string den_in, den_out, den_center;
  double den_rmin = 0.05, den_rmax = 20.0;
  int den_samples = 200;
  den->add_option("input", den_in, "net file")->required();
  den->add_option("-o,--output", den_out, "profile CSV")->required();
  den->add_option("--center", den_center, "center x,y[,z...] (default net center)");
  den->add_option("--rmin", den_rmin, "smallest radius");
  den->add_option("--rmax", den_rmax, "largest radius");
  den->add_option("--samples", den_samples, "sample count");

  // cuts
  auto* cut = app.add_subcommand("cuts", "hyperplane cut currents");
  std::string cut_in, cut_out, cut_dir;
  cut->add_option("input", cut_in, "net file")->required();
  cut->add_option("--dir", cut_dir, "direction c1,c2[,...] (auto-normalized)")
      ->required();
  cut->add_option("-o,--output", cut_out, "slab CSV")->required();

  // rects
  auto* rct = app.add_subcommand("rects", "rectangle packing of a planar current");
  std::string rct_in, rct_csv, rct_svg, rct_dir;
  rct->add_option("input", rct_in, "net file")->required();
  rct->add_option("--dir", rct_dir, "direction c1,c2 (auto-normalized)")->required();
  rct->add_option("-o,--output", rct_csv, "rectangle CSV");
  rct->add_option("--svg", rct_svg, "SVG figure path");

  // info
  auto* inf = app.add_subcommand("info", "print net statistics");
  std::string inf_in;
  inf->add_option("input", inf_in, "net file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      GeneratedNet g;
      if (gen_family == "grid") {
        g = grid_net(gen_d, gen_n);
      } else if (gen_family == "hex") {
        g = hexagon_net(gen_rows, gen_cols);
      } else if (gen_family == "exadiam") {
        g = exadiam_net(gen_n, gen_k);
      } else if (gen_family == "fixture") {
        g = fixture(gen_name);
      } else if (gen_family == "lines") {
        if (!gen_lines.empty()) {
          std::vector<Line> lines;
          for (const auto& spec : gen_lines) {
            const Vector v = parse_vector(spec);
            if (v.size() != 4)
              throw ValidationError("--line expects px,py,dx,dy");
            Line l;
            l.point = v.head(2);
            l.direction = v.tail(2);
            lines.push_back(std::move(l));
          }
          g = line_arrangement_net(lines, gen_radius);
        } else {
          g = line_arrangement_net(gen_count, gen_radius, gen_seed);
        }
      } else {
        throw ValidationError("unknown family '" + gen_family + "'");
      }
      write_net_file(g.net, gen_out);
      print_net_summary(g.net, g.meta);
      return kExitOk;
    }

    if (rlx->parsed()) {
      const Net net = read_net_file(rlx_in);
      const RelaxResult res = relax(net, rlx_params);
      if (!rlx_trace.empty())
        write_text_file(rlx_trace,
                        trace_csv(res.trace, {{"input", rlx_in},
                                              {"seed", std::to_string(rlx_params.seed)},
                                              {"tol", format_double(rlx_params.tolerance)}}));
      write_net_file(res.net, rlx_out);
      std::cout << "sweeps " << res.sweeps << ", final residual "
                << format_double(res.final_residual) << "\n";
      if (res.status == RelaxStatus::EdgeCollapse) {
        std::cerr << "edge collapse between '" << res.collapsed_a << "' and '"
                  << res.collapsed_b
                  << "'; simplify the topology (merge the pair) and retry\n";
        return kExitNumeric;
      }
      if (res.status == RelaxStatus::MaxSweeps) {
        std::cerr << "did not reach the residual tolerance within "
                  << rlx_params.max_sweeps << " sweeps\n";
        return kExitNumeric;
      }
      return kExitOk;
    }

    if (ver->parsed()) return run_verify(vargs);

    if (den->parsed()) {
      const Net net = read_net_file(den_in);
      const ExtendedNet ext = extend_leaves(net);
      const Vector center =
          den_center.empty() ? net.center() : parse_vector(den_center);
      if (center.size() != net.dimension())
        throw ValidationError("center dimension mismatch");
      const DensityProfile prof =
          density_profile(ext, center, den_rmin, den_rmax, den_samples);
      CsvHeader header{{"input", den_in},
                       {"rmin", format_double(den_rmin)},
                       {"rmax", format_double(den_rmax)},
                       {"samples", std::to_string(den_samples)},
                       {"generalized_degree", std::to_string(prof.generalized_degree)},
                       {"leaf_count", std::to_string(prof.leaf_count)}};
      write_text_file(den_out, density_csv(prof, header));
      std::cout << "valid samples " << prof.valid_count << "/" << den_samples << "\n";
      return kExitOk;
    }

    if (cut->parsed()) {
      const Net net = read_net_file(cut_in);
      const Vector v = parse_direction(cut_dir, net.dimension());
      const CutScan scan = cut_scan(net, v);
      std::string dir_text;
      for (int i = 0; i < v.size(); ++i)
        dir_text += (i ? ";" : "") + format_double(v[i]);
      write_text_file(cut_out, cut_scan_csv(scan, {{"input", cut_in},
                                                   {"dir", dir_text},
                                                   {"c_in", format_double(scan.c_in)}}));
      std::cout << "slabs " << scan.slabs.size() << ", c_in "
                << format_double(scan.c_in) << "\n";
      return kExitOk;
    }

    if (rct->parsed()) {
      const Net net = read_net_file(rct_in);
      const Vector v = parse_direction(rct_dir, net.dimension());
      const RectanglePacking pack = rectangle_packing(net, v);
      std::string dir_text;
      for (int i = 0; i < v.size(); ++i)
        dir_text += (i ? ";" : "") + format_double(v[i]);
      if (!rct_csv.empty())
        write_text_file(rct_csv,
                        rects_csv(net, pack, {{"input", rct_in}, {"dir", dir_text}}));
      if (!rct_svg.empty()) write_text_file(rct_svg, rects_svg(net, pack));
      std::cout << "rectangles " << pack.rects.size() << ", area "
                << format_double(pack.area_sum) << " <= bound "
                << format_double(pack.bound) << "\n";
      return kExitOk;
    }

    if (inf->parsed()) {
      const Net net = read_net_file(inf_in);
      print_net_summary(net, {});
      ResidualReport rep;
      const bool crit = is_critical(net, 1e-8, &rep);
      std::cout << "max residual " << format_double(rep.max_norm) << " (critical at 1e-8: "
                << (crit ? "yes" : "no") << ")\n";
      if (!net.interior().empty()) {
        const EnclosingBall ball = outer_ball(net);
        std::cout << "outer radius " << format_double(ball.radius) << "\n";
      }
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GeometryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitUsage;
}
