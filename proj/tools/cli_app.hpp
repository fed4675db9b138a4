#pragma once

// Command-line front end. run() takes the arguments after the program name and
// returns the exit status: 0 success, 1 computational failure, 2 usage error.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "locuskit/locuskit.hpp"

namespace locuskit::cli {

namespace detail {

inline const CLI::Validator kOpenUnit = CLI::Validator(
    [](const std::string& s) -> std::string {
      double v = 0.0;
      try {
        v = std::stod(s);
      } catch (...) {
        return "not a number: " + s;
      }
      return (v > 0.0 && v < 1.0) ? "" : "value must lie in (0,1): " + s;
    },
    "in (0,1)", "OPEN_UNIT");

inline void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomically(path, text);
  }
}

inline double floor3(double v) { return std::floor(v * 1000.0) / 1000.0; }

/// "k,a" (two entries) or a coefficient prefix "1,-1,-1,-1,0" followed by an
/// implicit tail of +1.
inline TernarySeries parse_witness(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) parts.push_back(item);
  std::vector<int> values;
  for (const auto& p : parts) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(p, &used);
    } catch (...) {
      throw CLI::ValidationError("--witness", "expected integers, got '" + p + "'");
    }
    if (used != p.size()) throw CLI::ValidationError("--witness", "expected integers, got '" + p + "'");
    values.push_back(v);
  }
  if (values.size() == 2) {
    const int k = values[0], a = values[1];
    if (k < 1 || a < -1 || a > 1) throw CLI::ValidationError("--witness", "k,a needs k >= 1 and a in {-1,0,1}");
    std::vector<int> prefix(static_cast<std::size_t>(k) + 1, -1);
    prefix[0] = 1;
    prefix[k] = a;
    return TernarySeries(prefix, 1);
  }
  if (values.size() < 3) throw CLI::ValidationError("--witness", "give k,a or at least three coefficients");
  try {
    return TernarySeries(values, 1);
  } catch (const DomainError& e) {
    throw CLI::ValidationError("--witness", e.what());
  }
}

inline std::vector<double> sweep(double from, double to, double step, bool include_end) {
  if (!(step > 0.0)) throw CLI::ValidationError("--step", "step must be positive");
  if (from > to) throw CLI::ValidationError("--from", "--from exceeds --to");
  std::vector<double> g;
  const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long i = 0; i <= n; ++i) g.push_back(from + static_cast<double>(i) * step);
  if (include_end && to - g.back() > 1e-9) g.push_back(to);
  return g;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Connectedness locus toolkit: boundary tables, locus images, attractors, corner checks"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(34);

  auto* phi_cmd = app.add_subcommand("phi-table", "second-zero boundary table, CSV gamma,phi,k,a");
  double phi_from = 0.51, phi_to = 0.64, phi_step = 0.01;
  std::string phi_out;
  bool phi_round = false;
  phi_cmd->add_option("--from", phi_from)->check(detail::kOpenUnit)->capture_default_str();
  phi_cmd->add_option("--to", phi_to)->check(detail::kOpenUnit)->capture_default_str();
  phi_cmd->add_option("--step", phi_step)->check(CLI::PositiveNumber)->capture_default_str();
  phi_cmd->add_option("-o,--output", phi_out, "output file (default: standard output)");
  phi_cmd->add_flag("--round-down", phi_round, "round boundary values down to 3 decimals");

  auto* psi_cmd = app.add_subcommand("psi-table", "third-zero boundary table, CSV gamma,psi,k,l,a,b");
  double psi_from = 0.53, psi_to = 0.7278, psi_step = 0.02;
  std::string psi_out;
  bool psi_round = false;
  psi_cmd->add_option("--from", psi_from)->check(detail::kOpenUnit)->capture_default_str();
  psi_cmd->add_option("--to", psi_to, "last gamma; always emitted")->check(detail::kOpenUnit)->capture_default_str();
  psi_cmd->add_option("--step", psi_step)->check(CLI::PositiveNumber)->capture_default_str();
  psi_cmd->add_option("-o,--output", psi_out, "output file (default: standard output)");
  psi_cmd->add_flag("--round-down", psi_round, "round boundary values down to 3 decimals");

  auto* render_cmd = app.add_subcommand("locus-render", "PGM image of the parameter plane");
  GridSpec grid;
  std::string render_out, render_csv;
  render_cmd->add_option("--gmin", grid.gamma_min)->check(detail::kOpenUnit)->capture_default_str();
  render_cmd->add_option("--gmax", grid.gamma_max)->check(detail::kOpenUnit)->capture_default_str();
  render_cmd->add_option("--lmin", grid.lambda_min)->check(detail::kOpenUnit)->capture_default_str();
  render_cmd->add_option("--lmax", grid.lambda_max)->check(detail::kOpenUnit)->capture_default_str();
  render_cmd->add_option("--width", grid.width)->check(CLI::Range(1, 1 << 14))->capture_default_str();
  render_cmd->add_option("--height", grid.height)->check(CLI::Range(1, 1 << 14))->capture_default_str();
  render_cmd->add_option("--depth", grid.depth)->check(CLI::Range(1, 200))->capture_default_str();
  render_cmd->add_option("--frontier-limit", grid.limits.frontier_limit)->check(CLI::Range(1, 1 << 26))->capture_default_str();
  render_cmd->add_option("-o,--output", render_out, "PGM path")->required();
  render_cmd->add_option("--verdicts", render_csv, "also write per-pixel verdicts as CSV");

  auto* attr_cmd = app.add_subcommand("attractor", "attractor point cloud, CSV x,y");
  std::string form = "diagonal", attr_out, raster;
  double attr_gamma = 0.55, attr_lambda = 0.70, rot_a = 0.5, rot_b = 0.5;
  int attr_depth = 16;
  attr_cmd->add_option("--form", form)->check(CLI::IsMember({"diagonal", "rotation", "jordan"}))->capture_default_str();
  attr_cmd->add_option("--gamma", attr_gamma, "diagonal form")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
  attr_cmd->add_option("--lambda", attr_lambda, "diagonal and jordan forms")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
  attr_cmd->add_option("--a", rot_a, "rotation form, real part")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
  attr_cmd->add_option("--b", rot_b, "rotation form, imaginary part")->check(CLI::Range(-1.0, 1.0))->capture_default_str();
  attr_cmd->add_option("--depth", attr_depth)->check(CLI::Range(0, kMaxCloudDepth))->capture_default_str();
  attr_cmd->add_option("-o,--output", attr_out, "CSV path (default: standard output)");
  attr_cmd->add_option("--raster", raster, "also write a WxH PGM next to the CSV");

  auto* corner_cmd = app.add_subcommand("corner", "corner envelope and perturbation report");
  std::string witness, corner_out;
  int n_min = 30, n_max = 60;
  corner_cmd->add_option("--witness", witness, "k,a for 1-x-..-x^{k-1}+a x^k+x^{k+1}/(1-x), or a coefficient prefix with tail +1")
      ->required();
  corner_cmd->add_option("--n-min", n_min)->check(CLI::Range(1, 1000))->capture_default_str();
  corner_cmd->add_option("--n-max", n_max)->check(CLI::Range(1, 1000))->capture_default_str();
  corner_cmd->add_option("-o,--output", corner_out, "report CSV (default: standard output)");

  auto* check_cmd = app.add_subcommand("check", "membership verdict for one parameter pair");
  double chk_gamma = 0.0, chk_lambda = 0.0;
  int chk_depth = 64;
  SearchLimits chk_limits;
  check_cmd->add_option("--gamma", chk_gamma)->check(detail::kOpenUnit)->required();
  check_cmd->add_option("--lambda", chk_lambda)->check(detail::kOpenUnit)->required();
  check_cmd->add_option("--depth", chk_depth)->check(CLI::Range(1, 200))->capture_default_str();
  check_cmd->add_option("--frontier-limit", chk_limits.frontier_limit)->check(CLI::Range(1, 1 << 26))->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (*phi_cmd) {
      CsvWriter csv({"gamma", "phi", "k", "a"});
      for (double g : detail::sweep(phi_from, phi_to, phi_step, false)) {
        const auto r = phi(g);
        csv.row(g, phi_round ? detail::floor3(r.lambda) : r.lambda, r.k_used, r.witness.a());
      }
      detail::emit(phi_out, csv.str(), out);
    } else if (*psi_cmd) {
      CsvWriter csv({"gamma", "psi", "k", "l", "a", "b"});
      for (double g : detail::sweep(psi_from, psi_to, psi_step, true)) {
        const auto r = psi(g);
        csv.row(g, psi_round ? detail::floor3(r.lambda) : r.lambda, r.witness.k(), r.witness.l(), r.witness.a(),
                r.witness.b());
      }
      detail::emit(psi_out, csv.str(), out);
    } else if (*render_cmd) {
      const auto r = render(grid);
      write_pgm(render_out, r.image);
      if (!render_csv.empty()) write_file_atomically(render_csv, verdict_csv(grid, r));
    } else if (*attr_cmd) {
      const auto pair = form == "diagonal" ? AffinePair::diagonal(attr_gamma, attr_lambda)
                        : form == "jordan" ? AffinePair::jordan(attr_lambda)
                                           : AffinePair::rotation(rot_a, rot_b);
      const auto cloud = attractor_points(pair, attr_depth);
      detail::emit(attr_out, cloud_csv(cloud), out);
      if (!raster.empty()) {
        int w = 0, h = 0;
        char x = 0;
        std::istringstream rs(raster);
        if (!(rs >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1 || !rs.eof()) {
          throw CLI::ValidationError("--raster", "expected WxH, got '" + raster + "'");
        }
        if (attr_out.empty() || attr_out == "-") throw CLI::ValidationError("--raster", "needs -o for the PGM location");
        write_pgm(std::filesystem::path(attr_out).replace_extension(".pgm"), rasterize(cloud, w, h));
      }
    } else if (*corner_cmd) {
      if (n_min > n_max) throw CLI::ValidationError("--n-min", "--n-min exceeds --n-max");
      const auto env = corner_envelope(detail::parse_witness(witness));
      const auto report = corner_membership_check(env, n_min, n_max, standard_r_samples());
      err << "gamma0=" << format_number(env.gamma0) << " lambda0=" << format_number(env.lambda0)
          << " alpha=" << format_number(env.alpha) << " c1=" << format_number(env.c1)
          << " c2=" << format_number(env.c2)
          << (env.star_witness ? " witness=star-shaped" : " witness=uniqueness-assumed") << "\n";
      detail::emit(corner_out, report.csv(), out);
      if (!report.all_pass()) {
        err << "ratio outside [c1, c2] at " << report.failures() << "\n";
        return 1;
      }
    } else if (*check_cmd) {
      const auto v = certify_outside(chk_gamma, chk_lambda, chk_depth, chk_limits);
      out << to_string(v.kind) << " depth=" << v.depth << " surviving=" << v.surviving << "\n";
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace locuskit::cli
