// Command-line front end for the verification suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cornu/commands.hpp"
#include "cornu/config.hpp"
#include "cornu/dormand_prince.hpp"
#include "cornu/quadrature.hpp"

namespace {

using namespace cornu;
using namespace cornu::app;

void print_table(std::ostream& out, const CommandResult& res) {
  out << std::left << std::setw(24) << "record" << std::right << std::setw(24) << "computed" << std::setw(24)
      << "reference" << std::setw(12) << "abs_err" << std::setw(12) << "tolerance" << "  status\n";
  for (const auto& r : res.records) {
    std::ostringstream computed, reference;
    computed << std::setprecision(15) << r.computed.real();
    reference << std::setprecision(15) << r.reference.real();
    if (r.complex_valued) {
      computed << std::showpos << r.computed.imag() << 'i';
      reference << std::showpos << r.reference.imag() << 'i';
    }
    out << std::left << std::setw(24) << r.name << std::right << std::setw(24) << computed.str() << std::setw(24)
        << reference.str() << std::setw(12) << std::setprecision(3) << std::scientific << r.abs_err << std::setw(12)
        << r.tolerance << std::defaultfloat << "  " << (r.pass() ? "PASS" : "FAIL") << '\n';
  }
  if (res.flagged) out << "flagged: design ill-conditioned\n";
}

void write_outputs(const std::filesystem::path& dir, const std::string& format, const CommandResult& res,
                   const AppConfig& cfg, const ManifestInfo& info) {
  std::filesystem::create_directories(dir);
  const std::string stem = res.command;
  if (format == "csv") {
    std::ofstream(dir / (stem + ".csv")) << records_csv(res.records);
  } else {
    std::ofstream(dir / (stem + ".json")) << make_manifest(res, cfg, info).dump(2) << '\n';
  }
  if (!res.sweep.empty()) {
    std::ofstream csv(dir / (stem + "_sweep.csv"));
    csv << std::setprecision(17);
    for (std::size_t i = 0; i < res.sweep_header.size(); ++i) csv << (i ? "," : "") << res.sweep_header[i];
    csv << '\n';
    for (const auto& row : res.sweep) {
      for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
      csv << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of ordered Fresnel-type integrals"};
  app.set_version_flag("--version", version_string());
  std::string config_path;
  std::string out_dir;
  std::string format = "json";
  unsigned threads = 1;
  bool dump_defaults = false;
  app.add_option("--config", config_path, "flat key = value config file");
  app.add_option("--out", out_dir, "directory for manifests and CSV output");
  app.add_option("--format", format, "record output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", threads, "worker threads for independent work")->check(CLI::PositiveNumber);
  app.add_flag("--dump-defaults", dump_defaults, "print every config key with its value and exit");
  app.require_subcommand(0, 1);

  auto* basics = app.add_subcommand("verify-basics", "Fresnel, Dirichlet and block-structure checks");

  auto* integrals = app.add_subcommand("integrals", "I_n (and J_n) by direct or omega route");
  std::vector<int> orders{1, 2};
  std::string route = "direct";
  bool with_j = false;
  integrals->add_option("--n", orders, "orders to compute")->delimiter(',');
  integrals->add_option("--route", route)->check(CLI::IsMember({"direct", "omega"}));
  integrals->add_flag("--j", with_j, "also compute J_n (direct route)");

  auto* evolve = app.add_subcommand("evolve", "z(inf), |a(inf)| and Hopf consistency from the ODEs");
  std::optional<double> lambda, a_param, r_param;
  std::optional<std::string> trajectory;
  std::string columns = "so3";
  evolve->add_option("--lambda", lambda, "coupling 2/(a R^2)");
  evolve->add_option("--a", a_param, "curvature rate");
  evolve->add_option("--R", r_param, "sphere radius");
  evolve->add_option("--export-trajectory", trajectory, "write a trajectory CSV to this path");
  evolve->add_option("--columns", columns, "trajectory columns")->check(CLI::IsMember({"so3", "spinor"}));

  auto* extract = app.add_subcommand("extract", "Taylor coefficients of z(inf; lambda)");
  bool synthetic = false;
  extract->add_flag("--synthetic", synthetic, "fit the closed-form curve instead of ODE samples");

  auto* zeta = app.add_subcommand("zeta2", "zeta(2) from the reduced double integral");
  std::string method = "both";
  zeta->add_option("--method", method)->check(CLI::IsMember({"raw", "parametric", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  ManifestInfo info;
  for (int i = 0; i < argc; ++i) info.command_line += (i ? " " : "") + std::string(argv[i]);
  info.threads = threads;

  try {
    AppConfig cfg = config_path.empty() ? AppConfig{} : load_config(config_path);
    cfg.validate();
    if (dump_defaults) {
      dump_config(std::cout, cfg);
      return kExitPass;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kExitUsage;
    }
    info.started_at = utc_timestamp();
    CommandResult res;
    if (basics->parsed()) {
      res = run_verify_basics(cfg);
    } else if (integrals->parsed()) {
      res = run_integrals(orders, route == "direct" ? IntegralRoute::direct : IntegralRoute::omega, with_j, cfg);
    } else if (evolve->parsed()) {
      res = run_evolve({lambda, a_param, r_param, trajectory, columns == "spinor"}, cfg);
    } else if (extract->parsed()) {
      res = run_extract(cfg, synthetic, threads);
    } else {
      const auto choice = method == "raw" ? Zeta2Choice::raw
                          : method == "parametric" ? Zeta2Choice::parametric
                                                   : Zeta2Choice::both;
      res = run_zeta2(choice, cfg);
    }
    info.finished_at = utc_timestamp();
    print_table(std::cout, res);
    if (!out_dir.empty()) write_outputs(out_dir, format, res, cfg, info);
    return res.exit_code();
  } catch (const quad::CostGateError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCostGate;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IntegrationError& e) {
    std::cerr << "error: " << e.what() << " (s = " << e.location() << ")\n";
    return kExitTolerance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
}
