// Command-line front end: figure data, point sampling and the validation run.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "diracbeams/diracbeams.hpp"

namespace db = diracbeams;

namespace {

struct Common {
  double hbar = 1.0, mass = 1.0, c = 1.0;
  std::string out;
};

// Output goes to --out or stdout, and only once the whole text exists.
int emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot write '" << out << "'\n";
    return 1;
  }
  f << text;
  return f ? 0 : 1;
}

std::optional<db::GridRange> grid_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return db::parse_grid(s);
}

void add_units(CLI::App* cmd, Common& c) {
  cmd->add_option("--hbar", c.hbar, "Reduced Planck constant")->check(CLI::PositiveNumber);
  cmd->add_option("--mass", c.mass, "Particle mass")->check(CLI::PositiveNumber);
  cmd->add_option("--c", c.c, "Speed of light")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Dirac wave packets: figure data, sampling and validation"};
  app.set_version_flag("--version", std::string(db::kToolVersion));
  app.require_subcommand(1);

  Common common;
  db::FigureOptions fig;
  std::string grid_rho, grid_z, grid_e;

  auto* fig1 = app.add_subcommand("fig1", "Normalized modulus of the exponential packet vs rho");
  auto* fig2 = app.add_subcommand("fig2", "Normalized spectral functions");
  auto* fig3 = app.add_subcommand("fig3", "Vorticity of the Dirac velocity field");
  for (auto* cmd : {fig1, fig2, fig3}) {
    add_units(cmd, common);
    cmd->add_option("--l", fig.l, "Azimuthal index");
    cmd->add_option("--pz", fig.p_z, "Longitudinal momentum [mc]");
  }
  for (auto* cmd : {fig1, fig2}) cmd->add_option("--b-list", fig.b_list, "Width parameters")->delimiter(',');
  fig1->add_option("--grid-rho", grid_rho, "rho grid min:max:count [lambda-bar]");
  fig1->add_option("--t", fig.t, "Time [lambda-bar/c]");
  fig1->add_option("--modulus", fig.modulus, "scalar or bispinor")->check(CLI::IsMember({"scalar", "bispinor"}));
  fig2->add_option("--grid-e", grid_e, "Energy grid min:max:count [mc^2]");
  fig3->add_option("--b", fig.b, "Width parameter")->check(CLI::PositiveNumber);
  fig3->add_option("--grid-rho", grid_rho, "rho grid (x and y grid for the transverse slice)");
  fig3->add_option("--grid-z", grid_z, "z grid min:max:count [lambda-bar]");
  fig3->add_option("--t", fig.t, "Time [lambda-bar/c]");
  fig3->add_option("--slice", fig.slice, "meridional or transverse")->check(CLI::IsMember({"meridional", "transverse"}));
  fig3->add_option("--fd-step", fig.fd_step, "Curl step [lambda-bar]")->check(CLI::PositiveNumber);
  fig.p_z = 0.0;

  auto* sample = app.add_subcommand("sample", "Evaluate a packet at the points of a file");
  add_units(sample, common);
  std::string kind = "exponential", spin = "up", points_path;
  int l = 10, n = 0;
  double b = 40.0, pz = 0.75, w = 1.0;
  std::optional<double> energy;
  sample->add_option("--kind", kind, "bessel, lg_nonrel, lg_rel or exponential")
      ->check(CLI::IsMember({"bessel", "lg_nonrel", "lg_rel", "exponential"}));
  sample->add_option("--spin", spin, "up or down")->check(CLI::IsMember({"up", "down"}));
  sample->add_option("--l", l, "Azimuthal index");
  sample->add_option("--b", b, "Width parameter")->check(CLI::PositiveNumber);
  sample->add_option("--pz", pz, "Longitudinal momentum [mc]");
  sample->add_option("--energy", energy, "Energy [mc^2] (bessel, lg_rel)");
  sample->add_option("--n", n, "Radial index (LG)")->check(CLI::NonNegativeNumber);
  sample->add_option("--w", w, "Width (LG) [lambda-bar]")->check(CLI::PositiveNumber);
  sample->add_option("--points", points_path, "Points file with rho,phi,z,t columns")->required();

  auto* validate = app.add_subcommand("validate", "Run the validation suite");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool no_timing = false;
  validate->add_option("--config", config_path, "JSON config");
  validate->add_option("--seed", seed, "RNG seed");
  validate->add_flag("--no-timing", no_timing, "Omit runtimes from the report");
  validate->add_option("--out", common.out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      db::ValidationConfig cfg;
      if (!config_path.empty()) cfg = db::load_validation_config(config_path);
      if (seed) cfg.seed = *seed;
      if (no_timing) cfg.record_runtime = false;
      const auto report = db::run_full_validation(cfg);
      const int rc = emit(db::serialize_report(report, db::kToolVersion), common.out);
      if (rc != 0) return rc;
      return report.overall_pass() ? 0 : 1;
    }

    const db::PhysicalConstants k(common.hbar, common.mass, common.c);
    if (*sample) {
      db::SampleOptions o;
      o.k = k;
      o.kind = db::scalar_kind_from_string(kind);
      o.spin = db::spin_from_string(spin);
      o.params.l = l;
      o.params.b = b;
      o.params.p_z = pz * k.mass() * k.c();
      o.params.n = n;
      o.params.w = w * k.lambda_bar();
      if (energy) o.params.energy = *energy * k.rest_energy();
      if ((o.kind == db::ScalarKind::bessel || o.kind == db::ScalarKind::lg_rel) && !energy) {
        std::cerr << "error: --energy is required for " << kind << "\n";
        return 2;
      }
      const auto points = db::read_dataset_file(points_path);
      return emit(db::dataset_to_string(db::sample_dataset(o, points)), common.out);
    }

    fig.k = k;
    fig.grid_rho = grid_opt(grid_rho);
    fig.grid_z = grid_opt(grid_z);
    fig.grid_e = grid_opt(grid_e);
    if (*fig1) return emit(db::dataset_to_string(db::figure1_dataset(fig)), common.out);
    if (*fig2) return emit(db::dataset_to_string(db::figure2_dataset(fig)), common.out);
    if (*fig3) {
      if (fig3->count("--pz") == 0) fig.p_z = 0.75;
      return emit(db::dataset_to_string(db::figure3_dataset(fig)), common.out);
    }
  } catch (const db::FormatError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
