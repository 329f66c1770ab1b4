#include "cli/config.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>

#include "pairlat/error.hpp"
#include "pairlat/parallel.hpp"

namespace pairlat::cli {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void RunConfig::validate() const {
  require(n >= 2, "--n must be >= 2");
  require(n <= 120, "--n above 120 exceeds the dense solver budget");
  require(finite(t1) && t1 != 0.0, "--t1 must be finite and nonzero");
  for (double v : t2) require(finite(v), "--t2 values must be finite");
  require(finite(eps1) && finite(eps2), "site energies must be finite");
  if (u) {
    require(finite(*u), "--u must be finite");
    require(n <= 40, "--u (finite-U oracle) is limited to --n <= 40");
  }
  for (double v : z) require(finite(v) && v != 0.0, "--z values must be finite and nonzero");
  require(finite(z_radius) && z_radius > 0.0, "--z-radius must be positive");
  require(z_points >= 1, "--z-points must be >= 1");
  require(cells >= 2, "--cells must be >= 2");
  require(2 * cells <= 512, "--cells above 256 exceeds the complex solver limit");
  require(finite(t2_min) && finite(t2_max) && t2_max >= t2_min, "--t2-min/--t2-max must be an ordered range");
  require(t2_steps >= 1, "--t2-steps must be >= 1");
  require(finite(emin) && finite(emax) && emax > emin, "--emin/--emax must be an ordered range");
  require(finite(sigma) && sigma > 0.0, "--sigma must be positive");
  require(finite(cluster_tol) && cluster_tol > 0.0, "--cluster-tol must be positive");
  require(finite(ipr_threshold) && ipr_threshold >= 0.0, "--ipr-threshold must be non-negative");
  require(finite(select_window) && select_window > 0.0, "--select-window must be positive");
  if (select_energy) require(finite(*select_energy), "--select-energy must be finite");
  require(!dump_state || select_energy.has_value() || command == "fig6", "--dump-state needs --select-energy");
  require(!(dump_state && u), "--dump-state needs the hard-core Hamiltonian");
  require(!(command == "fig6" && u), "fig6 needs the hard-core Hamiltonian");
  require(!n0.empty(), "--n0 needs at least one value");
  for (int v : n0) require(v >= 3, "--n0 values must be >= 3");
  require(window >= 10, "--window must be >= 10");
  require(!com.empty(), "--com needs at least one value");
  if (command == "fig6")
    for (int c : com) require(c >= 1 && c <= n - 1, "--com values must lie in 1..N-1");
  require(fit_sep_max >= 1 && slope_sep_max >= 2, "separation limits too small");
  require(finite(ssh_window) && ssh_window > 0.0, "--ssh-window must be positive");
  require(!out.empty(), "--out must be a directory");
  require(threads >= 1, "thread count must be >= 1");
  if (command == "parabolas") require(effective_t2(*this).size() >= 2, "parabolas needs at least two t2 values");
  if (command == "spectrum" || command == "fig6" || command == "stark")
    require(effective_t2(*this).size() == 1, command + " takes a single --t2 value");
}

std::vector<double> default_t2(const std::string& command) {
  if (command == "dos-map") return {0.0, 0.4, 0.8};
  if (command == "fig5") return {0.4, 0.8};
  if (command == "fig6" || command == "winding") return {0.8};
  if (command == "parabolas") return {0.02, 0.05, 0.08, 0.1};
  if (command == "fig2c") {
    std::vector<double> r;
    for (int i = 0; i < 40; ++i) r.push_back(0.05 * (i + 1));
    return r;
  }
  return {0.4};
}

std::vector<double> effective_t2(const RunConfig& cfg) {
  return cfg.t2.empty() ? default_t2(cfg.command) : cfg.t2;
}

ParseResult parse_command_line(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Two-particle hard-core lattice spectra and effective models", "pairlat"};
  app.set_config("--config", "", "TOML configuration file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  app.add_option("--n", cfg.n, "Lattice sites N")->capture_default_str();
  app.add_option("--t1", cfg.t1, "Hopping of particle 1 (energy unit)")->capture_default_str();
  app.add_option("--t2", cfg.t2, "Hopping of particle 2; list for sweeps")->delimiter(',');
  app.add_option("--eps1", cfg.eps1, "Site energy of particle 1")->capture_default_str();
  app.add_option("--eps2", cfg.eps2, "Site energy of particle 2")->capture_default_str();
  app.add_option("--u", cfg.u, "Use the finite-U Hamiltonian with this U");
  app.add_option("--z", cfg.z, "Real center-of-mass parameters z")->delimiter(',');
  app.add_flag("--z-phase", cfg.z_phase, "Sweep complex z = radius * exp(iK) instead of real z");
  app.add_option("--z-radius", cfg.z_radius, "|z| for --z-phase")->capture_default_str();
  app.add_option("--z-points", cfg.z_points, "K samples for --z-phase")->capture_default_str();
  app.add_option("--cells", cfg.cells, "SSH unit cells")->capture_default_str();
  app.add_option("--t2-min", cfg.t2_min, "Map grid: smallest t2")->capture_default_str();
  app.add_option("--t2-max", cfg.t2_max, "Map grid: largest t2")->capture_default_str();
  app.add_option("--t2-steps", cfg.t2_steps, "Map grid: number of t2 values")->capture_default_str();
  app.add_option("--emin", cfg.emin, "Map energy grid lower end")->capture_default_str();
  app.add_option("--emax", cfg.emax, "Map energy grid upper end")->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "DOS Gaussian width")->capture_default_str();
  app.add_option("--cluster-tol", cfg.cluster_tol, "Degeneracy cluster tolerance")->capture_default_str();
  app.add_option("--ipr-threshold", cfg.ipr_threshold, "IPR cut for the filtered DOS")->capture_default_str();
  app.add_option("--select-energy", cfg.select_energy, "Pick the most localized state near this energy");
  app.add_option("--select-window", cfg.select_window, "Half-width of the selection window")->capture_default_str();
  app.add_flag("--dump-state", cfg.dump_state, "Write the selected state's amplitudes");
  app.add_option("--n0", cfg.n0, "Stark column heights")->delimiter(',');
  app.add_option("--window", cfg.window, "Stark window half-width W")->capture_default_str();
  app.add_option("--com", cfg.com, "Center-of-mass labels for the relative cuts")->delimiter(',');
  app.add_option("--fit-sep-max", cfg.fit_sep_max, "Largest separation used by the z fit")->capture_default_str();
  app.add_option("--slope-sep-max", cfg.slope_sep_max, "Largest separation in the decay-slope comparison")
      ->capture_default_str();
  app.add_option("--ssh-window", cfg.ssh_window, "SSH eigenvalues this close to the bound state are compared")
      ->capture_default_str();
  app.add_option("--out", cfg.out, "Output directory")->capture_default_str();
  app.add_flag("--svg", cfg.svg, "Also render SVG plots from the CSV output");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"spectrum", "Full spectrum with IPR, metadata and an optional state dump"},
      {"dos-map", "Density of states over a t2 grid plus cross-sections"},
      {"fig2c", "Localization parameter map of the effective SSH chain"},
      {"fig4", "Inverse level spacing over a t2 grid"},
      {"fig5", "Energy versus IPR and the IPR-filtered DOS"},
      {"fig6", "Relative-motion cuts and center-of-mass fit of the bound state"},
      {"winding", "Winding numbers and skin ratios of the effective SSH chain"},
      {"stark", "Stark ladder target eigenvalues against the flat-band prediction"},
      {"parabolas", "Small-t2 parabola coefficients of the flat bands"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return {std::nullopt, code == 0 ? static_cast<int>(kOk) : static_cast<int>(kConfigError)};
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.threads = default_thread_count();
  return {cfg, kOk};
}

}  // namespace pairlat::cli
