#include "cli/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <system_error>

#include "pairlat/error.hpp"
#include "pairlat/io.hpp"
#include "pairlat/lattice.hpp"
#include "pairlat/parallel.hpp"
#include "pairlat/ssh.hpp"
#include "pairlat/wannier_stark.hpp"

namespace pairlat::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ModelParams model(const RunConfig& cfg, double t2) {
  ModelParams p;
  p.n_sites = cfg.n;
  p.t1 = cfg.t1;
  p.t2 = t2;
  p.eps1 = cfg.eps1;
  p.eps2 = cfg.eps2;
  if (cfg.u) p.interaction = FiniteU{*cfg.u};
  return p;
}

SparseHamiltonian hamiltonian(const ModelParams& p) {
  return p.hard_core() ? build_hardcore_hamiltonian(p) : build_finite_u_hamiltonian(p);
}

std::string tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return v;
}

EnergyGrid map_grid(const RunConfig& cfg) {
  EnergyGrid g;
  g.emin = cfg.emin;
  g.emax = cfg.emax;
  g.points = static_cast<std::size_t>(std::llround((cfg.emax - cfg.emin) / cfg.sigma)) + 1;
  g.emax = g.emin + cfg.sigma * static_cast<double>(g.points - 1);
  return g;
}

ordered_json params_json(const ModelParams& p) {
  ordered_json j;
  j["n_sites"] = p.n_sites;
  j["t1"] = p.t1;
  j["t2"] = p.t2;
  j["eps1"] = p.eps1;
  j["eps2"] = p.eps2;
  if (const auto* f = std::get_if<FiniteU>(&p.interaction)) {
    j["interaction"] = "finite_u";
    j["u"] = f->u;
  } else {
    j["interaction"] = "hard_core";
  }
  return j;
}

std::vector<Complex> z_values(const RunConfig& cfg, std::size_t default_per_side) {
  if (cfg.z_phase) {
    std::vector<Complex> zs;
    for (double k : linspace(-std::numbers::pi, std::numbers::pi, cfg.z_points)) zs.push_back(std::polar(cfg.z_radius, k));
    return zs;
  }
  if (cfg.z.empty()) return default_z_grid(default_per_side);
  std::vector<Complex> zs;
  for (double v : cfg.z) zs.emplace_back(v, 0.0);
  return zs;
}

class Outputs {
 public:
  explicit Outputs(const RunConfig& cfg) : cfg_(cfg) {}

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path p = cfg_.out / name;
    io::atomic_write(p, content);
    files_.push_back(p);
    return p;
  }
  void plot(const fs::path& csv, const std::string& xcol, const std::vector<std::string>& ycols,
            const std::string& title, bool markers) {
    if (!cfg_.svg) return;
    const io::CsvData data = io::read_csv(csv);
    io::PlotSpec spec;
    spec.title = title;
    spec.xlabel = xcol;
    spec.ylabel = ycols.size() == 1 ? ycols.front() : "";
    for (const auto& y : ycols) spec.series.push_back({y, data.column(xcol), data.column(y), markers});
    auto svg = csv;
    svg.replace_extension(".svg");
    write(svg.filename().string(), io::render_plot_svg(spec));
  }
  void heatmap(const fs::path& csv, const std::string& title, bool normalize_columns) {
    if (!cfg_.svg) return;
    // Rows of the CSV are y, header entries after the first are x.
    const io::CsvData data = io::read_csv(csv);
    std::vector<double> xs;
    for (std::size_t i = 1; i < data.header.size(); ++i) xs.push_back(std::stod(data.header[i]));
    const auto& ys = data.columns.front();
    std::vector<std::vector<double>> values(ys.size(), std::vector<double>(xs.size()));
    for (std::size_t i = 0; i < ys.size(); ++i)
      for (std::size_t j = 0; j < xs.size(); ++j) values[i][j] = data.columns[j + 1][i];
    auto svg = csv;
    svg.replace_extension(".svg");
    write(svg.filename().string(), io::render_heatmap_svg(title, xs, ys, values, normalize_columns));
  }
  const std::vector<fs::path>& files() const noexcept { return files_; }

 private:
  const RunConfig& cfg_;
  std::vector<fs::path> files_;
};

std::vector<std::vector<double>> sweep_eigenvalues(const RunConfig& cfg, const std::vector<double>& t2s) {
  std::vector<std::vector<double>> out(t2s.size());
  parallel_for(t2s.size(), cfg.threads,
               [&](std::size_t i) { out[i] = solve_eigenvalues(hamiltonian(model(cfg, t2s[i]))); });
  return out;
}

std::string dos_csv(const DosCurve& d, const DosCurve* filtered = nullptr) {
  io::CsvTable t(filtered ? std::vector<std::string>{"energy", "density", "filtered_density"}
                          : std::vector<std::string>{"energy", "density"});
  for (std::size_t i = 0; i < d.energy.size(); ++i) {
    if (filtered) {
      t.add_row({d.energy[i], d.density[i], filtered->density[i]});
    } else {
      t.add_row({d.energy[i], d.density[i]});
    }
  }
  return t.str();
}

std::string state_csv(const TwoParticleAmplitude& psi) {
  const PairBasis basis(psi.n_sites);
  io::CsvTable t({"n", "m", "psi"});
  for (std::size_t i = 0; i < basis.size(); ++i)
    t.add_row({std::int64_t{basis[i].n}, std::int64_t{basis[i].m}, psi.psi[i]});
  return t.str();
}

void cmd_spectrum(const RunConfig& cfg, Outputs& out) {
  const ModelParams p = model(cfg, effective_t2(cfg).front());
  const SparseHamiltonian h = hamiltonian(p);
  const Spectrum s = solve_spectrum(h);
  const auto iprs = ipr_all(s);

  io::CsvTable t({"index", "energy", "ipr"});
  for (std::size_t i = 0; i < s.size(); ++i) t.add_row({static_cast<std::int64_t>(i), s.eigenvalues[i], iprs[i]});
  const auto csv = out.write("spectrum.csv", t.str());

  ordered_json meta;
  meta["params"] = params_json(p);
  meta["basis_size"] = s.size();
  meta["residual"] = s.residual;
  meta["symmetry_defect"] = spectral_symmetry_defect(s.eigenvalues);
  if (cfg.select_energy) {
    const std::size_t idx = most_localized_state(s.eigenvalues, iprs, *cfg.select_energy, cfg.select_window);
    meta["selected"] = {{"index", idx}, {"energy", s.eigenvalues[idx]}, {"ipr", iprs[idx]}};
    if (cfg.dump_state) {
      const auto psi = localize_in_degenerate_subspace(s, p.n_sites, idx);
      meta["selected"]["unmixed_ipr"] = ipr(psi);
      out.write("state.csv", state_csv(psi));
    }
  }
  out.write("spectrum.json", meta.dump(2) + "\n");
  out.plot(csv, "index", {"energy"}, "Spectrum", true);
}

void cmd_dos_map(const RunConfig& cfg, Outputs& out) {
  const auto ratios = linspace(cfg.t2_min, cfg.t2_max, cfg.t2_steps);
  std::vector<double> t2s;
  for (double r : ratios) t2s.push_back(r * cfg.t1);
  const EnergyGrid grid = map_grid(cfg);
  const auto spectra = sweep_eigenvalues(cfg, t2s);

  std::vector<std::string> header{"t2/t1"};
  for (std::size_t i = 0; i < grid.points; ++i) header.push_back(io::format_double(grid.at(i)));
  io::CsvTable map(header);
  for (std::size_t r = 0; r < t2s.size(); ++r) {
    const DosCurve d = dos(spectra[r], grid, cfg.sigma);
    std::vector<io::Cell> row{ratios[r]};
    for (double v : d.density) row.emplace_back(v);
    map.add_row(std::move(row));
  }
  const auto map_path = out.write("dos_map.csv", map.str());
  out.heatmap(map_path, "DOS(E, t2/t1)", false);

  const auto cuts = effective_t2(cfg);
  const auto cut_spectra = sweep_eigenvalues(cfg, cuts);
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const DosCurve d = dos(cut_spectra[i], grid, cfg.sigma);
    const auto p = out.write("dos_t2_" + tag(cuts[i]) + ".csv", dos_csv(d));
    out.plot(p, "energy", {"density"}, "DOS at t2 = " + tag(cuts[i]), false);
  }
}

void cmd_fig2c(const RunConfig& cfg, Outputs& out) {
  const auto ratios = effective_t2(cfg);
  const auto zs = z_values(cfg, 20);
  const LocalizationMap m = localization_map(cfg.t1, ratios, zs, cfg.cells, cfg.threads);

  std::vector<std::string> header{cfg.z_phase ? "K" : "z"};
  for (double r : ratios) header.push_back(io::format_double(r));
  io::CsvTable values(header);
  io::CsvTable mask(header);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const double label = cfg.z_phase ? std::arg(zs[i]) : zs[i].real();
    std::vector<io::Cell> row{label};
    std::vector<io::Cell> mrow{label};
    for (std::size_t j = 0; j < ratios.size(); ++j) {
      row.emplace_back(m.value(i, j));
      mrow.emplace_back(std::int64_t{m.gap_closed(i, j)});
    }
    values.add_row(std::move(row));
    mask.add_row(std::move(mrow));
  }
  const auto p = out.write("fig2c.csv", values.str());
  out.write("fig2c_mask.csv", mask.str());
  out.heatmap(p, "Localization parameter", false);
}

void cmd_fig4(const RunConfig& cfg, Outputs& out) {
  const auto ratios = linspace(cfg.t2_min, cfg.t2_max, cfg.t2_steps);
  std::vector<double> t2s;
  for (double r : ratios) t2s.push_back(r * cfg.t1);
  const auto spectra = sweep_eigenvalues(cfg, t2s);

  io::CsvTable t({"t2/t1", "index", "energy", "weight"});
  for (std::size_t r = 0; r < t2s.size(); ++r) {
    const auto w = level_spacing_weight(spectra[r]);
    for (std::size_t i = 0; i < w.size(); ++i)
      t.add_row({ratios[r], static_cast<std::int64_t>(i), spectra[r][i], w[i]});
  }
  const auto p = out.write("fig4.csv", t.str());

  if (cfg.svg) {
    // Display only: per-t2 column, the largest weight in each energy bin,
    // scaled to the column maximum.
    const io::CsvData data = io::read_csv(p);
    const EnergyGrid grid = map_grid(cfg);
    const std::size_t bins = std::min<std::size_t>(grid.points, 200);
    const double width = (grid.emax - grid.emin) / static_cast<double>(bins);
    std::vector<double> ys(bins);
    for (std::size_t b = 0; b < bins; ++b) ys[b] = grid.emin + width * (b + 0.5);
    std::vector<std::vector<double>> values(bins, std::vector<double>(ratios.size(), 0.0));
    const auto& col_r = data.column("t2/t1");
    const auto& col_e = data.column("energy");
    const auto& col_w = data.column("weight");
    for (std::size_t k = 0; k < col_r.size(); ++k) {
      const auto j = static_cast<std::size_t>(std::min_element(ratios.begin(), ratios.end(),
                                                               [&](double a, double b) {
                                                                 return std::abs(a - col_r[k]) < std::abs(b - col_r[k]);
                                                               }) -
                                              ratios.begin());
      const double pos = (col_e[k] - grid.emin) / width;
      if (pos < 0 || pos >= static_cast<double>(bins)) continue;
      auto& cell = values[static_cast<std::size_t>(pos)][j];
      cell = std::max(cell, std::log10(col_w[k]));
    }
    out.write("fig4.svg", io::render_heatmap_svg("log10 inverse level spacing", ratios, ys, values, true));
  }
}

void cmd_fig5(const RunConfig& cfg, Outputs& out) {
  ordered_json summary = ordered_json::array();
  for (double t2 : effective_t2(cfg)) {
    const ModelParams p = model(cfg, t2);
    const Spectrum s = solve_spectrum(hamiltonian(p));
    const auto iprs = ipr_all(s);
    const std::string base = "fig5_t2_" + tag(t2);

    io::CsvTable scatter({"energy", "ipr"});
    for (std::size_t i = 0; i < s.size(); ++i) scatter.add_row({s.eigenvalues[i], iprs[i]});
    const auto sp = out.write(base + "_scatter.csv", scatter.str());
    out.plot(sp, "energy", {"ipr"}, "IPR at t2 = " + tag(t2), true);

    const EnergyGrid grid = default_dos_grid(s.eigenvalues, cfg.sigma);
    const DosCurve all = dos(s.eigenvalues, grid, cfg.sigma);
    const DosCurve loc = filtered_dos(s.eigenvalues, iprs, cfg.ipr_threshold, grid, cfg.sigma);
    const auto dp = out.write(base + "_dos.csv", dos_csv(all, &loc));
    out.plot(dp, "energy", {"density", "filtered_density"}, "DOS at t2 = " + tag(t2), false);

    summary.push_back({{"params", params_json(p)},
                       {"residual", s.residual},
                       {"ipr_threshold", cfg.ipr_threshold},
                       {"states_above_threshold", loc.state_count},
                       {"max_ipr", *std::max_element(iprs.begin(), iprs.end())}});
  }
  out.write("fig5.json", summary.dump(2) + "\n");
}

void cmd_fig6(const RunConfig& cfg, Outputs& out) {
  const ModelParams p = model(cfg, effective_t2(cfg).front());
  if (!p.hard_core()) throw ModeError("fig6 needs the hard-core Hamiltonian");
  const Spectrum s = solve_spectrum(build_hardcore_hamiltonian(p));
  const BoundState b = analyze_bound_state(cfg, s);

  io::CsvTable cuts({"com", "separation", "amplitude"});
  for (const auto& c : b.cuts)
    for (std::size_t k = 0; k < c.separation.size(); ++k)
      cuts.add_row({std::int64_t{c.com}, std::int64_t{c.separation[k]}, c.amplitude[k]});
  out.write("fig6_cuts.csv", cuts.str());

  io::CsvTable ssh({"separation", "amplitude"});
  const auto& nearest = b.ssh.front();
  for (std::size_t k = 0; k < nearest.profile.size(); ++k)
    ssh.add_row({static_cast<std::int64_t>(k + 1), nearest.profile[k]});
  const auto sp = out.write("fig6_ssh.csv", ssh.str());
  out.plot(sp, "separation", {"amplitude"}, "SSH eigenvector at fitted z", false);

  ordered_json j;
  j["params"] = params_json(p);
  j["energy"] = b.energy;
  j["ipr"] = b.ipr;
  j["z"] = {b.fit.z.real(), b.fit.z.imag()};
  j["z_slope_spread"] = b.fit.slope_spread;
  j["ssh_cells"] = cfg.cells;
  j["exact_slope"] = b.exact_slope;
  j["ssh_window"] = cfg.ssh_window;
  j["ssh_candidates"] = ordered_json::array();
  for (const auto& c : b.ssh) {
    j["ssh_candidates"].push_back({{"energy", {c.energy.real(), c.energy.imag()}}, {"slope", c.slope}});
  }
  out.write("fig6.json", j.dump(2) + "\n");
  if (cfg.dump_state) out.write("fig6_state.csv", state_csv(b.state));
}

void cmd_winding(const RunConfig& cfg, Outputs& out) {
  const auto zs = z_values(cfg, 10);
  ordered_json records = ordered_json::array();
  for (double t2 : effective_t2(cfg)) {
    for (const Complex& z : zs) {
      const SSHParams p{cfg.t1, t2, z, cfg.cells};
      const WindingResult w = winding_number(p);
      ordered_json r{{"t2", t2}, {"z", {z.real(), z.imag()}}, {"gap_closed", w.gap_closed},
                     {"min_abs_h", w.min_abs_h}};
      r["winding"] = w.gap_closed ? ordered_json(nullptr) : ordered_json(w.winding);
      try {
        const Complex sr = skin_ratio(p);
        r["skin_ratio"] = {sr.real(), sr.imag()};
      } catch (const InvalidParameter&) {
        r["skin_ratio"] = nullptr;
      }
      records.push_back(std::move(r));
    }
  }
  out.write("winding.json", records.dump(2) + "\n");
}

void cmd_stark(const RunConfig& cfg, Outputs& out) {
  const double t2 = effective_t2(cfg).front();
  const FlatbandEnergy f = flatband_energy(cfg.t1, t2);
  io::CsvTable t({"n0", "eigenvalue", "predicted", "alpha", "center_weight"});
  for (int n0 : cfg.n0) {
    const StarkParams p = stark_params(n0, cfg.t1, t2);
    const StarkTarget s = stark_target(p, cfg.window);
    t.add_row({std::int64_t{n0}, s.eigenvalue, f.epsilon, p.quadratic, s.center_weight});
  }
  const auto p = out.write("stark.csv", t.str());
  out.plot(p, "n0", {"eigenvalue", "predicted"}, "Stark ladder target eigenvalue", true);
}

void cmd_parabolas(const RunConfig& cfg, Outputs& out) {
  const auto t2s = effective_t2(cfg);
  const auto spectra = sweep_eigenvalues(cfg, t2s);
  io::CsvTable fits({"k", "nu_fit", "residual", "e0"});
  io::CsvTable clusters({"k", "t2", "cluster_mean", "cluster_size"});
  for (double k : kResonantK) {
    const PerturbationFit f = perturbation_coefficient(k, t2s, spectra, cfg.t1, cfg.cluster_tol);
    fits.add_row({k, f.nu, f.residual, f.e0});
    for (std::size_t i = 0; i < t2s.size(); ++i)
      clusters.add_row({k, t2s[i], f.cluster_means[i], static_cast<std::int64_t>(f.cluster_sizes[i])});
  }
  const auto p = out.write("parabolas.csv", fits.str());
  out.write("parabolas_clusters.csv", clusters.str());
  out.plot(p, "k", {"nu_fit"}, "Parabola coefficients", true);
}

}  // namespace

double log_slope(const std::vector<double>& values, std::size_t count) {
  count = std::min(count, values.size());
  if (count < 2) throw FitError("log_slope: need at least two samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    if (!(values[k] > 0.0)) throw FitError("log_slope: non-positive amplitude");
    mx += static_cast<double>(k);
    my += std::log(values[k]);
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    sxx += (k - mx) * (k - mx);
    sxy += (k - mx) * (std::log(values[k]) - my);
  }
  return sxy / sxx;
}

BoundState analyze_bound_state(const RunConfig& cfg, const Spectrum& spectrum) {
  BoundState b;
  const double target = cfg.select_energy.value_or(-0.259 * cfg.t1);
  const auto iprs = ipr_all(spectrum);
  b.index = most_localized_state(spectrum.eigenvalues, iprs, target, cfg.select_window);
  b.energy = spectrum.eigenvalues[b.index];
  b.state = localize_in_degenerate_subspace(spectrum, cfg.n, b.index);
  b.ipr = ipr(b.state);

  const auto [cmin, cmax] = std::minmax_element(cfg.com.begin(), cfg.com.end());
  b.fit = fit_z(b.state, FitWindow{*cmin, *cmax, 1, cfg.fit_sep_max});
  b.cuts = relative_cuts(b.state, cfg.com);

  const auto count = static_cast<std::size_t>(cfg.slope_sep_max);
  double acc = 0.0;
  for (const auto& c : b.cuts) acc += log_slope(c.amplitude, count);
  b.exact_slope = acc / static_cast<double>(b.cuts.size());

  const double t2 = effective_t2(cfg).front();
  const SSHParams p{cfg.t1, t2, b.fit.z, cfg.cells};
  const ComplexSpectrum ssh = solvers::complex_eig(build_ssh_matrix(p));
  std::vector<std::size_t> order(ssh.eigenvalues.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(ssh.eigenvalues[x] - b.energy) < std::abs(ssh.eigenvalues[y] - b.energy);
  });
  for (std::size_t j : order) {
    if (!b.ssh.empty() && std::abs(ssh.eigenvalues[j] - b.energy) > cfg.ssh_window) break;
    SshCandidate c;
    c.energy = ssh.eigenvalues[j];
    for (std::size_t i = 0; i < ssh.eigenvectors.rows(); ++i) c.profile.push_back(std::abs(ssh.eigenvectors(i, j)));
    c.slope = log_slope(c.profile, count);
    b.ssh.push_back(std::move(c));
  }
  return b;
}

std::vector<fs::path> execute(const RunConfig& cfg) {
  Outputs out(cfg);
  const std::string& c = cfg.command;
  if (c == "spectrum") {
    cmd_spectrum(cfg, out);
  } else if (c == "dos-map") {
    cmd_dos_map(cfg, out);
  } else if (c == "fig2c") {
    cmd_fig2c(cfg, out);
  } else if (c == "fig4") {
    cmd_fig4(cfg, out);
  } else if (c == "fig5") {
    cmd_fig5(cfg, out);
  } else if (c == "fig6") {
    cmd_fig6(cfg, out);
  } else if (c == "winding") {
    cmd_winding(cfg, out);
  } else if (c == "stark") {
    cmd_stark(cfg, out);
  } else if (c == "parabolas") {
    cmd_parabolas(cfg, out);
  } else {
    throw InvalidParameter("unknown subcommand '" + c + "'");
  }
  return out.files();
}

int run(int argc, const char* const* argv) {
  const ParseResult parsed = parse_command_line(argc, argv);
  if (!parsed.config) return parsed.exit_code;
  const RunConfig& cfg = *parsed.config;
  try {
    cfg.validate();
    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec || !fs::is_directory(cfg.out)) throw InvalidParameter("cannot create output directory " + cfg.out.string());
  } catch (const Error& e) {
    std::cerr << "pairlat: configuration error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    for (const auto& f : execute(cfg)) std::cout << f.string() << "\n";
  } catch (const InvalidParameter& e) {
    std::cerr << "pairlat: invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const ModeError& e) {
    std::cerr << "pairlat: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ConvergenceError& e) {
    std::cerr << "pairlat: solver error: " << e.what() << " (iterations " << e.iterations() << ", residual "
              << e.residual() << ")\n";
    return kSolverError;
  } catch (const std::exception& e) {
    std::cerr << "pairlat: solver error: " << e.what() << "\n";
    return kSolverError;
  }
  return kOk;
}

}  // namespace pairlat::cli
