#include "axns/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "axns/initdata.hpp"
#include "axns/snapshot_io.hpp"
#include "axns/solver.hpp"
#include "json.hpp"

namespace axns {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr const char* kDiagnosticsHeader =
    "step,t,Q,argmax_r,argmax_z,R,max_rvtheta,energy,max_divergence,boundary_max";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  return out;
}

std::vector<MicroscopeRow> microscope_rows(const RunConfig& config, const fs::path& snapshot_dir) {
  const fs::path diag = snapshot_dir.parent_path() / "diagnostics.csv";
  const SnapshotHistory history =
      load_history(snapshot_dir, fs::exists(diag) ? std::optional<fs::path>(diag) : std::nullopt);
  return microscope_report(history, config.microscope);
}

constexpr double kBoundaryRatio = 1e-6;

struct Resolution {
  double cell_reynolds = 0.0;   ///< max Q h / mu
  double boundary_ratio = 0.0;  ///< max boundary_max / Q
};

Resolution resolution(const SnapshotHistory& history, double mu) {
  const Grid& g = history.grid();
  const double h = std::max(g.dr, g.dz);
  Resolution out;
  for (const DiagnosticsRecord& r : step_records(history)) {
    out.cell_reynolds = std::max(out.cell_reynolds, r.Q * h / mu);
    if (r.Q > 0.0) out.boundary_ratio = std::max(out.boundary_ratio, r.boundary_max / r.Q);
  }
  return out;
}

}  // namespace

void write_diagnostics_header(std::ostream& out) { out << kDiagnosticsHeader << '\n'; }

void write_diagnostics_row(std::ostream& out, const DiagnosticsRecord& r) {
  out << r.step;
  for (double v : {r.t, r.Q, r.argmax_r, r.argmax_z, r.R, r.max_rvtheta, r.energy, r.max_divergence,
                   r.boundary_max}) {
    out << ',' << format_double(v);
  }
  out << '\n';
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != 10) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    DiagnosticsRecord r;
    r.step = std::stol(cells[0]);
    double* fields[] = {&r.t,   &r.Q,           &r.argmax_r, &r.argmax_z,       &r.R,
                        &r.max_rvtheta, &r.energy, &r.max_divergence, &r.boundary_max};
    for (std::size_t k = 0; k < 9; ++k) *fields[k] = std::stod(cells[k + 1]);
    out.push_back(r);
  }
  return out;
}

void write_microscope_csv(std::ostream& out, const std::vector<MicroscopeRow>& rows) {
  out << "mode,t0,r0,z0,Q,alpha,beta,ratio,L,sup_dist,grad_sup,hess_sup,dt_sup,holder,total,"
         "swirl_ratio,masked_fraction,capped\n";
  for (const MicroscopeRow& row : rows) {
    const ZoomParameters& z = row.zoom;
    const ClosenessReport& c = row.closeness;
    out << to_string(z.mode);
    for (double v : {z.t0, z.r0, z.z0, z.Q, z.alpha, z.beta, z.ratio, row.L, c.sup_dist, c.grad_sup,
                     c.hess_sup, c.dt_sup, c.holder, c.total, c.swirl_ratio, row.masked_fraction}) {
      out << ',' << format_double(v);
    }
    out << ',' << (row.capped ? 1 : 0) << '\n';
  }
}

SnapshotHistory load_history(const fs::path& snapshot_dir, const std::optional<fs::path>& diagnostics) {
  const auto files = list_snapshots(snapshot_dir);
  if (files.empty()) throw SnapshotFormatError("no snapshots in " + snapshot_dir.string());
  SnapshotHistory history(files.size());
  if (diagnostics) {
    for (const DiagnosticsRecord& r : read_diagnostics_csv(*diagnostics)) history.note(r);
  }
  for (const fs::path& f : files) {
    Snapshot s = read_snapshot(f);
    if (!history.empty() && !(s.field.grid == history.grid())) {
      throw SnapshotFormatError(f.string() + ": grid differs from the first snapshot");
    }
    history.push(s.t, std::move(s.field), std::move(s.pressure));
  }
  return history;
}

ExitCode run_simulate(const RunConfig& config, bool resume, std::ostream& log) {
  config.validate();
  const RunPaths paths{config.output_dir};
  fs::create_directories(paths.snapshots());
  fs::remove(paths.failure());
  const Grid g = config.grid.make();
  const SolverConfig& sc = config.solver;

  AxisymField initial;
  double t0 = 0.0;
  long step0 = 0;
  long file_index = 0;
  bool fresh = true;
  std::string kept_diagnostics;
  auto files = list_snapshots(paths.snapshots());
  if (resume && !files.empty()) {
    Snapshot last = read_snapshot(files.back());
    if (!(last.field.grid == g)) {
      log << "resume: stored grid does not match the configuration\n";
      return ExitCode::Usage;
    }
    t0 = last.t;
    file_index = static_cast<long>(files.size());
    std::ifstream in(paths.diagnostics());
    std::string line;
    if (!std::getline(in, line) || line != kDiagnosticsHeader) {
      log << "resume: missing or malformed " << paths.diagnostics().string() << '\n';
      return ExitCode::Usage;
    }
    kept_diagnostics = line + "\n";
    while (std::getline(in, line)) {
      const auto cells = split(line);
      if (cells.size() != 10 || std::stod(cells[1]) > t0) break;
      step0 = std::stol(cells[0]);
      kept_diagnostics += line + "\n";
    }
    initial = std::move(last.field);
    fresh = false;
    log << "resuming from t=" << format_double(t0) << " (step " << step0 << ")\n";
  } else {
    for (const fs::path& f : files) fs::remove(f);
    initial = generate(config.data, g);
    kept_diagnostics = std::string(kDiagnosticsHeader) + "\n";
  }
  write_text(paths.config(), serialize_config(config));
  write_text(paths.diagnostics(), kept_diagnostics);
  if (!fresh && t0 >= sc.t_end) {
    log << "already at t_end\n";
    return ExitCode::Ok;
  }

  std::ofstream diag(paths.diagnostics(), std::ios::binary | std::ios::app);
  auto save = [&](const Solver& s) {
    write_snapshot(paths.snapshots() / snapshot_filename(file_index++),
                   Snapshot{s.time(), s.state(), s.pressure()});
  };
  try {
    Solver solver(std::move(initial), sc, t0, boundary_data(config.data), fresh);
    solver.set_step_count(step0);
    if (fresh) {
      write_diagnostics_row(diag, measure(solver.state(), 0, t0));
      save(solver);
    }
    solver.advance(sc.t_end, [&](const Solver& s) {
      write_diagnostics_row(diag, measure(s.state(), s.steps(), s.time()));
      if (s.steps() % sc.snapshot_every == 0 || s.time() >= sc.t_end) save(s);
    });
    log << "simulate: " << solver.steps() << " steps to t=" << format_double(solver.time()) << ", "
        << file_index << " snapshots in " << paths.snapshots().string() << '\n';
  } catch (const NumericalError& e) {
    diag.flush();
    write_text(paths.failure(), "t=" + format_double(e.time()) + "\n" + e.what() + "\n");
    log << "numerical failure at t=" << format_double(e.time()) << ": " << e.what() << '\n';
    return ExitCode::Numerical;
  } catch (const CflError& e) {
    diag.flush();
    write_text(paths.failure(), std::string(e.what()) + "\n");
    log << "time step rejected: " << e.what() << '\n';
    return ExitCode::Numerical;
  }
  return ExitCode::Ok;
}

std::optional<MicroscopeRow> best_mode_b_row(const std::vector<MicroscopeRow>& rows) {
  std::optional<MicroscopeRow> best;
  for (const MicroscopeRow& r : rows) {
    if (r.zoom.mode != ZoomMode::B || r.masked_fraction != 0.0 || r.capped) continue;
    if (!best || r.zoom.alpha > best->zoom.alpha) best = r;
  }
  return best;
}

ExitCode run_microscope(const RunConfig& config, const fs::path& snapshot_dir, bool dump_cubes,
                        std::ostream& log) {
  const RunPaths paths{config.output_dir};
  std::vector<MicroscopeRow> rows;
  try {
    rows = microscope_rows(config, snapshot_dir);
  } catch (const SnapshotFormatError& e) {
    log << "microscope: " << e.what() << '\n';
    return ExitCode::Usage;
  } catch (const std::invalid_argument& e) {
    log << "microscope: " << e.what() << '\n';
    return ExitCode::Usage;
  }
  fs::create_directories(paths.dir);
  std::ostringstream csv;
  write_microscope_csv(csv, rows);
  write_text(paths.microscope(), csv.str());
  if (dump_cubes) {
    const fs::path diag = snapshot_dir.parent_path() / "diagnostics.csv";
    const SnapshotHistory history =
        load_history(snapshot_dir, fs::exists(diag) ? std::optional<fs::path>(diag) : std::nullopt);
    fs::create_directories(paths.cubes());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      std::ostringstream name;
      name << "cube_" << std::setw(4) << std::setfill('0') << k << ".cube";
      write_cube(paths.cubes() / name.str(), rescale_history(history, rows[k].zoom, config.microscope));
    }
  }
  log << "microscope: " << rows.size() << " rows in " << paths.microscope().string() << '\n';
  return ExitCode::Ok;
}

std::vector<ConvergenceLevel> lamb_oseen_convergence(const RunConfig& config,
                                                     const std::vector<int>& levels) {
  DataSpec d = config.data;
  d.kind = DataKind::LambOseen;
  d.nu = config.solver.mu;
  const double t_end = config.solver.t_end;
  std::vector<ConvergenceLevel> out;
  for (int n : levels) {
    const Grid g = make_grid(n, n, config.grid.r_max, config.grid.z_min, config.grid.z_max);
    const auto start = std::chrono::steady_clock::now();
    Solver s(generate(d, g), config.solver, 0.0, boundary_data(d));
    ConvergenceLevel lv;
    lv.tail.push(s.time(), s.state(), s.pressure());
    s.advance(t_end, [&](const Solver& st) { lv.tail.push(st.time(), st.state(), st.pressure()); });
    lv.n = n;
    lv.steps = s.steps();
    for (int i = 0; i <= g.nr; ++i) {
      const double exact = lamb_oseen_vtheta(g.r(i), d.circulation, d.nu, d.t_offset + t_end);
      lv.max_vtheta = std::max(lv.max_vtheta, std::abs(exact));
      for (int j = 0; j <= g.nz; ++j) {
        const AxisymField& u = s.state();
        lv.error = std::max({lv.error, std::abs(u.vtheta(i, j) - exact), std::abs(u.vr(i, j)),
                             std::abs(u.vz(i, j))});
      }
    }
    lv.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(lv);
  }
  return out;
}

InvariantReport convergence_rows(const std::vector<ConvergenceLevel>& levels) {
  InvariantReport rep;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    rep.rows.push_back(make_row("convergence.ratio_" + std::to_string(levels[k].n),
                                levels[k - 1].error / levels[k].error, 3.5, 4.5));
  }
  if (!levels.empty()) {
    const ConvergenceLevel& f = levels.back();
    rep.rows.push_back(make_row("convergence.relative_error_" + std::to_string(f.n),
                                f.error / f.max_vtheta, 0.0, 1e-3));
  }
  return rep;
}

ExitCode run_validate(const RunConfig& config, bool skip_convergence, std::ostream& log) {
  const ExitCode sim = run_simulate(config, false, log);
  if (sim != ExitCode::Ok) return sim;
  const RunPaths paths{config.output_dir};
  SnapshotHistory history;
  try {
    history = load_history(paths.snapshots(), paths.diagnostics());
  } catch (const SnapshotFormatError& e) {
    log << "validate: " << e.what() << '\n';
    return ExitCode::Usage;
  }
  InvariantReport report = check_all(history, config.data.N0, config.solver.mu, config.invariants);
  if (!skip_convergence) {
    const auto levels = lamb_oseen_convergence(config, config.invariants.refinement);
    for (const auto& lv : levels) {
      log << "lamb-oseen " << lv.n << "^2: error " << format_double(lv.error) << " after " << lv.steps
          << " steps (" << format_double(std::round(lv.seconds * 10.0) / 10.0) << " s)\n";
    }
    report.append(convergence_rows(levels));
  }
  std::ostringstream csv;
  write_invariants_csv(csv, report);
  write_text(paths.invariants(), csv.str());
  json summary;
  summary["pass"] = report.pass();
  summary["h0"] = empirical_h0(history, config.data.N0);
  const Resolution res = resolution(history, config.solver.mu);
  summary["max_cell_reynolds"] = res.cell_reynolds;
  summary["max_boundary_ratio"] = res.boundary_ratio;
  summary["boundary_flag"] = res.boundary_ratio > kBoundaryRatio;
  summary["failed"] = json::array();
  for (const CheckRow& r : report.rows) {
    if (!r.pass) summary["failed"].push_back(r.check);
  }
  write_text(paths.summary(), summary.dump(2) + "\n");
  log << "max cell Reynolds number " << format_double(res.cell_reynolds) << ", max boundary/Q "
      << format_double(res.boundary_ratio)
      << (res.boundary_ratio > kBoundaryRatio ? " (domain truncation felt)" : "") << '\n';
  for (const CheckRow& r : report.rows) {
    log << (r.pass ? "PASS " : "FAIL ") << r.check << " = " << format_double(r.value) << " in ["
        << format_double(r.lower) << ", " << format_double(r.upper) << "]\n";
  }
  return report.pass() ? ExitCode::Ok : ExitCode::Invariant;
}

ExitCode run_sweep(const RunConfig& config, std::ostream& log) {
  std::vector<RunConfig> runs;
  try {
    runs = expand_sweep(config);
  } catch (const ConfigError& e) {
    log << "sweep: " << e.what() << '\n';
    return ExitCode::Usage;
  }
  std::ostringstream csv;
  csv << "run";
  for (const auto& [key, values] : config.sweep) csv << ',' << key;
  csv << ",status,steps,t_final,max_Q,max_R,rows,best_alpha,best_total,best_swirl_ratio\n";
  ExitCode worst = ExitCode::Ok;
  for (const RunConfig& run : runs) {
    const ExitCode code = run_simulate(run, false, log);
    const RunPaths paths{run.output_dir};
    csv << paths.dir.filename().string();
    const json doc = json::parse(serialize_config(run));
    for (const auto& [key, values] : config.sweep) {
      std::string ptr = "/" + key;
      std::replace(ptr.begin(), ptr.end(), '.', '/');
      csv << ',' << doc.at(json::json_pointer(ptr)).dump();
    }
    const auto diag = read_diagnostics_csv(paths.diagnostics());
    double max_q = 0.0, max_r = 0.0;
    for (const auto& r : diag) {
      max_q = std::max(max_q, r.Q);
      max_r = std::max(max_r, r.R);
    }
    csv << ',' << (code == ExitCode::Ok ? "ok" : "numerical_failure") << ','
        << (diag.empty() ? 0 : diag.back().step) << ','
        << format_double(diag.empty() ? 0.0 : diag.back().t) << ',' << format_double(max_q) << ','
        << format_double(max_r);
    if (code != ExitCode::Ok) {
      worst = code;
      csv << ",0,,,\n";
      continue;
    }
    std::vector<MicroscopeRow> rows;
    try {
      rows = microscope_rows(run, paths.snapshots());
    } catch (const std::invalid_argument& e) {
      log << "sweep: " << paths.dir.string() << ": " << e.what() << '\n';
    }
    std::ostringstream mcsv;
    write_microscope_csv(mcsv, rows);
    write_text(paths.microscope(), mcsv.str());
    csv << ',' << rows.size();
    if (const auto best = best_mode_b_row(rows)) {
      csv << ',' << format_double(best->zoom.alpha) << ',' << format_double(best->closeness.total)
          << ',' << format_double(best->closeness.swirl_ratio) << '\n';
    } else {
      csv << ",,,\n";
    }
  }
  fs::create_directories(config.output_dir);
  write_text(config.output_dir / "sweep_summary.csv", csv.str());
  log << "sweep: " << runs.size() << " runs, summary in "
      << (config.output_dir / "sweep_summary.csv").string() << '\n';
  return worst;
}

}  // namespace axns
