// Command-line front end for the PQTLL library.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pqtll/errors.hpp"
#include "pqtll/figures.hpp"
#include "pqtll/obc.hpp"
#include "pqtll/spectra.hpp"
#include "pqtll/sweep.hpp"

using namespace pqtll;

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  int workers = 0;
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key=value config file");
  app->add_option("--set", c.sets, "override, key=value (repeatable)");
  app->add_option("--workers", c.workers, "worker threads")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "output path (default stdout)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

SweepConfig build_config(const Common& c) {
  SweepConfig cfg = c.config.empty() ? SweepConfig{} : load_config(c.config);
  for (const auto& s : c.sets) apply_setting(cfg, s, "--set " + s);
  if (c.workers > 0) cfg.workers = c.workers;
  if (!c.out.empty()) cfg.out = c.out;
  return cfg;
}

template <class F>
void with_output(const std::string& path, F&& f) {
  if (path.empty()) {
    f(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) fail(ErrorKind::Config, "cannot write '" + path + "'");
  f(os);
}

void emit(const SweepConfig& cfg, const SweepOutput& out, const std::string& format) {
  if (!cfg.summary.empty())
    with_output(cfg.summary, [&](std::ostream& os) { os << out.summary.dump(2) << '\n'; });
  with_output(cfg.out, [&](std::ostream& os) {
    if (format == "csv") {
      write_csv(out, os);
      return;
    }
    nlohmann::json j = out.summary;
    j["header"] = out.header;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : out.records) {
      nlohmann::json row;
      std::size_t h = 0;
      for (double c : r.coords) row[out.header[h++]] = c;
      for (double v : r.values) row[out.header[h++]] = std::isnan(v) ? nlohmann::json() : nlohmann::json(v);
      row["status"] = r.status;
      j["rows"].push_back(row);
    }
    os << j.dump(2) << '\n';
  });
}

int run_task(const Common& c, std::optional<Task> task) {
  SweepConfig cfg = build_config(c);
  if (task) cfg.task = *task;
  emit(cfg, run_sweep(cfg), c.format);
  return 0;
}

int run_bands(const Common& c, int frame, int n_k) {
  const SweepConfig cfg = build_config(c);
  const Frame f = frame_from_int(frame);
  with_output(cfg.out, [&](std::ostream& os) {
    os << "k,eps1p_re,eps1p_im,eps1m_re,eps1m_im,eps2p_re,eps2p_im,eps2m_re,eps2m_im,status\n";
    for (int j = 0; j < n_k; ++j) {
      const double k = grid_k(j, n_k);
      os << format_value(k);
      try {
        const BandSet b = band_set(cfg.base, k, f);
        for (cplx e : b.eps) os << ',' << format_value(e.real()) << ',' << format_value(e.imag());
        os << ",ok\n";
      } catch (const std::exception& e) {
        // unlabelled quasienergies still carry information at closings
        const auto raw = quasienergies(floquet_u(cfg.base, k, f));
        for (cplx x : raw) os << ',' << format_value(x.real()) << ',' << format_value(x.imag());
        os << ',' << status_for_error(e) << '\n';
      }
    }
  });
  return 0;
}

int run_verify(const Common& c, const std::string& which, int grid) {
  if (which == "bulk-edge") {
    const SweepConfig cfg = build_config(c);
    const BulkEdgeReport r = verify_bulk_edge(cfg.base, cfg.n_cells, cfg.n_e);
    std::printf("k-space   (w1, w2) = (%.4f, %.4f)  (w0, w_pi) = (%.4f, %.4f)\n", r.k_space.w1, r.k_space.w2,
                r.k_space.w0, r.k_space.w_pi);
    std::printf("real-space (w1, w2) = (%.4f, %.4f)  (w0, w_pi) = (%.4f, %.4f)  N=%d N_E=%d\n", r.real_space.w1_rs,
                r.real_space.w2_rs, r.real_space.w0_rs, r.real_space.w_pi_rs, r.real_space.n, r.real_space.n_e);
    std::printf("edge modes (n0, n_pi) = (%d, %d)  raw (%d, %d)\n", r.counts.n0, r.counts.n_pi, r.counts.raw0,
                r.counts.raw_pi);
    std::printf("|w| = 2n: %s   |w_rs| = 2n: %s   symmetry: %s\n", r.edge_relation ? "pass" : "FAIL",
                r.rs_relation ? "pass" : "FAIL", r.symmetry_ok ? "ok" : "broken");
    for (const auto& n : r.notes) std::printf("note: %s\n", n.c_str());
    return r.pass ? 0 : 2;
  }
  FigureOptions opt;
  opt.workers = c.workers > 0 ? c.workers : 1;
  opt.grid = grid;
  bool all = true;
  std::vector<std::string_view> names;
  if (which == "all") names = figure_names();
  else names.push_back(which);
  for (auto name : names) {
    const FigureReport r = verify_figure(name, opt);
    std::printf("%s: %s\n", r.name.c_str(), r.pass ? "PASS" : "FAIL");
    for (const auto& l : r.lines) std::printf("  %s\n", l.c_str());
    all &= r.pass;
  }
  return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological characterization of the periodically quenched non-Hermitian two-leg ladder"};
  app.require_subcommand(1);

  Common common;
  int frame = 1, n_k = 256, grid = 201;
  std::string figure = "all";

  struct Sub {
    const char* name;
    const char* help;
    std::optional<Task> task;
  };
  const Sub subs[] = {
      {"gaps", "bulk gap functions", Task::Gaps},
      {"winding", "winding numbers (w1, w2, w0, w_pi)", Task::Winding},
      {"boundary", "gap closings along axis1", Task::Boundary},
      {"obc", "open-chain edge modes and real-space winding", Task::OBC},
      {"mcd", "mean chiral displacement", Task::MCD},
      {"sweep", "parameter sweep with the configured task", std::nullopt},
  };
  std::vector<std::pair<CLI::App*, std::optional<Task>>> task_cmds;
  for (const auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, common);
    task_cmds.emplace_back(cmd, s.task);
  }
  auto* bands = app.add_subcommand("bands", "quasienergy bands on a k-grid");
  add_common(bands, common);
  bands->add_option("--frame", frame, "0, 1 or 2")->check(CLI::Range(0, 2));
  bands->add_option("--n-k", n_k, "k-points")->check(CLI::PositiveNumber);
  auto* verify = app.add_subcommand("verify", "reference checks: fig1..fig4b, all, or bulk-edge");
  add_common(verify, common);
  verify->add_option("which", figure, "figure name, all, or bulk-edge");
  verify->add_option("--grid", grid, "fig1/fig2 points per axis")->check(CLI::Range(2, 2001));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    for (auto& [cmd, task] : task_cmds)
      if (cmd->parsed()) return run_task(common, task);
    if (bands->parsed()) return run_bands(common, frame, n_k);
    if (verify->parsed()) return run_verify(common, figure, grid);
  } catch (const Error& e) {
    std::fprintf(stderr, "pqtll: %s: %s\n", std::string(to_string(e.kind())).c_str(), e.what());
    return 1;
  }
  return 1;
}
