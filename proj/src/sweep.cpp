#include "pqtll/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "pqtll/errors.hpp"
#include "pqtll/mcd.hpp"
#include "pqtll/obc.hpp"
#include "pqtll/topology.hpp"

namespace pqtll {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<std::string_view, Task> kTasks{
    {"winding", Task::Winding}, {"gaps", Task::Gaps}, {"boundary", Task::Boundary},
    {"obc", Task::OBC},         {"mcd", Task::MCD},   {"verify", Task::Verify},
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  fail(ErrorKind::Config, where + ": " + what);
}

int parse_int(std::string_view v, const std::string& where, std::string_view key) {
  const double x = [&] {
    try {
      return parse_number(v);
    } catch (const Error& e) {
      config_error(where, std::string(key) + ": " + e.what());
    }
  }();
  if (x != std::floor(x) || std::abs(x) > 1e9) config_error(where, std::string(key) + " must be an integer");
  return int(x);
}

SweepAxis parse_axis_spec(std::string_view v, const std::string& where) {
  std::istringstream is{std::string(v)};
  std::string name, lo, hi, count;
  if (!(is >> name >> lo >> hi >> count))
    config_error(where, "axis needs '<name> <min> <max> <count>'");
  const auto axis = parse_axis(name);
  if (!axis) config_error(where, "unknown axis parameter '" + name + "'");
  SweepAxis a;
  a.axis = *axis;
  try {
    a.min = parse_number(lo);
    a.max = parse_number(hi);
  } catch (const Error& e) {
    config_error(where, e.what());
  }
  a.count = parse_int(count, where, "axis count");
  if (a.count < 2) config_error(where, "axis count must be >= 2");
  return a;
}

std::vector<double> nan_values(Task t) { return std::vector<double>(task_fields(t).size(), kNaN); }

std::vector<double> evaluate(const SweepConfig& cfg, const ModelParams& p, std::string& status) {
  switch (cfg.task) {
    case Task::Winding: {
      const GapPair g = gap_functions_bulk(p, cfg.gap_n_k);
      const double gap = std::min(g.delta_0, g.delta_pi);
      try {
        const WindingResult r = invariant_pair(p, cfg.n_k);
        return {r.w1, r.w2, r.w0, r.w_pi, r.residual, double(r.n_k), gap};
      } catch (const std::exception& e) {
        // keep the gap so unresolved points can be told apart from closings
        status = status_for_error(e);
        return {kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, gap};
      }
    }
    case Task::Gaps:
    case Task::Boundary: {
      const GapPair g = gap_functions_bulk(p, cfg.gap_n_k);
      return {g.delta_0, g.delta_pi};
    }
    case Task::OBC: {
      const GapPair bulk = gap_functions_bulk(p, cfg.gap_n_k);
      const OBCSpectrum s1 = obc_spectrum(p, cfg.n_cells, Frame::First);
      const CountOptions opt = cfg.gap_tol > 0 ? CountOptions{cfg.gap_tol, cfg.gap_tol, cfg.edge_tol}
                                               : bulk_count_options(bulk, cfg.edge_tol);
      const EdgeModeCount c = count_edge_modes(s1, opt);
      const GapPair og = gap_functions_obc(s1.eps);
      const RealSpaceWinding rs = real_space_winding_pair(p, cfg.n_cells, cfg.n_e);
      return {double(c.n0), double(c.n_pi), double(c.raw0), double(c.raw_pi), og.delta_0, og.delta_pi,
              rs.w1_rs, rs.w2_rs, rs.w0_rs, rs.w_pi_rs};
    }
    case Task::MCD: {
      const MCDResult r = mcd_pair(p, MCDConfig{cfg.mcd_m, cfg.mcd_n_k});
      return {r.c1.real(), r.c1.imag(), r.c2.real(), r.c2.imag(), r.c0.real(),
              r.c0.imag(), r.c_pi.real(), r.c_pi.imag(), r.im_residual};
    }
    case Task::Verify: {
      const BulkEdgeReport r = verify_bulk_edge(p, cfg.n_cells, cfg.n_e);
      return {r.k_space.w0, r.k_space.w_pi, r.real_space.w0_rs, r.real_space.w_pi_rs,
              double(r.counts.n0), double(r.counts.n_pi), double(r.symmetry_ok),
              double(r.edge_relation), double(r.rs_relation), double(r.pass)};
    }
  }
  return {};
}

int field_index(Task t, std::string_view name) {
  const auto f = task_fields(t);
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] == name) return int(i);
  return -1;
}

void summarize(const SweepConfig& cfg, SweepOutput& out) {
  using nlohmann::json;
  json& s = out.summary;
  s["task"] = std::string(task_name(cfg.task));
  s["axes"] = json::array();
  for (const auto& a : cfg.axes)
    s["axes"].push_back({{"name", std::string(axis_name(a.axis))}, {"min", a.min}, {"max", a.max}, {"count", a.count}});
  s["records"] = out.records.size();
  std::map<std::string, int> status;
  for (const auto& r : out.records) ++status[r.status];
  s["status_counts"] = status;
  s["regions"] = json::array();
  s["boundaries"] = json::array();

  const int i0 = field_index(cfg.task, "w0"), ipi = field_index(cfg.task, "w_pi");
  if (i0 < 0 || ipi < 0) return;
  auto pair_of = [&](const SweepRecord& r) {
    return std::make_pair(std::lround(r.values[i0]), std::lround(r.values[ipi]));
  };
  std::map<std::pair<long, long>, int> regions;
  for (const auto& r : out.records)
    if (r.status == "ok") ++regions[pair_of(r)];
  for (const auto& [pr, n] : regions) s["regions"].push_back({{"w0", pr.first}, {"w_pi", pr.second}, {"count", n}});

  // midpoints between neighbouring records with different invariants
  const int n1 = cfg.axes.empty() ? 1 : cfg.axes[0].count;
  const int n2 = cfg.axes.size() > 1 ? cfg.axes[1].count : 1;
  auto check = [&](int a, int b) {
    const auto& ra = out.records[a];
    const auto& rb = out.records[b];
    if (ra.status != "ok" || rb.status != "ok" || pair_of(ra) == pair_of(rb)) return;
    json c = json::array();
    for (std::size_t d = 0; d < ra.coords.size(); ++d) c.push_back(0.5 * (ra.coords[d] + rb.coords[d]));
    s["boundaries"].push_back({{"at", c},
                               {"from", {pair_of(ra).first, pair_of(ra).second}},
                               {"to", {pair_of(rb).first, pair_of(rb).second}}});
  };
  for (int a = 0; a < n1; ++a)
    for (int b = 0; b < n2; ++b) {
      const int i = a * n2 + b;
      if (b + 1 < n2) check(i, i + 1);
      if (a + 1 < n1) check(i, i + n2);
    }
}

}  // namespace

std::string_view task_name(Task t) {
  for (const auto& [name, task] : kTasks)
    if (task == t) return name;
  return "?";
}

std::vector<std::string> task_fields(Task t) {
  switch (t) {
    case Task::Winding: return {"w1", "w2", "w0", "w_pi", "residual", "n_k", "gap"};
    case Task::Gaps:
    case Task::Boundary: return {"delta_0", "delta_pi"};
    case Task::OBC:
      return {"n0", "n_pi", "raw0", "raw_pi", "obc_delta_0", "obc_delta_pi", "w1_rs", "w2_rs", "w0_rs", "w_pi_rs"};
    case Task::MCD:
      return {"c1_re", "c1_im", "c2_re", "c2_im", "c0_re", "c0_im", "c_pi_re", "c_pi_im", "im_residual"};
    case Task::Verify:
      return {"w0", "w_pi", "w0_rs", "w_pi_rs", "n0", "n_pi", "symmetry_ok", "edge_relation", "rs_relation", "pass"};
  }
  return {};
}

double parse_number(std::string_view text) {
  std::string_view t = trim(text);
  double scale = 1.0;
  if (t.substr(0, 3) == "pi:") {
    scale = std::numbers::pi;
    t.remove_prefix(3);
  }
  const std::string s(t);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x))
    fail(ErrorKind::Config, "not a finite number: '" + std::string(text) + "'");
  return scale * x;
}

void apply_setting(SweepConfig& cfg, std::string_view key, std::string_view value, const std::string& where) {
  key = trim(key);
  value = trim(value);
  auto num = [&] {
    try {
      return parse_number(value);
    } catch (const Error& e) {
      config_error(where, std::string(key) + ": " + e.what());
    }
  };
  auto integer = [&] { return parse_int(value, where, key); };

  if (key == "task") {
    const auto it = kTasks.find(value);
    if (it == kTasks.end()) config_error(where, "unknown task '" + std::string(value) + "'");
    cfg.task = it->second;
  } else if (auto axis = parse_axis(key)) {
    cfg.base = with_axis(cfg.base, *axis, num());
  } else if (key == "axis1" || key == "axis2") {
    const std::size_t idx = key == "axis1" ? 0 : 1;
    if (cfg.axes.size() < idx) config_error(where, "axis2 given before axis1");
    const SweepAxis a = parse_axis_spec(value, where);
    if (cfg.axes.size() == idx) cfg.axes.push_back(a);
    else cfg.axes[idx] = a;
  } else if (key == "n_k") {
    cfg.n_k = integer();
  } else if (key == "gap_n_k") {
    cfg.gap_n_k = integer();
  } else if (key == "n") {
    cfg.n_cells = integer();
  } else if (key == "n_e") {
    cfg.n_e = integer();
  } else if (key == "m") {
    cfg.mcd_m = integer();
  } else if (key == "mcd_n_k") {
    cfg.mcd_n_k = integer();
  } else if (key == "samples") {
    cfg.samples = integer();
  } else if (key == "gap_tol") {
    cfg.gap_tol = num();
  } else if (key == "edge_tol") {
    cfg.edge_tol = num();
  } else if (key == "workers") {
    cfg.workers = integer();
  } else if (key == "out") {
    cfg.out = std::string(value);
  } else if (key == "summary") {
    cfg.summary = std::string(value);
  } else {
    config_error(where, "unknown key '" + std::string(key) + "'");
  }
}

void apply_setting(SweepConfig& cfg, std::string_view assignment, const std::string& where) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) config_error(where, "expected key=value, got '" + std::string(assignment) + "'");
  apply_setting(cfg, assignment.substr(0, eq), assignment.substr(eq + 1), where);
}

SweepConfig parse_config(std::istream& in, const std::string& source) {
  SweepConfig cfg;
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    std::string_view v = line;
    if (const auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    apply_setting(cfg, v, source + ":" + std::to_string(no));
  }
  return cfg;
}

SweepConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorKind::Config, "cannot open config file '" + path + "'");
  return parse_config(f, path);
}

void SweepConfig::validate() const {
  if (axes.size() > 2) fail(ErrorKind::Config, "at most two sweep axes");
  for (const auto& a : axes)
    if (a.count < 2) fail(ErrorKind::Config, "axis count must be >= 2");
  if (axes.size() == 2 && axes[0].axis == axes[1].axis) fail(ErrorKind::Config, "axes must differ");
  if (task == Task::Boundary && axes.size() != 1) fail(ErrorKind::Config, "boundary task needs exactly one axis");
  if (workers < 1) fail(ErrorKind::Config, "workers must be >= 1");
  if (n_k < 16 || gap_n_k < 64) fail(ErrorKind::Config, "n_k >= 16 and gap_n_k >= 64 required");
  if (n_cells < 10 || n_e < 0 || n_cells - 2 * n_e < 10) fail(ErrorKind::Config, "need n >= 10 and n - 2 n_e >= 10");
  if (mcd_m < 1 || mcd_n_k < 128) fail(ErrorKind::Config, "need m >= 1 and mcd_n_k >= 128");
  if (samples < 100) fail(ErrorKind::Config, "samples must be >= 100");
  if (!(edge_tol > 0 && edge_tol < 1)) fail(ErrorKind::Config, "edge_tol must lie in (0, 1)");
  if (gap_tol < 0) fail(ErrorKind::Config, "gap_tol must be >= 0");
  if (!base.is_finite()) fail(ErrorKind::Config, "parameters must be finite");
}

std::string status_for_error(const std::exception& e) {
  const auto* err = dynamic_cast<const Error*>(&e);
  if (!err) return "error:internal";
  switch (err->kind()) {
    case ErrorKind::GaplessParameters:
    case ErrorKind::DegeneratePoint:
    case ErrorKind::NonDiagonalizable:
    case ErrorKind::GaplessOBC: return "gapless";
    case ErrorKind::QuantizationFailure: return "unresolved";
    default: return "error:" + std::string(to_string(err->kind()));
  }
}

SweepOutput run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  SweepOutput out;
  for (const auto& a : cfg.axes) out.header.emplace_back(axis_name(a.axis));
  for (auto& f : task_fields(cfg.task)) out.header.push_back(f);
  out.header.emplace_back("status");

  const int n1 = cfg.axes.empty() ? 1 : cfg.axes[0].count;
  const int n2 = cfg.axes.size() > 1 ? cfg.axes[1].count : 1;
  const std::size_t total = std::size_t(n1) * n2;
  out.records.resize(total);

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < total;) {
      SweepRecord& rec = out.records[i];
      ModelParams p = cfg.base;
      const int a = int(i) / n2, b = int(i) % n2;
      if (!cfg.axes.empty()) {
        rec.coords.push_back(cfg.axes[0].value(a));
        p = with_axis(p, cfg.axes[0].axis, rec.coords.back());
      }
      if (cfg.axes.size() > 1) {
        rec.coords.push_back(cfg.axes[1].value(b));
        p = with_axis(p, cfg.axes[1].axis, rec.coords.back());
      }
      try {
        rec.values = evaluate(cfg, p, rec.status);
      } catch (const std::exception& e) {
        rec.values = nan_values(cfg.task);
        rec.status = status_for_error(e);
      }
    }
  };
  const int n_workers = int(std::min<std::size_t>(cfg.workers, total));
  if (n_workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  summarize(cfg, out);
  if (cfg.task == Task::Boundary) {
    ScanOptions opt;
    opt.n_samples = cfg.samples;
    opt.gap_n_k = cfg.gap_n_k;
    const auto& ax = cfg.axes[0];
    for (const Closing& c : phase_boundary_scan(cfg.base, ax.axis, ax.min, ax.max, opt))
      out.summary["boundaries"].push_back(
          {{"value", c.value}, {"label", c.zero && c.pi ? "both" : (c.zero ? "zero" : "pi")}, {"gap", c.gap}});
  }
  return out;
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_csv(const SweepOutput& out, std::ostream& os) {
  for (std::size_t i = 0; i < out.header.size(); ++i) os << (i ? "," : "") << out.header[i];
  os << '\n';
  for (const auto& r : out.records) {
    for (double c : r.coords) os << format_value(c) << ',';
    for (double v : r.values) os << format_value(v) << ',';
    os << r.status << '\n';
  }
}

}  // namespace pqtll
