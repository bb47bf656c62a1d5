#include "pqtll/figures.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "pqtll/errors.hpp"
#include "pqtll/mcd.hpp"

namespace pqtll {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

char label_of(const Closing& c) { return c.zero && c.pi ? 'b' : (c.zero ? '0' : 'p'); }

const char* label_name(char l) {
  switch (l) {
    case '0': return "0";
    case 'p': return "pi";
    case 'b': return "0+pi";
    default: return "?";
  }
}

}  // namespace

namespace presets {

ModelParams fig1_base() { return make_params(0.5 * kPi, 0.0, 4 * kPi, 0.1 * kPi); }
ModelParams fig2_base() { return make_params(0.5 * kPi, 0.6 * kPi, 4 * kPi, 0.1 * kPi); }
ModelParams fig3a_base() { return make_params(0.5 * kPi, 1.5 * kPi, 4 * kPi, 0.1 * kPi); }
ModelParams fig3b_base() { return make_params(0.5 * kPi, cplx(0.6 * kPi, 6.0), 4 * kPi, 0.1 * kPi); }

// Axis ranges below are read off the published figure axes.
SweepConfig fig1_grid(int count) {
  SweepConfig c;
  c.base = fig1_base();
  c.task = Task::Winding;
  c.axes = {{Axis::JYR, 0.0, 2 * kPi, count}, {Axis::JYI, 0.0, 8.0, count}};
  c.n_k = 512;
  return c;
}

SweepConfig fig2_grid(int count) {
  SweepConfig c;
  c.base = fig2_base();
  c.task = Task::Winding;
  c.axes = {{Axis::JYI, 0.0, 8.0, count}, {Axis::JDI, 0.0, 3.0, count}};
  c.n_k = 512;
  return c;
}

std::vector<ExpectedClosing> fig3a_closings() {
  return {{1.09, 'p'}, {2.14, '0'}, {3.02, '0'}, {3.97, 'p'}, {5.05, 'p'}, {6.47, '0'}};
}

std::vector<ExpectedClosing> fig3b_closings() { return {{1.86, '?'}, {2.41, '?'}}; }

}  // namespace presets

FigureReport check_closings(std::string name, const std::vector<Closing>& found,
                            const std::vector<presets::ExpectedClosing>& expected) {
  FigureReport r{std::move(name), true, {}};
  if (found.size() != expected.size()) {
    r.pass = false;
    r.lines.push_back(fmt("expected %zu closings, found %zu", expected.size(), found.size()));
  }
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Closing& c = found[i];
    if (i >= expected.size()) {
      r.lines.push_back(fmt("extra closing at %.4f (%s)", c.value, label_name(label_of(c))));
      continue;
    }
    const auto& e = expected[i];
    const bool where = std::abs(c.value - e.value) <= kClosingWindow;
    const bool label = e.label == '?' || e.label == label_of(c);
    r.pass &= where && label;
    r.lines.push_back(fmt("closing %zu: expected %.2f +/- %.2f (%s), got %.4f (%s, gap %.1e) %s", i + 1, e.value,
                          kClosingWindow, label_name(e.label), c.value, label_name(label_of(c)), c.gap,
                          where && label ? "ok" : "FAIL"));
  }
  return r;
}

FigureReport check_quantized_grid(std::string name, const SweepConfig& grid) {
  FigureReport r{std::move(name), true, {}};
  const SweepOutput out = run_sweep(grid);
  constexpr int kResidual = 4, kGap = 6;  // winding task value columns
  int gapped = 0, bad = 0, closed = 0;
  double worst = 0.0;
  std::set<std::pair<long, long>> pairs;
  for (const auto& rec : out.records) {
    const double gap = rec.values[kGap];
    if (rec.status == "gapless" || !(gap >= kGappedThreshold)) {
      ++closed;
      continue;
    }
    ++gapped;
    if (rec.status != "ok") {
      ++bad;
      if (bad <= 5)
        r.lines.push_back(fmt("gapped point (%.4f, %.4f) gap %.2e: %s", rec.coords[0], rec.coords[1], gap,
                              rec.status.c_str()));
      continue;
    }
    worst = std::max(worst, rec.values[kResidual]);
    pairs.insert({std::lround(rec.values[2]), std::lround(rec.values[3])});
  }
  std::string list;
  for (const auto& [a, b] : pairs) list += fmt(" (%ld,%ld)", a, b);
  r.pass = bad == 0 && worst < kQuantizationTol && pairs.size() >= 3;
  r.lines.push_back(fmt("%d gapped points, %d at or near closings, %d not quantized, worst residual %.2e (tol %.2f)",
                        gapped, closed, bad, worst, kQuantizationTol));
  r.lines.push_back(fmt("%zu distinct (w0, w_pi) pairs (need >= 3):", pairs.size()) + list);
  return r;
}

FigureReport check_mcd_scan(std::string name, const ModelParams& base, Axis axis, double lo, double hi,
                            double converged_at, const FigureOptions& opt) {
  FigureReport r{std::move(name), true, {}};
  const auto closings = phase_boundary_scan(base, axis, lo, hi);
  std::string where;
  for (const auto& c : closings) where += fmt(" %.3f", c.value);
  r.lines.push_back("closings used for exclusion:" + where);

  int used = 0;
  double worst0 = 0.0, worst_pi = 0.0, worst_im = 0.0;
  for (int i = 0; i < opt.mcd_samples; ++i) {
    const double x = lo + (hi - lo) * i / (opt.mcd_samples - 1);
    bool far = true;
    for (const auto& c : closings) far &= std::abs(c.value - x) > 0.2;
    if (!far) continue;
    const ModelParams p = with_axis(base, axis, x);
    try {
      const WindingResult w = invariant_pair(p);
      const MCDResult m = mcd_pair(p, MCDConfig{20, 512});
      const double d0 = std::abs(m.c0 - w.w0), dpi = std::abs(m.c_pi - w.w_pi);
      ++used;
      worst0 = std::max(worst0, d0);
      worst_pi = std::max(worst_pi, dpi);
      worst_im = std::max(worst_im, m.im_residual);
      if (d0 >= 0.2 || dpi >= 0.2) {
        r.pass = false;
        r.lines.push_back(fmt("%s = %.3f: C0 %.4f vs w0 %.0f, Cpi %.4f vs w_pi %.0f FAIL", std::string(axis_name(axis)).c_str(),
                              x, m.c0.real(), w.w0, m.c_pi.real(), w.w_pi));
      }
    } catch (const Error& e) {
      r.pass = false;
      r.lines.push_back(fmt("%s = %.3f: %s", std::string(axis_name(axis)).c_str(), x, e.what()));
    }
  }
  r.lines.push_back(fmt("M=20, n_k=512: %d points, max |C0-w0| %.4f, max |Cpi-w_pi| %.4f (tol 0.2), max |Im| %.3f",
                        used, worst0, worst_pi, worst_im));

  if (opt.converged_mcd) {
    const ModelParams p = with_axis(base, axis, converged_at);
    const MCDConfig big{4000, 4096};
    const double w1 = winding_number(p, Frame::First), w2 = winding_number(p, Frame::Second);
    const cplx c1 = mcd_frame(p, Frame::First, big), c2 = mcd_frame(p, Frame::Second, big);
    const double e1 = std::abs(c1 + w1), e2 = std::abs(c2 + w2);
    const bool ok = e1 < 0.01 && e2 < 0.01;
    r.pass &= ok;
    r.lines.push_back(fmt("M=4000, n_k=4096 at %s = %.3f: |C1+w1| %.2e, |C2+w2| %.2e (tol 0.01) %s",
                          std::string(axis_name(axis)).c_str(), converged_at, e1, e2, ok ? "ok" : "FAIL"));
  }
  return r;
}

std::vector<std::string_view> figure_names() { return {"fig1", "fig2", "fig3a", "fig3b", "fig4a", "fig4b"}; }

FigureReport verify_figure(std::string_view which, const FigureOptions& opt) {
  if (which == "fig1" || which == "fig2") {
    SweepConfig g = which == "fig1" ? presets::fig1_grid(opt.grid) : presets::fig2_grid(opt.grid);
    g.workers = opt.workers;
    return check_quantized_grid(std::string(which), g);
  }
  if (which == "fig3a")
    return check_closings("fig3a", phase_boundary_scan(presets::fig3a_base(), Axis::JYI, 0.0, 7.0),
                          presets::fig3a_closings());
  if (which == "fig3b")
    return check_closings("fig3b", phase_boundary_scan(presets::fig3b_base(), Axis::JDI, 0.0, 3.0),
                          presets::fig3b_closings());
  if (which == "fig4a") return check_mcd_scan("fig4a", presets::fig3a_base(), Axis::JYI, 0.0, 7.0, 0.5, opt);
  if (which == "fig4b") return check_mcd_scan("fig4b", presets::fig3b_base(), Axis::JDI, 0.0, 3.0, 1.0, opt);
  fail(ErrorKind::Config, "unknown figure '" + std::string(which) + "'");
}

}  // namespace pqtll
