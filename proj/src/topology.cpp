#include "pqtll/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "pqtll/errors.hpp"
#include "pqtll/pauli.hpp"

namespace pqtll {

namespace {

void require_symmetric_frame(Frame frame) {
  if (frame == Frame::Lab) fail(ErrorKind::InvalidArgument, "winding numbers need frame 1 or 2");
}

double nearest_even_distance(double x) { return std::abs(x - 2.0 * std::round(x / 2.0)); }

}  // namespace

QMatrix q_matrix(const ModelParams& p, double k, Frame frame) {
  require_symmetric_frame(frame);
  const BandSet bs = band_set(p, k, frame);
  Mat4 eta = Mat4::Zero();
  for (int s = 0; s < 4; ++s) eta(s, s) = slot_eta(s);
  return {k, bs.right * eta * bs.left};
}

namespace {

// Near-exceptional points just off the real k axis put Lorentzian peaks of
// width ~1e-4 into the integrand. Cells whose samples have a large second
// difference are integrated again with adaptive Simpson.
constexpr double kPi = std::numbers::pi;
constexpr double kCurvatureFlag = 1e-4;
constexpr double kCellTol = 1e-7;
constexpr int kMaxDepth = 24;

cplx winding_density(const ModelParams& p, Frame frame, double k) {
  static const Mat4 S = pauli::sublattice();
  BandStencil st;
  try {
    st = band_stencil(p, k, frame);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::DegeneratePoint || e.kind() == ErrorKind::NonDiagonalizable)
      fail(ErrorKind::GaplessParameters, std::string("gap closes on the k-grid: ") + e.what());
    throw;
  }
  Mat4 eta = Mat4::Zero();
  for (int s = 0; s < 4; ++s) eta(s, s) = slot_eta(s);
  const Mat4 q = st.center.right * eta * st.center.left;
  const Mat4 dq = (st.q_shift[0] - st.q_shift[1]) / (2.0 * st.delta);
  return (S * q * kI * dq).trace();
}

template <class F>
cplx simpson(F& f, double a, double b, cplx fa, cplx fm, cplx fb, cplx whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const cplx flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const cplx left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const cplx right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const cplx diff = left + right - whole;
  if (depth >= kMaxDepth || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, tol / 2, depth + 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2, depth + 1);
}

}  // namespace

cplx winding_integral(const ModelParams& p, Frame frame, int n_k) {
  require_symmetric_frame(frame);
  if (n_k < 16) fail(ErrorKind::InvalidArgument, "winding grid too small");
  p.validate();
  auto f = [&](double k) { return winding_density(p, frame, k); };
  std::vector<cplx> fs(n_k);
  for (int j = 0; j < n_k; ++j) fs[j] = f(grid_k(j, n_k));
  auto at = [&](int j) { return fs[(j % n_k + n_k) % n_k]; };
  auto flagged = [&](int j) {
    return std::abs(at(j - 1) - 2.0 * at(j) + at(j + 1)) > kCurvatureFlag;
  };

  const double h = 2.0 * kPi / n_k;
  cplx total = 0.0;
  for (int j = 0; j < n_k; ++j) {
    const cplx fa = at(j), fb = at(j + 1);
    if (!flagged(j) && !flagged(j + 1)) {
      total += 0.5 * h * (fa + fb);
      continue;
    }
    const double a = grid_k(j, n_k), b = a + h;
    const cplx fm = f(0.5 * (a + b));
    total += simpson(f, a, b, fa, fm, fb, h / 6.0 * (fa + 4.0 * fm + fb), kCellTol, 0);
  }
  return total / (4.0 * kPi);
}

double winding_number(const ModelParams& p, Frame frame, int n_k) {
  const cplx w = winding_integral(p, frame, n_k);
  if (std::abs(w.imag()) >= 1e-6)
    fail(ErrorKind::NonRealWinding, "winding has imaginary part " + std::to_string(w.imag()));
  return w.real();
}

WindingResult make_winding_result(double w1, double w2, int n_k) {
  WindingResult r;
  r.w1 = w1;
  r.w2 = w2;
  r.w0 = (w1 + w2) / 2.0;
  r.w_pi = (w1 - w2) / 2.0;
  r.residual = std::max(nearest_even_distance(r.w0), nearest_even_distance(r.w_pi));
  r.n_k = n_k;
  if (r.residual < kQuantizationTol)
    r.rounded = std::make_pair(int(std::lround(r.w0)), int(std::lround(r.w_pi)));
  return r;
}

WindingResult invariant_pair(const ModelParams& p, int n_k) {
  // A coarse grid shows up either as a residual or as an imaginary part; both
  // trigger a doubling.
  WindingResult r;
  double im = 0.0;
  for (int n = n_k; n <= kMaxWindingGrid; n *= 2) {
    const cplx w1 = winding_integral(p, Frame::First, n);
    const cplx w2 = winding_integral(p, Frame::Second, n);
    r = make_winding_result(w1.real(), w2.real(), n);
    im = std::max(std::abs(w1.imag()), std::abs(w2.imag()));
    if (r.rounded && im < 1e-6) return r;
  }
  if (im >= 1e-6)
    fail(ErrorKind::NonRealWinding,
         "winding keeps an imaginary part " + std::to_string(im) + " at n_k = " + std::to_string(r.n_k));
  fail(ErrorKind::QuantizationFailure,
       "winding pair not quantized at n_k = " + std::to_string(r.n_k) + " (residual " +
           std::to_string(r.residual) + ")");
}

std::vector<Closing> phase_boundary_scan(const ModelParams& base, Axis axis, double lo, double hi,
                                         const ScanOptions& opt) {
  if (opt.n_samples < 100) fail(ErrorKind::InvalidArgument, "phase_boundary_scan: n_samples must be >= 100");
  if (!(hi > lo)) fail(ErrorKind::InvalidArgument, "phase_boundary_scan: empty range");
  const int n = opt.n_samples;
  auto at = [&](double x) { return gap_functions_bulk(with_axis(base, axis, x), opt.gap_n_k); };

  std::vector<double> xs(n);
  std::vector<GapPair> gs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = lo + (hi - lo) * i / (n - 1);
    gs[i] = at(xs[i]);
  }

  std::vector<Closing> found;
  for (int which = 0; which < 2; ++which) {
    auto g = [&](const GapPair& gp) { return which == 0 ? gp.delta_0 : gp.delta_pi; };
    for (int i = 0; i < n; ++i) {
      const double gi = g(gs[i]);
      const bool left_ok = i == 0 || gi < g(gs[i - 1]);
      const bool right_ok = i == n - 1 || gi <= g(gs[i + 1]);
      if (!left_ok || !right_ok) continue;
      // golden-section on [a, b]
      double a = xs[std::max(i - 1, 0)], b = xs[std::min(i + 1, n - 1)];
      const double r = (std::sqrt(5.0) - 1.0) / 2.0;
      double c = b - r * (b - a), d = a + r * (b - a);
      double fc = g(at(c)), fd = g(at(d));
      while (b - a > opt.localize_tol) {
        if (fc < fd) {
          b = d, d = c, fd = fc;
          c = b - r * (b - a);
          fc = g(at(c));
        } else {
          a = c, c = d, fc = fd;
          d = a + r * (b - a);
          fd = g(at(d));
        }
      }
      const double x = 0.5 * (a + b);
      const double gx = std::min({g(at(x)), fc, fd});
      if (gx < opt.report_tol) {
        Closing cl;
        cl.value = x;
        cl.gap = gx;
        (which == 0 ? cl.zero : cl.pi) = true;
        found.push_back(cl);
      }
    }
  }

  std::sort(found.begin(), found.end(), [](const Closing& a, const Closing& b) { return a.value < b.value; });
  std::vector<Closing> merged;
  for (const Closing& c : found) {
    if (!merged.empty() && std::abs(c.value - merged.back().value) < 1e-3) {
      merged.back().zero |= c.zero;
      merged.back().pi |= c.pi;
      merged.back().gap = std::min(merged.back().gap, c.gap);
    } else {
      merged.push_back(c);
    }
  }
  return merged;
}

}  // namespace pqtll
