// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "pqtll/errors.hpp"
#include "pqtll/figures.hpp"
#include "pqtll/mcd.hpp"
#include "pqtll/model.hpp"
#include "pqtll/obc.hpp"
#include "pqtll/pauli.hpp"
#include "pqtll/spectra.hpp"
#include "pqtll/topology.hpp"

using namespace pqtll;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("%s %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

void show(const FigureReport& r) {
  for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

double rel_err(const MatX& a, const MatX& b) { return (a - b).norm() / std::max(1.0, b.norm()); }

// interior point of every gapped interval of the J_y^i scan
const std::vector<double> kMidpoints{0.55, 1.6, 2.58, 3.5, 4.5, 5.76, 6.74};

ModelParams fig3a(double jyi) { return with_axis(presets::fig3a_base(), Axis::JYI, jyi); }
ModelParams fig3b(double jdi) { return with_axis(presets::fig3b_base(), Axis::JDI, jdi); }

}  // namespace

int main(int argc, char** argv) {
  const int workers = argc > 1 ? std::atoi(argv[1]) : std::max(1u, std::thread::hardware_concurrency());
  using clock = std::chrono::steady_clock;

  // A1, single threaded with the runtime target
  {
    const auto t0 = clock::now();
    const FigureReport r = verify_figure("fig3a");
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    show(r);
    report("A1", r.pass && secs < 120, fmt("six closings of the J_y^i scan, %.1f s (limit 120 s)", secs));
  }

  {
    const FigureReport r = verify_figure("fig3b");
    show(r);
    report("A2", r.pass, "closings of the J_d^i scan");
  }

  {
    SweepConfig g = presets::fig1_grid(51);
    g.workers = workers;
    const FigureReport r = check_quantized_grid("fig1 51x51", g);
    show(r);
    report("A3", r.pass, "even-integer pairs on the 51x51 grid, >= 3 distinct");
  }

  // A4 and A5 share the bulk-edge runs; the OBC spectra feed A9
  std::vector<BulkEdgeReport> be;
  for (double x : kMidpoints) be.push_back(verify_bulk_edge(fig3a(x), 100, 25));
  {
    bool ok = true;
    for (std::size_t i = 0; i < be.size(); ++i) {
      const auto& r = be[i];
      std::printf("    J_y^i=%.2f  w=(%g,%g)  n=(%d,%d)  raw=(%d,%d)  %s\n", kMidpoints[i], r.k_space.w0,
                  r.k_space.w_pi, r.counts.n0, r.counts.n_pi, r.counts.raw0, r.counts.raw_pi,
                  r.edge_relation ? "ok" : "mismatch");
      ok = ok && r.edge_relation && r.symmetry_ok;
    }
    const auto closings = presets::fig3a_closings();
    for (std::size_t i = 0; i + 1 < be.size(); ++i) {
      const char label = closings[i].label;
      const int d = label == '0' ? be[i + 1].counts.raw0 - be[i].counts.raw0
                                 : be[i + 1].counts.raw_pi - be[i].counts.raw_pi;
      const bool step = d % 4 == 0;
      std::printf("    across %.2f (%s gap): raw count change %d %s\n", closings[i].value,
                  label == '0' ? "0" : "pi", d, step ? "ok" : "not a multiple of 4");
      ok = ok && step;
    }
    report("A4", ok, "|w0| = 2 n0 and |w_pi| = 2 n_pi at N = 100, raw counts step by multiples of 4");
  }

  {
    bool ok = true;
    for (std::size_t i = 0; i < be.size(); ++i) {
      const auto& r = be[i];
      const double d1 = std::abs(r.real_space.w1_rs - r.k_space.w1), d2 = std::abs(r.real_space.w2_rs - r.k_space.w2);
      std::printf("    J_y^i=%.2f  w_rs=(%.4f,%.4f)  w=(%g,%g)  dev=(%.3g,%.3g)\n", kMidpoints[i], r.real_space.w1_rs,
                  r.real_space.w2_rs, r.k_space.w1, r.k_space.w2, d1, d2);
      ok = ok && d1 < 0.05 && d2 < 0.05;
    }
    report("A5", ok, "|w_rs - w| < 0.05 in both frames, N = 100, N_E = 25");
  }

  {
    FigureOptions opt;
    opt.workers = workers;
    const FigureReport a = verify_figure("fig4a", opt);
    show(a);
    const FigureReport b = verify_figure("fig4b", opt);
    show(b);
    report("A6", a.pass && b.pass, "MCD within 0.2 away from closings at M = 20, converged point within 0.01");
  }

  {
    const Mat4 T = pauli::time_reversal(), C = pauli::particle_hole(), S = pauli::sublattice(), P = pauli::inversion();
    std::mt19937_64 rng(2024);
    double sym = 0.0;
    for (int t = 0; t < 50; ++t) {
      const ModelParams p = oracle::random_params(rng, 2.0);
      for (Frame f : {Frame::First, Frame::Second})
        for (int j = 0; j < 64; ++j) {
          const double k = grid_k(j, 64);
          const Mat4 u = floquet_u(p, k, f).m, um = floquet_u(p, -k, f).m;
          sym = std::max({sym, max_abs(S * u * S - u.inverse()), max_abs(T * u.transpose() * T.inverse() - um),
                          max_abs(C * u.transpose() * C.inverse() - um.inverse()), max_abs(P * u * P.inverse() - um)});
        }
    }
    std::uniform_real_distribution<double> ud(-8, 8);
    double unit = 0.0, im = 0.0;
    for (int t = 0; t < 50; ++t) {
      const ModelParams p = make_params(ud(rng), ud(rng), ud(rng), ud(rng));
      for (Frame f : {Frame::Lab, Frame::First, Frame::Second})
        for (int j = 0; j < 64; ++j) {
          const Mat4 u = floquet_u(p, grid_k(j, 64), f).m;
          unit = std::max(unit, max_abs(u * u.adjoint() - Mat4::Identity()));
          for (cplx e : quasienergies(floquet_u(p, grid_k(j, 64), f))) im = std::max(im, std::abs(e.imag()));
        }
    }
    report("A7", sym < 1e-10 && unit < 1e-10 && im < 1e-10,
           fmt("symmetry residual %.2e, unitarity %.2e, max |Im eps| %.2e (limit 1e-10)", sym, unit, im));
  }

  {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> kd(-kPi, kPi);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const ModelParams p = oracle::random_params(rng, 8 * kPi);
      const double k = kd(rng);
      for (double s : {0.5, 1.0}) {
        worst = std::max(worst, rel_err(expm_closed_h_perp(p, k, s), expm_oracle(s * h_perp(p, k).m)));
        worst = std::max(worst, rel_err(expm_closed_h_parallel(p, k, s), expm_oracle(s * h_parallel(p, k).m)));
      }
    }
    double conn = 0.0;
    int compared = 0;
    std::vector<ModelParams> pts;
    for (double x : kMidpoints) pts.push_back(fig3a(x));
    for (double x : {0.5, 1.5, 2.1, 2.7}) pts.push_back(fig3b(x));
    for (int t = 0; t < 10; ++t) pts.push_back(oracle::random_params(rng, 2.0));
    for (const ModelParams& p : pts)
      for (Frame f : {Frame::First, Frame::Second}) {
        try {
          const double a = winding_number(p, f), b = winding_via_connection(p, f);
          conn = std::max(conn, std::abs(a - b));
          ++compared;
        } catch (const Error&) {
          // one of the two is undefined here
        }
      }
    report("A8", worst < 1e-11 && conn < 1e-3 && compared >= 22,
           fmt("closed form vs oracle %.2e (limit 1e-11), connection vs Q winding %.2e over %d cases (limit 1e-3)",
               worst, conn, compared));
  }

  {
    double pbc = 0.0, obc = 0.0;
    int skipped = 0;
    auto scan = [&](auto make, double lo, double hi) {
      for (int i = 0; i <= 70; ++i) {
        const ModelParams p = make(lo + (hi - lo) * i / 70);
        for (Frame f : {Frame::First, Frame::Second})
          for (int j = 0; j < 128; ++j) {
            try {
              const auto e = quasienergies(floquet_u(p, grid_k(j, 128), f));
              pbc = std::max(pbc, oracle::chiral_mismatch(e));
            } catch (const Error&) {
              ++skipped;
            }
          }
      }
    };
    scan(fig3a, 0.0, 7.0);
    scan(fig3b, 0.0, 3.0);
    std::vector<ModelParams> obc_pts;
    for (double x : kMidpoints) obc_pts.push_back(fig3a(x));
    for (double x : {0.5, 2.1, 2.7}) obc_pts.push_back(fig3b(x));
    for (const ModelParams& p : obc_pts)
      for (Frame f : {Frame::First, Frame::Second})
        obc = std::max(obc, oracle::chiral_mismatch(obc_spectrum(p, 100, f).eps));
    report("A9", pbc < 1e-8 && obc < 1e-8,
           fmt("eps -> -eps mismatch: PBC %.2e (%d defective k skipped), OBC N=100 %.2e (limit 1e-8)", pbc, skipped,
               obc));
  }

  std::printf("%s: %d criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
  return failures ? 1 : 0;
}
