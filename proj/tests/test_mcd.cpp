#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pqtll/errors.hpp"
#include "pqtll/figures.hpp"
#include "pqtll/mcd.hpp"
#include "pqtll/topology.hpp"

using namespace pqtll;

namespace {
constexpr double kPi = std::numbers::pi;
ModelParams fig3a(double jyi) { return with_axis(presets::fig3a_base(), Axis::JYI, jyi); }
ModelParams fig3b(double jdi) { return with_axis(presets::fig3b_base(), Axis::JDI, jdi); }
}  // namespace

TEST_SUITE("mcd") {

TEST_CASE("k-independent model has zero summands") {
  const ModelParams p = make_params(0, cplx(kPi, 0.4), 0, 0);
  for (int l = 1; l <= 2; ++l)
    for (int eta : {1, -1})
      for (int m : {1, 5, 20}) CHECK(std::abs(band_mcd_summand(p, 0.3, Frame::First, l, eta, m)) < 1e-9);
  const MCDResult r = mcd_pair(make_params(0, kPi, 0, 0));
  CHECK(std::abs(r.c0) < 1e-9);
  CHECK(std::abs(r.c_pi) < 1e-9);
}

TEST_CASE("oscillatory factor is bounded") {
  for (const ModelParams& p : {fig3a(0.5), fig3a(3.5), fig3b(2.0)})
    for (double k = -kPi; k < kPi; k += 0.05) {
      const BandSet b = band_set(p, k, Frame::First);
      for (cplx e : b.eps) {
        const cplx z = std::exp(2.0 * kI * double(propagator_sign(e)) * e);
        CHECK(std::abs(z) <= 1.0 + 1e-12);
      }
    }
  CHECK(propagator_sign(cplx(1, 0)) == 1);
  CHECK(propagator_sign(cplx(1, -1e-13)) == 1);
  CHECK(propagator_sign(cplx(1, -1e-9)) == -1);
}

TEST_CASE("cesaro mean") {
  for (cplx z : {cplx(0.3, 0.4), std::exp(kI * 0.7), cplx(0.999999, 0), cplx(1, 0), std::exp(kI * 1e-9)}) {
    for (int M : {1, 7, 20}) {
      cplx direct = 0.0, zm = 1.0;
      for (int m = 1; m <= M; ++m) direct += (zm *= z);
      CHECK(std::abs(cesaro_mean(z, M) - direct / double(M)) < 1e-10);
    }
  }
  // off resonance the average of a unimodular phase decays like 1 / M
  const cplx z = std::exp(kI * 1.3);
  CHECK(std::abs(cesaro_mean(z, 4000)) < 2.0 / (4000 * std::abs(1.0 - z)));
}

TEST_CASE("connection route equals the Q-matrix route") {
  for (const ModelParams& p : {fig3a(0.5), fig3a(2.6), fig3a(4.5), fig3b(1.0), fig3b(2.8),
                               make_params(0.5 * kPi, 0.6 * kPi, 4 * kPi, 0.1 * kPi)})
    for (Frame f : {Frame::First, Frame::Second})
      CHECK(std::abs(winding_via_connection(p, f) - winding_number(p, f)) < 1e-3);
}

TEST_CASE("hermitian connection winding is an even integer") {
  const ModelParams p = make_params(0.5 * kPi, 0.6 * kPi, 4 * kPi, 0.1 * kPi);
  const double w1 = winding_via_connection(p, Frame::First), w2 = winding_via_connection(p, Frame::Second);
  CHECK(std::abs(w1 - std::round(w1)) < 1e-4);
  CHECK(std::abs((w1 + w2) / 2 - 2 * std::round((w1 + w2) / 4)) < 1e-3);
}

TEST_CASE("result relations are exact") {
  const MCDResult r = mcd_pair(fig3a(2.6));
  CHECK(r.c0 == -(r.c1 + r.c2) / 2.0);
  CHECK(r.c_pi == -(r.c1 - r.c2) / 2.0);
  CHECK(r.im_residual == std::max(std::abs(r.c0.imag()), std::abs(r.c_pi.imag())));
}

TEST_CASE("MCD converges in M") {
  for (const ModelParams& p : {fig3a(0.5), fig3b(1.0)}) {
    double prev = INFINITY;
    for (int M = 20; M <= 160; M *= 2) {
      const MCDResult a = mcd_pair(p, {M, 512}), b = mcd_pair(p, {2 * M, 512});
      const double d = std::abs(a.c0 - b.c0) + std::abs(a.c_pi - b.c_pi);
      CHECK(d < prev);
      prev = d;
    }
  }
}

TEST_CASE("imaginary part decays with M") {
  for (const ModelParams& p : {fig3a(0.5), fig3a(2.6), fig3b(1.0)}) {
    const double im20 = mcd_pair(p, {20, 512}).im_residual;
    const double im400 = mcd_pair(p, {400, 512}).im_residual;
    CHECK(im400 < 0.1 * im20);
  }
}

TEST_CASE("converged MCD equals minus the winding") {
  const ModelParams p = fig3b(1.0);
  for (Frame f : {Frame::First, Frame::Second})
    CHECK(std::abs(mcd_frame(p, f, {4000, 1024}) + winding_number(p, f)) < 0.01);
}

TEST_CASE("configuration and gapless handling") {
  CHECK_THROWS_AS(MCDConfig({0, 512}).validate(), Error);
  CHECK_THROWS_AS(MCDConfig({20, 64}).validate(), Error);
  try {
    mcd_frame(ModelParams{}, Frame::First);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GaplessParameters);
  }
}

}  // TEST_SUITE
