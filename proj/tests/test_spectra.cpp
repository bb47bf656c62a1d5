#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "pqtll/errors.hpp"
#include "pqtll/pauli.hpp"
#include "pqtll/spectra.hpp"

using namespace pqtll;
using pauli::P;
using pauli::st;

namespace {
constexpr double kPi = std::numbers::pi;
ModelParams fig3a(double jyi) { return make_params(0.5 * kPi, cplx(1.5 * kPi, jyi), 4 * kPi, 0.1 * kPi); }
ModelParams fig3b(double jdi) { return make_params(0.5 * kPi, cplx(0.6 * kPi, 6), cplx(4 * kPi, jdi), 0.1 * kPi); }
double max_abs(const MatX& m) { return m.cwiseAbs().maxCoeff(); }
}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("eigendecomposition examples") {
  const EigenSystem id = eig_biorthogonal(MatX::Identity(4, 4));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(id.values(i) - 1.0) < 1e-15);
  CHECK(max_abs(id.left * id.right - MatX::Identity(4, 4)) < 1e-15);

  MatX d = MatX::Zero(2, 2);
  d(0, 0) = 2.0, d(1, 1) = cplx(0, 3);
  const EigenSystem ed = eig_biorthogonal(d);
  for (int i = 0; i < 2; ++i) {
    const int at = std::abs(ed.values(i) - 2.0) < 1e-14 ? 0 : 1;
    CHECK(std::abs(std::abs(ed.right(at, i)) - 1.0) < 1e-14);
    CHECK(std::abs(ed.right(1 - at, i)) < 1e-14);
  }

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int n : {4, 9, 40}) {
    MatX m(n, n);
    for (int i = 0; i < n * n; ++i) m(i / n, i % n) = cplx(g(rng), g(rng));
    const EigenSystem es = eig_biorthogonal(m);
    CHECK(max_abs(es.right * es.values.asDiagonal() * es.left - m) < 1e-11);
    CHECK(max_abs(es.left * es.right - MatX::Identity(n, n)) < 1e-11);
  }
}

TEST_CASE("defective matrix is rejected") {
  MatX j = MatX::Zero(4, 4);
  j(0, 0) = j(1, 1) = 1.0;
  j(0, 1) = 1.0;
  j(2, 2) = 2.0, j(3, 3) = 3.0;
  CHECK_THROWS_AS(eig_biorthogonal(j), Error);
  try {
    eig_biorthogonal(j);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonDiagonalizable);
  }
}

TEST_CASE("degenerate normal operator keeps a well-conditioned eigenbasis") {
  // at k = -pi the second-frame operator reduces to i sz on the sublattice
  const ModelParams p = fig3a(5.6);
  const Mat4 u = floquet_u(p, -kPi, Frame::Second).m;
  CHECK(max_abs(u - kI * st(P::I, P::Z)) < 1e-12);
  const EigenSystem es = eig_biorthogonal(u);
  CHECK(es.condition < 10.0);
  CHECK(max_abs(es.right * es.values.asDiagonal() * es.left - u) < 1e-12);
}

TEST_CASE("quasienergy branch") {
  for (cplx e : quasienergies(BlochMatrix{0, Mat4::Identity()})) CHECK(std::abs(e) < 1e-15);
  auto flat = quasienergies(BlochMatrix{0, Mat4(-kI * st(P::I, P::X))});
  std::sort(flat.begin(), flat.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  CHECK(std::abs(flat[0] + kPi / 2) < 1e-14);
  CHECK(std::abs(flat[1] + kPi / 2) < 1e-14);
  CHECK(std::abs(flat[2] - kPi / 2) < 1e-14);
  CHECK(std::abs(flat[3] - kPi / 2) < 1e-14);
  const cplx scalar = std::exp(0.3) * std::exp(-kI * 1.0);
  for (cplx e : quasienergies(BlochMatrix{0, Mat4(scalar * Mat4::Identity())})) CHECK(std::abs(e - cplx(1.0, 0.3)) < 1e-14);
  CHECK(quasienergy(-1.0).real() == doctest::Approx(kPi));
  CHECK_THROWS_AS(quasienergy(0.0), Error);
}

TEST_CASE("branch consistency and chiral, inversion symmetry of the bands") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const ModelParams p = oracle::random_params(rng, 2.0);
    for (double k = -kPi; k < kPi; k += 0.29) {
      const BlochMatrix u = floquet_u(p, k, Frame::First);
      const auto eps = quasienergies(u);
      std::vector<cplx> back;
      for (cplx e : eps) {
        CHECK(e.real() > -kPi);
        CHECK(e.real() <= kPi);
        back.push_back(std::exp(-kI * e));
      }
      CHECK(oracle::multiset_distance(back, oracle::sorted_eigenvalues(u.m)) < 1e-10);
      CHECK(oracle::chiral_mismatch(eps) < 1e-9);
      CHECK(oracle::multiset_distance(eps, quasienergies(floquet_u(p, -k, Frame::First)), true) < 1e-9);
    }
  }
}

TEST_CASE("hermitian limit has real quasienergies") {
  const ModelParams p = make_params(0.5 * kPi, 1.5 * kPi, 4 * kPi, 0.1 * kPi);
  for (double k = -kPi; k < kPi; k += 0.1)
    for (cplx e : quasienergies(floquet_u(p, k, Frame::Lab))) CHECK(std::abs(e.imag()) < 1e-10);
}

TEST_CASE("band set labelling") {
  const BandSet flat = band_set(make_params(0, kPi, 0, 0), 0.3, Frame::First);
  CHECK(std::abs(flat.eps[band_slot(1, 1)] - kPi / 2) < 1e-12);
  CHECK(std::abs(flat.eps[band_slot(2, 1)] - kPi / 2) < 1e-12);

  std::mt19937_64 rng(4);
  for (const ModelParams& p : {make_params(0.5 * kPi, 1.5 * kPi, 4 * kPi, 0.1 * kPi), fig3a(0.5), fig3a(3.5), fig3b(1.0)})
    for (double k = -3.1; k < kPi; k += 0.23) {
      const BandSet b = band_set(p, k, Frame::Second);
      CHECK(max_abs(b.left * b.right - Mat4::Identity()) < 1e-10);
      for (int l = 1; l <= 2; ++l) {
        const int plus = band_slot(l, 1), minus = band_slot(l, -1);
        CHECK(b.eps[plus].real() > 0.0);
        const cplx sum = b.eps[plus] + b.eps[minus];
        CHECK(std::abs(cplx(std::remainder(sum.real(), 2 * kPi), sum.imag())) < 1e-6);
      }
      CHECK(b.eps[band_slot(1, 1)].real() <= b.eps[band_slot(2, 1)].real());
      if (p.is_hermitian())
        for (cplx e : b.eps) CHECK(std::abs(e.imag()) < 1e-12);
    }
}

TEST_CASE("band set at a closing") {
  // zero quasienergy everywhere
  CHECK_THROWS_AS(band_set(Mat4::Identity(), 0.0), Error);
  // the closing is a square-root cusp in k; a plain 1e-3 grid sees only ~0.02
  double coarse = INFINITY;
  for (double k = -kPi; k < kPi; k += 1e-3)
    for (cplx e : quasienergies(floquet_u(fig3a(1.0857712), k, Frame::First))) coarse = std::min(coarse, gap_to_pi(e));
  const GapPair g = gap_functions_bulk(fig3a(1.0857712));
  CHECK(g.delta_pi < 1e-3);
  CHECK(g.delta_pi < coarse);
}

TEST_CASE("bulk gap functions") {
  const GapPair flat = gap_functions_bulk(make_params(0, kPi, 0, 0), 64);
  CHECK(flat.delta_0 == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(flat.delta_pi == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK_THROWS_AS(gap_functions_bulk(ModelParams{}, 32), Error);

  const GapPair open = gap_functions_bulk(fig3a(0.5), 256);
  CHECK(open.delta_0 > 0.1);
  CHECK(open.delta_pi > 0.1);
  const GapPair d1 = gap_functions_bulk(fig3b(1.86), 256);
  CHECK(std::min(d1.delta_0, d1.delta_pi) < 0.05);
}

TEST_CASE("refined bulk gaps sit below the raw grid minimum and agree across grids") {
  for (const ModelParams& p : {fig3a(0.5), fig3a(2.6), fig3b(2.0)}) {
    const GapPair fine = gap_functions_bulk(p, 1024);
    for (int n = 64; n <= 512; n *= 2) {
      double raw0 = INFINITY, rawpi = INFINITY;
      for (int j = 0; j < n; ++j)
        for (cplx e : quasienergies(floquet_u(p, grid_k(j, n), Frame::Lab))) {
          raw0 = std::min(raw0, gap_to_zero(e));
          rawpi = std::min(rawpi, gap_to_pi(e));
        }
      const GapPair g = gap_functions_bulk(p, n);
      CHECK(g.delta_0 <= raw0 + 1e-12);
      CHECK(g.delta_pi <= rawpi + 1e-12);
      if (n >= 256) {
        CHECK(std::abs(g.delta_0 - fine.delta_0) < 1e-6);
        CHECK(std::abs(g.delta_pi - fine.delta_pi) < 1e-6);
      }
    }
  }
}

TEST_CASE("open-chain gap functions") {
  const GapPair g = gap_functions_obc({0.1, -0.1});
  CHECK(g.delta_0 == doctest::Approx(0.1));
  CHECK(g.delta_pi == doctest::Approx(kPi - 0.1));
  CHECK(gap_functions_obc({0.5, kPi}).delta_pi == 0.0);
  CHECK_THROWS_AS(gap_functions_obc({}), Error);
}

TEST_CASE("stencil transports degenerate clusters") {
  // k = 0 is spin-degenerate in every frame
  const ModelParams p = make_params(0.5 * kPi, 1.5 * kPi, 4 * kPi, 0.1 * kPi);
  const BandStencil st = band_stencil(p, 0.0, Frame::Second);
  for (int side = 0; side < 2; ++side) {
    const Mat4 u = floquet_u(p, side == 0 ? st.delta : -st.delta, Frame::Second).m;
    // the transported Q is the sign function of the shifted operator
    CHECK(max_abs(st.q_shift[side] * st.q_shift[side] - Mat4::Identity()) < 1e-8);
    CHECK(max_abs(st.q_shift[side] * u - u * st.q_shift[side]) < 1e-8);
  }
}

}  // TEST_SUITE
