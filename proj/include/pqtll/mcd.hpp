#pragma once

#include <array>

#include "pqtll/spectra.hpp"

namespace pqtll {

/// Band connections A(slot) = <L|S|i d_k R> at one k, with the bands.
struct BandConnection {
  BandSet bands;
  std::array<cplx, 4> a{};
};

BandConnection band_connection(const ModelParams& p, double k, Frame frame);

/// s = sgn Im eps, +1 for |Im eps| <= 1e-12. Then |exp(2 i s eps)| <= 1.
int propagator_sign(cplx eps);

/// c = A(l,eta) - A(l,-eta) exp(2 i s eps(l,eta) m).
cplx band_mcd_summand(const ModelParams& p, double k, Frame frame, int l, int eta, int m);
cplx band_mcd_summand(const BandConnection& bc, int slot, int m);

/// (1/M) sum_{m=1}^{M} z^m.
cplx cesaro_mean(cplx z, int M);

struct MCDConfig {
  int M = 20;
  int n_k = 512;
  void validate() const;
};

struct MCDResult {
  cplx c1, c2;
  cplx c0, c_pi;
  double im_residual = 0.0;
};

cplx mcd_frame(const ModelParams& p, Frame frame, const MCDConfig& cfg = {});
MCDResult mcd_pair(const ModelParams& p, const MCDConfig& cfg = {});

/// w_alpha = -(1/n_k) sum_k sum_bands A. Independent of the Q-matrix route.
double winding_via_connection(const ModelParams& p, Frame frame, int n_k = 2048);

}  // namespace pqtll
