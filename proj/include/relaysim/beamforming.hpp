// Copyright 2026 The relaysim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Receive/transmit beamformer design for one candidate relay pair (i, j):
// relay i listens to the source while relay j talks to the destination and
// leaks into relay i through H[j][i].
//
// Every scheme returns unit-norm (u, w) and the SINR/SNR they produce. The
// gamma values are always recomputed from (u, w) with sinr_receive /
// snr_transmit, so every scheme is scored by the same formula.

#include <complex>
#include <vector>

#include "relaysim/linalg.hpp"
#include "relaysim/link_rates.hpp"

namespace relaysim {

class Rng;

// Channels and powers seen by one (receiving i, transmitting j) pair.
struct PairChannel {
  const ComplexVector& source;        // h_S[i]
  const ComplexVector& destination;   // h_D[j]
  const ComplexMatrix& interference;  // H[j][i]
  double rho_s;
  double rho_r;
};

struct BeamformerResult {
  ComplexVector u;  // receive, at relay i
  ComplexVector w;  // transmit, at relay j
  double gamma_s = 0.0;
  double gamma_d = 0.0;
  int iterations = 0;  // alternating scheme only
  double beta = 0.0;   // alternating scheme only
};

// Fills gamma_s / gamma_d from (u, w).
void score(BeamformerResult& result, const PairChannel& ch);

// alpha * log2(1 + gamma_s) + (1 - alpha) * log2(1 + gamma_d), no buffer caps.
double unbuffered_objective(const BeamformerResult& result, double alpha);

// MRC receive, MRT transmit. gamma_s still includes the IRI these beams let
// through.
BeamformerResult bf_iri_free(const PairChannel& ch);

// MRC receive; transmit = h_D projected onto the null space of g = H^H u.
// Throws UnsupportedConfigurationError for M = 1.
BeamformerResult bf_zf(const PairChannel& ch);

// MRT transmit; max-SINR (MMSE) receive against the rank-1 interferer H w.
BeamformerResult bf_mmse(const PairChannel& ch);

// Random orthonormal (u, q); w = H^{-1} q / ||H^{-1} q||, so u^H H w = 0.
// Throws UnsupportedConfigurationError for M = 1 and DegenerateInputError if
// H is numerically singular.
BeamformerResult bf_ob(const PairChannel& ch, Rng& rng);

// Scalar transmit-beam search for fixed u. With w_par the unit vector along
// g = H^H u phased so that h_D^H w_par >= 0, and w_perp the normalized
// projection of h_D off g, the optimal transmit beam is
//   w = beta * w_par + sqrt(1 - beta^2) * w_perp,  beta in [0, 1].
struct BetaProblem {
  double signal = 0.0;              // |u^H h_S|^2
  double interference_gain = 0.0;   // |g^H w_par|^2 = ||g||^2
  Complex dest_parallel = 0.0;      // h_D^H w_par
  Complex dest_orthogonal = 0.0;    // h_D^H w_perp
  double alpha = 0.5;
  double rho_s = 0.0;
  double rho_r = 0.0;
};

double optimal_beta_objective(double beta, const BetaProblem& problem);

struct BetaOptimum {
  double beta = 0.0;
  double objective = 0.0;
};

struct BetaSearchOptions {
  int grid_points = 256;
  int newton_steps = 10;
  double derivative_step = 1e-5;
};

// Uniform grid, then damped Newton refinements from the best grid point.
// `extra_candidate`, when in [0, 1], is evaluated alongside the grid.
BetaOptimum maximize_beta(const BetaProblem& problem, const BetaSearchOptions& options = {},
                          double extra_candidate = -1.0);

// Newton refinement only, from `start`. Never returns a worse point than
// `start`.
BetaOptimum refine_beta_from(const BetaProblem& problem, double start,
                             const BetaSearchOptions& options = {});

// Decomposition of the transmit space against g for a fixed receive beam.
struct TransmitBasis {
  ComplexVector parallel;    // w_par
  ComplexVector orthogonal;  // w_perp
  ComplexVector g;           // H^H u
  bool interference_free = false;  // g == 0: w_par undefined
};

TransmitBasis transmit_basis(const PairChannel& ch, const ComplexVector& u);
BetaProblem beta_problem(const PairChannel& ch, const ComplexVector& u, const TransmitBasis& basis,
                         double alpha);

struct AlternatingOptions {
  double tolerance = 1e-4;
  int max_iterations = 1000;
  bool dual_start = true;  // also start from the MMSE pair, keep the better
  // When false the beta grid runs on the first iteration and on a final
  // confirming iteration, with warm Newton refinement in between. The
  // confirming iteration guarantees the reported beta is grid-optimal for the
  // final receive beam either way.
  bool grid_every_iteration = false;
  BetaSearchOptions beta;
};

// Alternating receive/transmit optimization from a given starting pair.
// `trace`, if non-null, receives the weighted objective of the starting pair
// followed by one entry per iteration.
BeamformerResult alternate_from(const PairChannel& ch, double alpha, ComplexVector u0,
                                ComplexVector w0, const AlternatingOptions& options = {},
                                std::vector<double>* trace = nullptr);

// Weighted-sum-rate beamformer pair: alternating optimization started from
// the ZF pair (and, with dual_start, from the MMSE pair). For M = 1 the
// transmit beam is a pure phase and MRT is forced.
BeamformerResult bf_optimal(const PairChannel& ch, double alpha,
                            const AlternatingOptions& options = {});

// alpha_receive * C_S + (1 - alpha_transmit) * C_D with buffer-capped rates.
double weighted_objective(const BeamformerResult& result, double alpha_receive,
                          double alpha_transmit, const BufferState& buf, int i, int j);

inline double weighted_objective(const BeamformerResult& result, double alpha,
                                 const BufferState& buf, int i, int j) {
  return weighted_objective(result, alpha, alpha, buf, i, j);
}

}  // namespace relaysim
