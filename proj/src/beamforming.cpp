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

#include "relaysim/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaysim/errors.hpp"
#include "relaysim/rng.hpp"

namespace relaysim {
namespace {

// Relative size below which g = H^H u is treated as exactly zero.
constexpr double kNegligibleInterference = 1e-14;
// Relative size below which h_D is treated as lying entirely along g.
constexpr double kNegligibleProjection = 1e-12;
// Pivot ratio above which the inter-relay matrix counts as singular.
constexpr double kMaxCondition = 1e12;

void require_nonzero(const ComplexVector& v, const char* what) {
  if (!(norm(v) > 0.0)) throw DegenerateInputError(std::string(what) + " is the zero vector");
}

BeamformerResult scored(ComplexVector u, ComplexVector w, const PairChannel& ch) {
  BeamformerResult r;
  r.u = std::move(u);
  r.w = std::move(w);
  score(r, ch);
  return r;
}

bool interference_free(const ComplexVector& g, const ComplexMatrix& h) {
  return !(norm(g) > kNegligibleInterference * h.frobenius_norm());
}

ComplexVector combine(double beta, const ComplexVector& parallel, const ComplexVector& orthogonal) {
  const double ortho = std::sqrt(std::max(0.0, 1.0 - beta * beta));
  ComplexVector w = parallel * Complex(beta);
  for (std::size_t m = 0; m < w.size(); ++m) w[m] += ortho * orthogonal[m];
  // Exactly unit in exact arithmetic; renormalize to absorb rounding.
  return normalize(w);
}

}  // namespace

void score(BeamformerResult& result, const PairChannel& ch) {
  result.gamma_s = sinr_receive(ch.source, ch.interference, result.u, result.w, ch.rho_s, ch.rho_r);
  result.gamma_d = snr_transmit(ch.destination, result.w, ch.rho_r);
}

double unbuffered_objective(const BeamformerResult& result, double alpha) {
  return alpha * shannon_rate(result.gamma_s) + (1.0 - alpha) * shannon_rate(result.gamma_d);
}

BeamformerResult bf_iri_free(const PairChannel& ch) {
  require_nonzero(ch.source, "h_S");
  require_nonzero(ch.destination, "h_D");
  return scored(normalize(ch.source), normalize(ch.destination), ch);
}

BeamformerResult bf_zf(const PairChannel& ch) {
  if (ch.source.size() < 2) throw UnsupportedConfigurationError("ZF beamforming needs M >= 2");
  require_nonzero(ch.source, "h_S");
  require_nonzero(ch.destination, "h_D");
  ComplexVector u = normalize(ch.source);
  const ComplexVector g = matvec_herm(ch.interference, u);
  if (interference_free(g, ch.interference)) return scored(std::move(u), normalize(ch.destination), ch);

  const ComplexVector projected = project_orthogonal(ch.destination, g);
  if (!(norm(projected) > kNegligibleProjection * norm(ch.destination))) {
    // h_D lies along g: any null-space direction, transmit gain is lost.
    return scored(std::move(u), unit_orthogonal_to(g), ch);
  }
  return scored(std::move(u), normalize(projected), ch);
}

BeamformerResult bf_mmse(const PairChannel& ch) {
  require_nonzero(ch.source, "h_S");
  require_nonzero(ch.destination, "h_D");
  ComplexVector w = normalize(ch.destination);
  const ComplexVector leak = matvec(ch.interference, w);
  ComplexVector u = normalize(rank1_mmse_direction(leak, ch.rho_r, ch.source));
  return scored(std::move(u), std::move(w), ch);
}

BeamformerResult bf_ob(const PairChannel& ch, Rng& rng) {
  const std::size_t m = ch.source.size();
  if (m < 2) throw UnsupportedConfigurationError("orthonormal-basis beamforming needs M >= 2");
  const LuDecomposition lu(ch.interference);
  // Redrawing q cannot repair a singular H, so there is nothing to retry.
  if (lu.singular() || lu.pivot_condition() > kMaxCondition) {
    throw DegenerateInputError("orthonormal-basis beamforming: inter-relay channel is singular");
  }
  auto [u, q] = random_orthonormal_pair(m, rng);
  ComplexVector w = normalize(lu.solve(q));
  return scored(std::move(u), std::move(w), ch);
}

namespace {

// optimal_beta_objective with the beta-independent parts hoisted out, in real
// arithmetic. The grid search evaluates this hundreds of times per iteration.
struct BetaCurve {
  explicit BetaCurve(const BetaProblem& p)
      : signal(p.rho_s * p.signal),
        leak(p.rho_r * p.interference_gain),
        par(p.rho_r * std::norm(p.dest_parallel)),
        orth(p.rho_r * std::norm(p.dest_orthogonal)),
        cross(2.0 * p.rho_r * (std::conj(p.dest_parallel) * p.dest_orthogonal).real()),
        alpha(p.alpha) {}

  double operator()(double beta, double ortho) const {
    const double b2 = beta * beta;
    const double sinr = signal / (leak * b2 + 1.0);
    const double snr = std::max(0.0, par * b2 + orth * ortho * ortho + cross * beta * ortho);
    return alpha * std::log2(1.0 + sinr) + (1.0 - alpha) * std::log2(1.0 + snr);
  }
  double operator()(double beta) const { return (*this)(beta, std::sqrt(std::max(0.0, 1.0 - beta * beta))); }

  double signal, leak, par, orth, cross, alpha;
};

}  // namespace

double optimal_beta_objective(double beta, const BetaProblem& p) {
  const double ortho = std::sqrt(std::max(0.0, 1.0 - beta * beta));
  const double sinr = p.rho_s * p.signal / (p.rho_r * beta * beta * p.interference_gain + 1.0);
  const double snr = p.rho_r * std::norm(beta * p.dest_parallel + ortho * p.dest_orthogonal);
  return p.alpha * std::log2(1.0 + sinr) + (1.0 - p.alpha) * std::log2(1.0 + snr);
}

namespace {

// Damped Newton refinement with central differences, starting from `best`.
BetaOptimum refine_beta(const BetaCurve& f, BetaOptimum best, const BetaSearchOptions& options) {
  const double h = options.derivative_step;
  for (int step = 0; step < options.newton_steps; ++step) {
    // Keep the difference stencil inside [0, 1].
    const double c = std::clamp(best.beta, h, 1.0 - h);
    const double f_lo = f(c - h);
    const double f_mid = f(c);
    const double f_hi = f(c + h);
    const double d1 = (f_hi - f_lo) / (2.0 * h);
    const double d2 = (f_hi - 2.0 * f_mid + f_lo) / (h * h);
    if (!(d2 < 0.0)) break;  // not locally concave: Newton would walk downhill

    const double full = -d1 / d2;
    bool improved = false;
    for (double damping = 1.0; damping >= 1.0 / 64.0; damping *= 0.5) {
      const double candidate = best.beta + damping * full;
      if (candidate < 0.0 || candidate > 1.0) continue;
      const double value = f(candidate);
      if (value > best.objective) {
        best = {candidate, value};
        improved = true;
        break;
      }
    }
    if (!improved || std::abs(full) < 1e-12) break;
  }
  return best;
}

}  // namespace

BetaOptimum maximize_beta(const BetaProblem& problem, const BetaSearchOptions& options,
                          double extra_candidate) {
  const BetaCurve f(problem);
  const int n = std::max(2, options.grid_points);
  BetaOptimum best{0.0, f(0.0, 1.0)};
  for (int k = 1; k < n; ++k) {
    const double beta = static_cast<double>(k) / (n - 1);
    const double value = f(beta);
    if (value > best.objective) best = {beta, value};
  }
  if (extra_candidate >= 0.0 && extra_candidate <= 1.0) {
    const double value = f(extra_candidate);
    if (value > best.objective) best = {extra_candidate, value};
  }
  best = refine_beta(f, best, options);
  // Report the value on the reference formula so callers compare like with like.
  best.objective = optimal_beta_objective(best.beta, problem);
  return best;
}

BetaOptimum refine_beta_from(const BetaProblem& problem, double start,
                             const BetaSearchOptions& options) {
  const BetaCurve f(problem);
  start = std::clamp(start, 0.0, 1.0);
  BetaOptimum best = refine_beta(f, {start, f(start)}, options);
  best.objective = optimal_beta_objective(best.beta, problem);
  return best;
}

TransmitBasis transmit_basis(const PairChannel& ch, const ComplexVector& u) {
  TransmitBasis basis;
  basis.g = matvec_herm(ch.interference, u);
  if (interference_free(basis.g, ch.interference)) {
    basis.interference_free = true;
    return basis;
  }
  const ComplexVector g_unit = normalize(basis.g);
  const Complex along = herm_inner(g_unit, ch.destination);
  basis.parallel = std::abs(along) > 0.0 ? g_unit * (along / std::abs(along)) : g_unit;

  if (ch.destination.size() < 2) {
    basis.orthogonal = ComplexVector(ch.destination.size());
    return basis;
  }
  const ComplexVector projected = project_orthogonal(ch.destination, basis.g);
  basis.orthogonal = norm(projected) > kNegligibleProjection * norm(ch.destination)
                         ? normalize(projected)
                         : unit_orthogonal_to(basis.g);
  return basis;
}

BetaProblem beta_problem(const PairChannel& ch, const ComplexVector& u, const TransmitBasis& basis,
                         double alpha) {
  BetaProblem p;
  p.signal = std::norm(herm_inner(u, ch.source));
  p.interference_gain = std::norm(herm_inner(basis.g, basis.parallel));
  p.dest_parallel = herm_inner(ch.destination, basis.parallel);
  p.dest_orthogonal = herm_inner(ch.destination, basis.orthogonal);
  p.alpha = alpha;
  p.rho_s = ch.rho_s;
  p.rho_r = ch.rho_r;
  return p;
}

BeamformerResult alternate_from(const PairChannel& ch, double alpha, ComplexVector u0,
                                ComplexVector w0, const AlternatingOptions& options,
                                std::vector<double>* trace) {
  require_nonzero(ch.source, "h_S");
  require_nonzero(ch.destination, "h_D");
  const bool scalar = ch.source.size() < 2;

  BeamformerResult current = scored(std::move(u0), std::move(w0), ch);
  if (trace) trace->push_back(unbuffered_objective(current, alpha));

  bool global_search = true;
  for (int it = 1; it <= options.max_iterations; ++it) {
    // Receive step: max-SINR against the current transmit leak.
    ComplexVector u = normalize(rank1_mmse_direction(matvec(ch.interference, current.w), ch.rho_r,
                                                     ch.source));
    // Transmit step: best beta for the new receive beam.
    ComplexVector w;
    double beta = 0.0;
    bool searched_globally = true;
    if (scalar) {
      w = normalize(ch.destination);
      beta = 1.0;
    } else {
      const TransmitBasis basis = transmit_basis(ch, u);
      if (basis.interference_free) {
        w = normalize(ch.destination);
      } else {
        const BetaProblem problem = beta_problem(ch, u, basis, alpha);
        // The previous beam's component along g: its value on the beta curve
        // bounds the previous objective from above, so starting from it keeps
        // the iteration monotone.
        const double previous =
            std::clamp(std::abs(herm_inner(basis.parallel, current.w)), 0.0, 1.0);
        searched_globally = global_search || options.grid_every_iteration;
        beta = searched_globally ? maximize_beta(problem, options.beta, previous).beta
                                 : refine_beta_from(problem, previous, options.beta).beta;
        w = combine(beta, basis.parallel, basis.orthogonal);
      }
    }

    const double du = norm(u - current.u);
    const double dw = norm(w - current.w);
    current.u = std::move(u);
    current.w = std::move(w);
    current.beta = beta;
    current.iterations = it;
    score(current, ch);
    if (trace) trace->push_back(unbuffered_objective(current, alpha));
    global_search = false;
    if (du < options.tolerance && dw < options.tolerance) {
      if (searched_globally) break;
      // Confirm the fixed point with one fully searched iteration.
      global_search = true;
    }
  }
  return current;
}

BeamformerResult bf_optimal(const PairChannel& ch, double alpha, const AlternatingOptions& options) {
  require_nonzero(ch.source, "h_S");
  require_nonzero(ch.destination, "h_D");
  if (ch.source.size() < 2) {
    return alternate_from(ch, alpha, normalize(ch.source), normalize(ch.destination), options);
  }
  const BeamformerResult zf = bf_zf(ch);
  BeamformerResult best = alternate_from(ch, alpha, zf.u, zf.w, options);
  if (options.dual_start) {
    const BeamformerResult mmse = bf_mmse(ch);
    BeamformerResult other = alternate_from(ch, alpha, mmse.u, mmse.w, options);
    if (unbuffered_objective(other, alpha) > unbuffered_objective(best, alpha)) best = std::move(other);
  }
  return best;
}

double weighted_objective(const BeamformerResult& result, double alpha_receive,
                          double alpha_transmit, const BufferState& buf, int i, int j) {
  if (i == j) throw PreconditionError("weighted_objective: i and j must differ");
  return alpha_receive * inst_rate_receive(result.gamma_s, buf, i) +
         (1.0 - alpha_transmit) * inst_rate_transmit(result.gamma_d, buf, j);
}

}  // namespace relaysim
