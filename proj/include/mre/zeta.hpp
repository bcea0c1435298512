#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mre/model.hpp"

namespace mre {

enum class ZetaMethod { series, quadrature, monte_carlo };

const char* to_string(ZetaMethod m) noexcept;

/// A normalizer value zeta'(beta; m, f) = integral over the simplex of
/// prod_i e^{beta f_i theta_i} theta_i^{m_i}, carried as its natural log.
struct ZetaEvaluation {
    double log_value = 0.0;
    ZetaMethod method = ZetaMethod::series;
    /// Absolute error estimate on log_value.
    double error_estimate = 0.0;
    /// Series terms summed, quadrature nodes visited, or Monte Carlo samples.
    std::int64_t terms_or_nodes = 0;
};

/// Knobs for the automatic evaluator and the individual strategies.
struct ZetaOptions {
    double series_tol = 1e-14;
    std::int64_t series_term_budget = 1'000'000;  // per nested sum
    int quadrature_level = 0;                     // 0 = pick by k
    std::int64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 0;
};

/// Nodes per dimension at a given level: 8 * 2^level (level 1 -> 16, 2 -> 32,
/// 3 -> 64, ...). Total node count is per-dimension count to the power k-1.
int quadrature_nodes_per_dim(int level) noexcept;

/// Default level by dimension, sized so the finer comparison run stays cheap:
/// 3 for k <= 3, 2 for k = 4, 1 for k = 5.
int default_quadrature_level(std::size_t k) noexcept;

/// Deterministic tensor Gauss-Legendre quadrature on the unit cube mapped to
/// the simplex by the triangular substitution theta_j = u_j prod_{i<j}(1-u_i).
/// Runs at `level` and `level+1`; reports the finer value and their gap as the
/// error estimate. Only k <= 5.
ZetaEvaluation zeta_quadrature(const OutcomeModel& model, const CountSample& counts, double beta,
                               int level);

/// Nested hypergeometric series  zeta' = e^{beta f_k} I_1(I_2(...(I_{k-1})))
/// with  I_j = Gamma(b_j - a_j) sum_q Gamma(a_j+q)/(Gamma(b_j+q) q!) t_j^q I_{j+1},
/// t_j = beta (f_{k-j} - f_k), a_j = m_{k-j} + 1,
/// b_j = n + j + 1 + sum_{i<j} q_i - sum_{i=1}^{k-j-1} m_i.
/// Types are permuted internally (extremal label last) so every t_j >= 0 and
/// all terms are positive; zeta' is permutation-invariant so the value is
/// unchanged. Each sum stops once the relative contribution of the last term
/// stays below tol for 3 consecutive terms.
ZetaEvaluation zeta_nested_series(const OutcomeModel& model, const CountSample& counts, double beta,
                                  double tol = 1e-14);

/// Plain Monte Carlo: uniform simplex points from normalized unit-rate
/// exponentials, integrand averaged and scaled by the simplex volume
/// 1/(k-1)!. Reproducible for a given seed.
ZetaEvaluation zeta_monte_carlo(const OutcomeModel& model, const CountSample& counts, double beta,
                                std::int64_t samples, std::uint64_t seed);

/// Strategy selection: series while its term count stays small, quadrature
/// for k <= 5 once the tilt gets large, Monte Carlo beyond.
ZetaEvaluation evaluate_zeta(const OutcomeModel& model, const CountSample& counts, double beta,
                             const ZetaOptions& opts = {});

/// Posterior mean of theta_index under the density prop to
/// e^{beta f(theta)} prod theta_i^{m_i}:  zeta'(beta; m + e_index) / zeta'(beta; m)
/// for index < k-1; the last coordinate is 1 minus the others.
double mean_via_ratio(const OutcomeModel& model, const CountSample& counts, double beta,
                      std::size_t index, const ZetaOptions& opts = {});

/// All k means at once (shared base evaluation, last via complement).
std::vector<double> means_via_ratio(const OutcomeModel& model, const CountSample& counts,
                                    double beta, const ZetaOptions& opts = {});

namespace detail {

/// Raw-array core used by the marginal-density path, where the reduced label
/// set may be degenerate (k = 1 or all labels equal). No invariant checks.
ZetaEvaluation log_zeta_auto(std::span<const double> f, std::span<const std::int64_t> m,
                             double beta, const ZetaOptions& opts);

ZetaEvaluation log_zeta_quadrature(std::span<const double> f, std::span<const std::int64_t> m,
                                   double beta, int level);

ZetaEvaluation log_zeta_series(std::span<const double> f, std::span<const std::int64_t> m,
                               double beta, double tol, std::int64_t term_budget);

ZetaEvaluation log_zeta_monte_carlo(std::span<const double> f, std::span<const std::int64_t> m,
                                    double beta, std::int64_t samples, std::uint64_t seed);

std::vector<double> means_via_ratio_raw(std::span<const double> f,
                                        std::span<const std::int64_t> m, double beta,
                                        const ZetaOptions& opts);

}  // namespace detail

}  // namespace mre
