#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mre/model.hpp"
#include "mre/solver.hpp"
#include "mre/zeta.hpp"

namespace mre {

enum class UpdateMode { simultaneous, sequential, bayes, maxent };

const char* to_string(UpdateMode m) noexcept;

/// A fully solved posterior on the simplex. Every mode is a member of one
/// density family with respect to d theta_1 .. d theta_{k-1}:
///
///     p(theta) = e^{mu f(theta)} prod_i theta_i^{m_i} / normalizer
///
/// simultaneous: mu = beta solved against the observed counts;
/// sequential:   mu = lambda solved with zero counts, counts kept in the density
///               (the moment holds for the intermediate stage, not the output);
/// bayes:        mu = 0, counts kept;
/// maxent:       mu = lambda, no counts.
///
/// The multinomial coefficient is omitted from densities and normalizers
/// throughout; it cancels in every reported quantity.
struct PosteriorSpec {
    UpdateMode mode;
    OutcomeModel model;
    std::optional<CountSample> counts;   // absent in maxent mode
    double multiplier = 0.0;             // beta or lambda; 0 for bayes
    double log_normalizer = 0.0;
    std::optional<MomentConstraint> moment;  // absent in bayes mode
    SolveResult solve;                   // zeroed for bayes
    ZetaEvaluation normalizer_eval;      // method diagnostics

    /// Counts entering the density: the sample, or zeros for maxent.
    const std::vector<std::int64_t>& effective_counts() const noexcept { return effective_; }

    PosteriorSpec(UpdateMode mode_, OutcomeModel model_, std::optional<CountSample> counts_,
                  double multiplier_, std::optional<MomentConstraint> moment_, SolveResult solve_,
                  ZetaEvaluation normalizer_eval_);

private:
    std::vector<std::int64_t> effective_;
};

/// Means plus optional per-coordinate density grids.
struct MarginalSummary {
    std::vector<double> means;
    std::vector<std::vector<std::pair<double, double>>> density_grids;  // may be empty
};

/// Posterior satisfying both the data and the moment constraint:
/// density prop to e^{beta f(theta)} prod theta_i^{m_i} with beta from solve_beta.
PosteriorSpec simultaneous_update(const OutcomeModel& model, const CountSample& counts, double F,
                                  const SolveOptions& opts = {});

/// Two-stage update: lambda solved against the flat prior alone (MaxEnt stage),
/// then the likelihood multiplied in and renormalized. lambda is NOT re-solved,
/// so the output moment generally differs from F.
PosteriorSpec sequential_update(const OutcomeModel& model, const CountSample& counts, double F,
                                const SolveOptions& opts = {});

/// Flat prior times the multinomial likelihood; multiplier 0.
PosteriorSpec bayes_update(const OutcomeModel& model, const CountSample& counts,
                           const SolveOptions& opts = {});

/// No data: density prop to e^{lambda f(theta)}, mean of f equal to F.
PosteriorSpec maxent_update(const OutcomeModel& model, double F, const SolveOptions& opts = {});

/// Normalized density at a simplex point, with respect to the
/// (k-1)-dimensional measure d theta_1 .. d theta_{k-1}.
double posterior_density(const PosteriorSpec& spec, const SimplexPoint& theta);

/// Coordinate means via the index-increment ratio.
MarginalSummary posterior_mean(const PosteriorSpec& spec);

/// Posterior expected value of f(theta) = sum_i f_i <theta_i>.
double moment_check(const PosteriorSpec& spec);

/// Density of theta_index with the other coordinates integrated out, on a
/// uniform grid of `grid_points` abscissas spanning (0, 1). Deterministic
/// integration of the reduced slice; requires k <= 5.
std::vector<std::pair<double, double>> marginal_density_grid(const PosteriorSpec& spec,
                                                             std::size_t index, int grid_points);

/// Same, at caller-chosen abscissas (each strictly inside (0, 1)).
std::vector<std::pair<double, double>> marginal_density_grid(const PosteriorSpec& spec,
                                                             std::size_t index,
                                                             std::span<const double> grid);

}  // namespace mre
