#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include "mre/model.hpp"
#include "mre/zeta.hpp"

namespace mre {

/// Outcome of a one-dimensional multiplier solve.
struct SolveResult {
    double multiplier = 0.0;       // beta or lambda (or eta for the tilted estimate)
    double achieved_moment = 0.0;  // posterior mean of f at the solution
    int iterations = 0;
    double residual = 0.0;  // |achieved_moment - F|
};

struct SolveOptions {
    double tol = 1e-10;  // on the residual
    /// Newton with bisection fallback when true; pure bisection when false
    /// (kept switchable so the two paths can be cross-checked).
    bool use_newton = true;
    /// Bracket growth past this multiplier magnitude aborts with
    /// DivergenceError: the moment is too close to an extremity.
    double multiplier_limit = 1e3;
    ZetaOptions zeta;
};

/// Find beta with d log zeta'/d beta = F for the posterior built on `counts`.
/// The moment map is strictly increasing (its slope is the posterior variance
/// of f), so the root is unique.
SolveResult solve_beta(const OutcomeModel& model, const CountSample& counts, double F,
                       const SolveOptions& opts = {});

/// Same machinery with zero counts: the data-free MaxEnt stage,
/// Z_1(lambda) = zeta'(lambda; m = 0).
SolveResult solve_lambda_maxent(const OutcomeModel& model, double F, const SolveOptions& opts = {});

/// (F, beta) pairs for plotting the multiplier-vs-moment relationship.
/// Every grid entry must be feasible; solves are independent of grid order.
std::vector<std::pair<double, double>> beta_curve(const OutcomeModel& model,
                                                  const CountSample& counts,
                                                  std::span<const double> F_grid,
                                                  const SolveOptions& opts = {});

namespace detail {

/// Scalar root solve of moment(x) = F for a strictly increasing moment map.
/// Newton steps use a centered finite difference with h = 1e-5 max(1, |x|);
/// a step that leaves the bracket or fails to shrink the residual falls back
/// to bisection. The bracket grows geometrically from [-1, 1], capped at
/// opts.multiplier_limit.
template <class MomentFn>
SolveResult solve_monotone_moment(MomentFn&& moment, double F, const SolveOptions& opts) {
    double lo = -1.0;
    double hi = 1.0;
    double g_lo = moment(lo);
    double g_hi = moment(hi);
    while (g_lo > F) {
        if (lo <= -opts.multiplier_limit) {
            std::ostringstream msg;
            msg << "multiplier bracket exceeded -" << opts.multiplier_limit
                << "; moment F = " << F << " is too close to an extremity";
            throw DivergenceError(msg.str());
        }
        hi = lo;
        g_hi = g_lo;
        lo = std::max(lo * 2.0, -opts.multiplier_limit);
        g_lo = moment(lo);
    }
    while (g_hi < F) {
        if (hi >= opts.multiplier_limit) {
            std::ostringstream msg;
            msg << "multiplier bracket exceeded " << opts.multiplier_limit
                << "; moment F = " << F << " is too close to an extremity";
            throw DivergenceError(msg.str());
        }
        lo = hi;
        g_lo = g_hi;
        hi = std::min(hi * 2.0, opts.multiplier_limit);
        g_hi = moment(hi);
    }

    double x = (lo < 0.0 && hi > 0.0) ? 0.0 : 0.5 * (lo + hi);
    double g = moment(x);
    double resid = g - F;
    int iterations = 0;
    while (std::abs(resid) > opts.tol) {
        if (++iterations > 200) {
            throw DivergenceError("multiplier solve did not converge in 200 iterations");
        }
        (resid < 0.0 ? lo : hi) = x;
        if (hi - lo < 4e-16 * std::max(1.0, std::abs(lo) + std::abs(hi))) {
            throw DivergenceError("multiplier bracket collapsed before reaching tolerance");
        }

        bool newton = false;
        double candidate = 0.5 * (lo + hi);
        if (opts.use_newton) {
            const double h = 1e-5 * std::max(1.0, std::abs(x));
            const double deriv = (moment(x + h) - moment(x - h)) / (2.0 * h);
            if (std::isfinite(deriv) && deriv > 0.0) {
                const double step = x - resid / deriv;
                if (step > lo && step < hi) {
                    candidate = step;
                    newton = true;
                }
            }
        }
        double g_c = moment(candidate);
        double r_c = g_c - F;
        if (newton && std::abs(r_c) >= std::abs(resid)) {
            // keep what the failed step taught us about the bracket, then bisect
            (r_c < 0.0 ? lo : hi) = candidate;
            candidate = 0.5 * (lo + hi);
            g_c = moment(candidate);
            r_c = g_c - F;
        }
        x = candidate;
        g = g_c;
        resid = r_c;
    }
    return SolveResult{x, g, iterations, std::abs(resid)};
}

}  // namespace detail

}  // namespace mre
