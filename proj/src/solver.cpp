#include "mre/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mre {

namespace {

void check_feasible(const OutcomeModel& model, double F, const char* where) {
    if (!(model.min_f() < F && F < model.max_f())) {
        std::ostringstream msg;
        msg << where << ": F = " << F << " outside the feasible interval (" << model.min_f()
            << ", " << model.max_f() << ")";
        throw InfeasibleMomentError(msg.str());
    }
}

double posterior_moment(const OutcomeModel& model, std::span<const std::int64_t> m, double beta,
                        const ZetaOptions& zopts) {
    const auto means = detail::means_via_ratio_raw(model.f(), m, beta, zopts);
    double s = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) s += model.f()[i] * means[i];
    return s;
}

}  // namespace

SolveResult solve_beta(const OutcomeModel& model, const CountSample& counts, double F,
                       const SolveOptions& opts) {
    if (model.k() != counts.k()) {
        throw DimensionError("solve_beta: model and counts have different lengths");
    }
    check_feasible(model, F, "solve_beta");
    auto moment = [&](double beta) { return posterior_moment(model, counts.m(), beta, opts.zeta); };
    return detail::solve_monotone_moment(moment, F, opts);
}

SolveResult solve_lambda_maxent(const OutcomeModel& model, double F, const SolveOptions& opts) {
    check_feasible(model, F, "solve_lambda_maxent");
    const std::vector<std::int64_t> zeros(model.k(), 0);
    auto moment = [&](double lam) { return posterior_moment(model, zeros, lam, opts.zeta); };
    return detail::solve_monotone_moment(moment, F, opts);
}

std::vector<std::pair<double, double>> beta_curve(const OutcomeModel& model,
                                                  const CountSample& counts,
                                                  std::span<const double> F_grid,
                                                  const SolveOptions& opts) {
    for (std::size_t j = 0; j < F_grid.size(); ++j) {
        if (!(model.min_f() < F_grid[j] && F_grid[j] < model.max_f())) {
            std::ostringstream msg;
            msg << "beta_curve: grid entry " << j << " (F = " << F_grid[j]
                << ") outside the feasible interval (" << model.min_f() << ", " << model.max_f()
                << ")";
            throw InfeasibleMomentError(msg.str());
        }
    }
    std::vector<std::pair<double, double>> out;
    out.reserve(F_grid.size());
    for (const double F : F_grid) {
        out.emplace_back(F, solve_beta(model, counts, F, opts).multiplier);
    }
    return out;
}

}  // namespace mre
