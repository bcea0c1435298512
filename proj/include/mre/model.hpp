#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mre/errors.hpp"

namespace mre {

/// The k outcome types and their numeric labels f_1..f_k.
class OutcomeModel {
public:
    /// Requires k >= 2, all labels finite, and at least two labels distinct.
    explicit OutcomeModel(std::vector<double> labels);

    std::size_t k() const noexcept { return f_.size(); }
    const std::vector<double>& f() const noexcept { return f_; }
    double f(std::size_t i) const { return f_.at(i); }
    double min_f() const noexcept { return min_f_; }
    double max_f() const noexcept { return max_f_; }

private:
    std::vector<double> f_;
    double min_f_;
    double max_f_;
};

/// Observed counts m = (m_1..m_k) with n = sum m_i. n = 0 means "no data yet";
/// operations that need data (sample_average, sanov_estimate) reject it.
class CountSample {
public:
    explicit CountSample(std::vector<std::int64_t> counts);

    /// All-zero counts for a model of k types.
    static CountSample zeros(std::size_t k);

    std::size_t k() const noexcept { return m_.size(); }
    const std::vector<std::int64_t>& m() const noexcept { return m_; }
    std::int64_t m(std::size_t i) const { return m_.at(i); }
    std::int64_t n() const noexcept { return n_; }

private:
    std::vector<std::int64_t> m_;
    std::int64_t n_;
};

/// Target expected value F for f(theta) = sum f_i theta_i.
struct MomentConstraint {
    double value;

    explicit MomentConstraint(double F);

    /// Feasible iff min f < F < max f, strictly (beta diverges at the extremities).
    bool feasible_for(const OutcomeModel& model) const noexcept;
};

/// A point on the probability simplex: theta_i >= 0, |sum theta_i - 1| <= 1e-12.
/// Inputs outside tolerance are rejected rather than renormalized.
class SimplexPoint {
public:
    static constexpr double sum_tolerance = 1e-12;

    explicit SimplexPoint(std::vector<double> theta);

    std::size_t k() const noexcept { return theta_.size(); }
    const std::vector<double>& theta() const noexcept { return theta_; }
    double operator[](std::size_t i) const { return theta_.at(i); }

private:
    std::vector<double> theta_;
};

/// P(m | theta, n) = n!/(m_1!..m_k!) prod theta_i^{m_i}, computed in log space.
/// Returns 0 when some theta_i = 0 with m_i > 0.
double multinomial_likelihood(const CountSample& counts, const SimplexPoint& theta);

/// (1/n) sum f_i m_i. Throws EmptySampleError when n = 0.
double sample_average(const OutcomeModel& model, const CountSample& counts);

/// sum p_i log(p_i/q_i) with 0 log 0 = 0; natural log. Both inputs must be
/// normalized within 1e-9 and q must carry mass wherever p does.
double relative_entropy(std::span<const double> p, std::span<const double> q);

}  // namespace mre
