#include "mre/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace mre {

OutcomeModel::OutcomeModel(std::vector<double> labels) : f_(std::move(labels)) {
    if (f_.size() < 2) {
        throw ValidationError("OutcomeModel: k >= 2 required, got k = " + std::to_string(f_.size()));
    }
    for (double v : f_) {
        if (!std::isfinite(v)) {
            throw ValidationError("OutcomeModel: all labels must be finite");
        }
    }
    auto [lo, hi] = std::minmax_element(f_.begin(), f_.end());
    min_f_ = *lo;
    max_f_ = *hi;
    if (min_f_ == max_f_) {
        throw ValidationError("OutcomeModel: at least two labels must be distinct");
    }
}

CountSample::CountSample(std::vector<std::int64_t> counts) : m_(std::move(counts)), n_(0) {
    if (m_.empty()) {
        throw ValidationError("CountSample: counts must not be empty");
    }
    for (std::int64_t c : m_) {
        if (c < 0) {
            throw ValidationError("CountSample: counts must be non-negative, got " + std::to_string(c));
        }
        n_ += c;
    }
}

CountSample CountSample::zeros(std::size_t k) {
    return CountSample(std::vector<std::int64_t>(k, 0));
}

MomentConstraint::MomentConstraint(double F) : value(F) {
    if (!std::isfinite(F)) {
        throw ValidationError("MomentConstraint: target must be finite");
    }
}

bool MomentConstraint::feasible_for(const OutcomeModel& model) const noexcept {
    return model.min_f() < value && value < model.max_f();
}

SimplexPoint::SimplexPoint(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.empty()) {
        throw ValidationError("SimplexPoint: point must not be empty");
    }
    double sum = 0.0;
    for (double v : theta_) {
        if (!(v >= 0.0)) {
            throw ValidationError("SimplexPoint: coordinates must be non-negative");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > sum_tolerance) {
        std::ostringstream msg;
        msg << "SimplexPoint: coordinates must sum to 1 within " << sum_tolerance << ", got " << sum;
        throw ValidationError(msg.str());
    }
}

double multinomial_likelihood(const CountSample& counts, const SimplexPoint& theta) {
    if (counts.k() != theta.k()) {
        throw DimensionError("multinomial_likelihood: counts and point have different lengths");
    }
    double log_p = std::lgamma(static_cast<double>(counts.n()) + 1.0);
    for (std::size_t i = 0; i < counts.k(); ++i) {
        const auto mi = counts.m()[i];
        log_p -= std::lgamma(static_cast<double>(mi) + 1.0);
        if (mi > 0) {
            if (theta[i] == 0.0) {
                return 0.0;
            }
            log_p += static_cast<double>(mi) * std::log(theta[i]);
        }
    }
    return std::exp(log_p);
}

double sample_average(const OutcomeModel& model, const CountSample& counts) {
    if (model.k() != counts.k()) {
        throw DimensionError("sample_average: model and counts have different lengths");
    }
    if (counts.n() == 0) {
        throw EmptySampleError("sample_average: n = 0");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < model.k(); ++i) {
        s += model.f()[i] * static_cast<double>(counts.m()[i]);
    }
    return s / static_cast<double>(counts.n());
}

double relative_entropy(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DimensionError("relative_entropy: distributions have different lengths");
    }
    constexpr double norm_tol = 1e-9;
    const double sp = std::accumulate(p.begin(), p.end(), 0.0);
    const double sq = std::accumulate(q.begin(), q.end(), 0.0);
    if (std::abs(sp - 1.0) > norm_tol || std::abs(sq - 1.0) > norm_tol) {
        throw ValidationError("relative_entropy: inputs must be normalized within 1e-9");
    }
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0 || q[i] < 0.0) {
            throw ValidationError("relative_entropy: probabilities must be non-negative");
        }
        if (p[i] > 0.0) {
            if (q[i] == 0.0) {
                throw SupportError("relative_entropy: p has mass at index " + std::to_string(i) +
                                   " where q has none");
            }
            d += p[i] * std::log(p[i] / q[i]);
        }
    }
    return d;
}

}  // namespace mre
