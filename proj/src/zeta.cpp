#include "mre/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace mre {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Gauss-Legendre rules on [0,1]

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

Rule compute_gauss_legendre(int n) {
    Rule r;
    r.x.resize(n);
    r.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            deriv = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / deriv;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // mirror pair, mapped from [-1,1] to [0,1] (weights pick up the 1/2)
        r.x[i] = 0.5 * (1.0 - x);
        r.x[n - 1 - i] = 0.5 * (1.0 + x);
        const double w = 1.0 / ((1.0 - x * x) * deriv * deriv);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

const Rule& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, Rule> cache;
    const std::scoped_lock lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    }
    return it->second;
}

// Streaming log-sum-exp of positive terms.
struct LogAccum {
    double shift = kNegInf;
    double sum = 0.0;

    void add(double log_term) {
        if (log_term == kNegInf) return;
        if (log_term > shift) {
            sum = sum * std::exp(shift - log_term) + 1.0;
            shift = log_term;
        } else {
            sum += std::exp(log_term - shift);
        }
    }
    double log_total() const { return sum > 0.0 ? shift + std::log(sum) : kNegInf; }
};

// ---------------------------------------------------------------------------
// Quadrature: tensor Gauss-Legendre on [0,1]^{k-1} with the triangular map
// theta_j = u_j prod_{i<j}(1-u_i), theta_k = prod_i (1-u_i),
// Jacobian prod_j (1-u_j)^{k-1-j}.

struct QuadState {
    std::span<const double> f;
    std::span<const std::int64_t> m;
    double beta = 0.0;
    const Rule* rule = nullptr;
    std::size_t dims = 0;  // k-1
    LogAccum acc;
};

void quad_recurse(QuadState& s, std::size_t d, double log_w, double log_scale, double tilt,
                  double log_poly) {
    const auto& x = s.rule->x;
    const auto& w = s.rule->w;
    const double jac_exp = static_cast<double>(s.dims - 1 - d);
    for (std::size_t a = 0; a < x.size(); ++a) {
        const double u = x[a];
        const double log_theta = std::log(u) + log_scale;
        double lp = log_poly + jac_exp * std::log1p(-u);
        if (s.m[d] > 0) lp += static_cast<double>(s.m[d]) * log_theta;
        const double tl = tilt + s.beta * s.f[d] * std::exp(log_theta);
        const double lw = log_w + std::log(w[a]);
        if (d + 1 < s.dims) {
            quad_recurse(s, d + 1, lw, log_scale + std::log1p(-u), tl, lp);
        } else {
            const double log_theta_last = log_scale + std::log1p(-u);
            double leaf = lp;
            if (s.m[s.dims] > 0) leaf += static_cast<double>(s.m[s.dims]) * log_theta_last;
            leaf += tl + s.beta * s.f[s.dims] * std::exp(log_theta_last);
            s.acc.add(lw + leaf);
        }
    }
}

double duffy_log_integral(std::span<const double> f, std::span<const std::int64_t> m, double beta,
                          int nodes_per_dim) {
    QuadState s;
    s.f = f;
    s.m = m;
    s.beta = beta;
    s.rule = &gauss_legendre(nodes_per_dim);
    s.dims = f.size() - 1;
    quad_recurse(s, 0, 0.0, 0.0, 0.0, 0.0);
    return s.acc.log_total();
}

// ---------------------------------------------------------------------------
// Nested hypergeometric series, evaluated in log space with a memo over
// (level, accumulated summation index). I_{j+1} depends on the outer indices
// only through their running total Q, which keeps the nesting polynomial.

struct SeriesState {
    std::span<const double> f;        // permuted labels, reference type last
    std::span<const std::int64_t> m;  // permuted counts
    std::vector<std::int64_t> prefix_m;
    std::int64_t n = 0;
    std::size_t k = 0;
    double beta = 0.0;
    double tol = 0.0;
    std::int64_t budget = 0;
    std::int64_t total_terms = 0;
    std::unordered_map<std::uint64_t, double> memo;

    double log_level(std::size_t j, std::int64_t q_total) {
        if (j == k) return 0.0;  // I_k = 1
        const std::uint64_t key = (static_cast<std::uint64_t>(j) << 44) |
                                  static_cast<std::uint64_t>(q_total);
        if (auto it = memo.find(key); it != memo.end()) return it->second;

        const double t = beta * (f[k - j - 1] - f[k - 1]);  // >= 0 after permutation
        const double a = static_cast<double>(m[k - j - 1] + 1);
        const double b =
            static_cast<double>(n + static_cast<std::int64_t>(j) + 1 + q_total - prefix_m[k - j - 1]);
        const double pref = std::lgamma(b - a);

        double val;
        if (t == 0.0) {
            // only the q = 0 term survives in the limit
            val = pref + std::lgamma(a) - std::lgamma(b) + log_level(j + 1, q_total);
            ++total_terms;
        } else {
            const double log_t = std::log(t);
            double shift = kNegInf;
            double sum = 0.0;
            int consecutive_small = 0;
            for (std::int64_t q = 0;; ++q) {
                if (q >= budget) {
                    std::ostringstream msg;
                    msg << "zeta_nested_series: level " << j << " (t = " << t
                        << ") did not meet the stop rule within " << budget << " terms";
                    throw SeriesDivergenceError(msg.str(), static_cast<int>(j), t, q);
                }
                const double lt = std::lgamma(a + static_cast<double>(q)) -
                                  std::lgamma(b + static_cast<double>(q)) -
                                  std::lgamma(static_cast<double>(q) + 1.0) +
                                  static_cast<double>(q) * log_t + log_level(j + 1, q_total + q);
                ++total_terms;
                double rel;
                if (lt > shift) {
                    sum = sum * std::exp(shift - lt) + 1.0;
                    shift = lt;
                    rel = 1.0 / sum;
                } else {
                    const double e = std::exp(lt - shift);
                    sum += e;
                    rel = e / sum;
                }
                if (rel < tol) {
                    if (++consecutive_small >= 3) break;
                } else {
                    consecutive_small = 0;
                }
            }
            val = pref + shift + std::log(sum);
        }
        memo.emplace(key, val);
        return val;
    }
};

// Permutation that moves the extremal label last so every t_j >= 0; zeta' is
// invariant under relabeling, so only the conditioning of the sums changes.
void stabilizing_permutation(std::span<const double> f, std::span<const std::int64_t> m,
                             double beta, std::vector<double>& fp,
                             std::vector<std::int64_t>& mp) {
    const std::size_t k = f.size();
    std::size_t ref = 0;
    for (std::size_t i = 1; i < k; ++i) {
        const bool better = beta >= 0.0 ? f[i] < f[ref] : f[i] > f[ref];
        if (better) ref = i;
    }
    fp.clear();
    mp.clear();
    fp.reserve(k);
    mp.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (i != ref) {
            fp.push_back(f[i]);
            mp.push_back(m[i]);
        }
    }
    fp.push_back(f[ref]);
    mp.push_back(m[ref]);
}

void check_dims(const OutcomeModel& model, const CountSample& counts, const char* where) {
    if (model.k() != counts.k()) {
        throw DimensionError(std::string(where) + ": model and counts have different lengths");
    }
}

// Concrete strategy picked by the automatic evaluator.
struct ResolvedMethod {
    ZetaMethod method = ZetaMethod::series;
    int level = 0;  // quadrature only
};

double tilt_scale(std::span<const double> f, double beta) {
    double fref = beta >= 0.0 ? *std::min_element(f.begin(), f.end())
                              : *std::max_element(f.begin(), f.end());
    double c = 0.0;
    for (double fi : f) c = std::max(c, std::abs(beta * (fi - fref)));
    return c;
}

ResolvedMethod resolve_method(std::span<const double> f, std::span<const std::int64_t> m,
                              double beta, const ZetaOptions& opts) {
    const std::size_t k = f.size();
    const double c = tilt_scale(f, beta);
    const double per_level = c + 48.0;
    double series_cost = 1.0;
    for (std::size_t lev = 1; lev < k; ++lev) {
        series_cost = std::min(series_cost * per_level, 1e18);
    }
    if (series_cost <= 2e5) return {ZetaMethod::series, 0};

    if (k <= 5) {
        const auto n = std::accumulate(m.begin(), m.end(), std::int64_t{0});
        const double need = std::max({64.0, 0.35 * c + 48.0, static_cast<double>(n) / 2.0 + 16.0});
        int level = opts.quadrature_level > 0 ? opts.quadrature_level : 1;
        if (opts.quadrature_level == 0) {
            while (quadrature_nodes_per_dim(level) < need && level < 12) ++level;
        }
        const double fine_nodes =
            std::pow(static_cast<double>(quadrature_nodes_per_dim(level + 1)),
                     static_cast<double>(k - 1));
        if (quadrature_nodes_per_dim(level) >= need && fine_nodes <= 8e6) {
            return {ZetaMethod::quadrature, level};
        }
        // quadrature cannot reach the needed resolution cheaply; the series is
        // slower here but exact
        if (series_cost <= 5e7) return {ZetaMethod::series, 0};
        return {ZetaMethod::monte_carlo, 0};
    }
    if (series_cost <= 5e6) return {ZetaMethod::series, 0};
    return {ZetaMethod::monte_carlo, 0};
}

ZetaEvaluation dispatch(std::span<const double> f, std::span<const std::int64_t> m, double beta,
                        const ResolvedMethod& rm, const ZetaOptions& opts) {
    switch (rm.method) {
        case ZetaMethod::quadrature:
            return detail::log_zeta_quadrature(f, m, beta, rm.level);
        case ZetaMethod::monte_carlo:
            return detail::log_zeta_monte_carlo(f, m, beta, opts.mc_samples, opts.mc_seed);
        case ZetaMethod::series:
        default:
            return detail::log_zeta_series(f, m, beta, opts.series_tol, opts.series_term_budget);
    }
}

}  // namespace

const char* to_string(ZetaMethod m) noexcept {
    switch (m) {
        case ZetaMethod::series: return "series";
        case ZetaMethod::quadrature: return "quadrature";
        case ZetaMethod::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

int quadrature_nodes_per_dim(int level) noexcept { return 8 << level; }

int default_quadrature_level(std::size_t k) noexcept {
    if (k <= 3) return 3;
    if (k == 4) return 2;
    return 1;
}

namespace detail {

ZetaEvaluation log_zeta_quadrature(std::span<const double> f, std::span<const std::int64_t> m,
                                   double beta, int level) {
    if (f.size() == 1) {
        // point simplex: the integral degenerates to e^{beta f_1}
        return {beta * f[0], ZetaMethod::quadrature, 0.0, 1};
    }
    const int n_coarse = quadrature_nodes_per_dim(level);
    const int n_fine = quadrature_nodes_per_dim(level + 1);
    const double coarse = duffy_log_integral(f, m, beta, n_coarse);
    const double fine = duffy_log_integral(f, m, beta, n_fine);
    const std::size_t dims = f.size() - 1;
    std::int64_t nodes = 1;
    for (std::size_t d = 0; d < dims; ++d) nodes *= n_fine;
    ZetaEvaluation out;
    out.log_value = fine;
    out.method = ZetaMethod::quadrature;
    out.error_estimate = std::max(std::abs(fine - coarse), 4e-16);
    out.terms_or_nodes = nodes;
    return out;
}

ZetaEvaluation log_zeta_series(std::span<const double> f, std::span<const std::int64_t> m,
                               double beta, double tol, std::int64_t term_budget) {
    if (f.size() == 1) {
        return {beta * f[0], ZetaMethod::series, 0.0, 1};
    }
    std::vector<double> fp;
    std::vector<std::int64_t> mp;
    stabilizing_permutation(f, m, beta, fp, mp);

    SeriesState s;
    s.f = fp;
    s.m = mp;
    s.k = fp.size();
    s.beta = beta;
    s.tol = tol;
    s.budget = term_budget;
    s.prefix_m.assign(s.k + 1, 0);
    for (std::size_t i = 0; i < s.k; ++i) s.prefix_m[i + 1] = s.prefix_m[i] + mp[i];
    s.n = s.prefix_m[s.k];

    const double log_value = beta * fp[s.k - 1] + s.log_level(1, 0);
    ZetaEvaluation out;
    out.log_value = log_value;
    out.method = ZetaMethod::series;
    out.error_estimate =
        std::max(tol, std::sqrt(static_cast<double>(s.total_terms)) * 1e-16);
    out.terms_or_nodes = s.total_terms;
    return out;
}

ZetaEvaluation log_zeta_monte_carlo(std::span<const double> f, std::span<const std::int64_t> m,
                                    double beta, std::int64_t samples, std::uint64_t seed) {
    const std::size_t k = f.size();
    if (k == 1) {
        return {beta * f[0], ZetaMethod::monte_carlo, 0.0, samples};
    }
    std::mt19937_64 rng(seed);
    // strictly interior uniform deviate, independent of library distributions
    auto unit = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };

    // shift so every integrand value is <= 1
    double shift = beta >= 0.0 ? beta * *std::max_element(f.begin(), f.end())
                               : beta * *std::min_element(f.begin(), f.end());
    const auto n = std::accumulate(m.begin(), m.end(), std::int64_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        if (m[i] > 0) {
            shift += static_cast<double>(m[i]) *
                     std::log(static_cast<double>(m[i]) / static_cast<double>(n));
        }
    }

    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> e(k);
    for (std::int64_t s = 0; s < samples; ++s) {
        double tot = 0.0;
        for (auto& ei : e) {
            ei = -std::log(unit());
            tot += ei;
        }
        const double inv = 1.0 / tot;
        double log_g = -shift;
        for (std::size_t i = 0; i < k; ++i) {
            const double th = e[i] * inv;
            log_g += beta * f[i] * th;
            if (m[i] > 0) log_g += static_cast<double>(m[i]) * std::log(th);
        }
        const double v = std::exp(log_g);
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / static_cast<double>(samples);
    if (!(mean > 0.0)) {
        throw DivergenceError("zeta_monte_carlo: every sample underflowed; integrand too peaked");
    }
    const double var =
        std::max(0.0, (sum_sq - static_cast<double>(samples) * mean * mean) /
                          static_cast<double>(samples - 1));
    const double se = std::sqrt(var / static_cast<double>(samples));

    ZetaEvaluation out;
    out.log_value = shift + std::log(mean) - std::lgamma(static_cast<double>(k));
    out.method = ZetaMethod::monte_carlo;
    out.error_estimate = se / mean;
    out.terms_or_nodes = samples;
    return out;
}

ZetaEvaluation log_zeta_auto(std::span<const double> f, std::span<const std::int64_t> m,
                             double beta, const ZetaOptions& opts) {
    if (f.size() == 1) {
        return {beta * f[0], ZetaMethod::series, 0.0, 1};
    }
    return dispatch(f, m, beta, resolve_method(f, m, beta, opts), opts);
}

std::vector<double> means_via_ratio_raw(std::span<const double> f,
                                        std::span<const std::int64_t> m, double beta,
                                        const ZetaOptions& opts) {
    const std::size_t k = f.size();
    // one strategy for the base and all increments, so the ratios are coherent
    const ResolvedMethod rm = resolve_method(f, m, beta, opts);
    const double base = dispatch(f, m, beta, rm, opts).log_value;
    std::vector<std::int64_t> mm(m.begin(), m.end());
    std::vector<double> out(k, 0.0);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        mm[i] += 1;
        out[i] = std::exp(dispatch(f, mm, beta, rm, opts).log_value - base);
        mm[i] -= 1;
        acc += out[i];
    }
    out[k - 1] = 1.0 - acc;
    return out;
}

}  // namespace detail

ZetaEvaluation zeta_quadrature(const OutcomeModel& model, const CountSample& counts, double beta,
                               int level) {
    check_dims(model, counts, "zeta_quadrature");
    if (model.k() > 5) {
        throw UseMonteCarloError("zeta_quadrature: k > 5; use zeta_monte_carlo");
    }
    if (level < 1) {
        throw ValidationError("zeta_quadrature: level >= 1 required");
    }
    return detail::log_zeta_quadrature(model.f(), counts.m(), beta, level);
}

ZetaEvaluation zeta_nested_series(const OutcomeModel& model, const CountSample& counts, double beta,
                                  double tol) {
    check_dims(model, counts, "zeta_nested_series");
    if (!(tol > 0.0)) {
        throw ValidationError("zeta_nested_series: tol > 0 required");
    }
    return detail::log_zeta_series(model.f(), counts.m(), beta, tol, 1'000'000);
}

ZetaEvaluation zeta_monte_carlo(const OutcomeModel& model, const CountSample& counts, double beta,
                                std::int64_t samples, std::uint64_t seed) {
    check_dims(model, counts, "zeta_monte_carlo");
    if (samples < 1000) {
        throw ValidationError("zeta_monte_carlo: at least 1000 samples required");
    }
    return detail::log_zeta_monte_carlo(model.f(), counts.m(), beta, samples, seed);
}

ZetaEvaluation evaluate_zeta(const OutcomeModel& model, const CountSample& counts, double beta,
                             const ZetaOptions& opts) {
    check_dims(model, counts, "evaluate_zeta");
    return detail::log_zeta_auto(model.f(), counts.m(), beta, opts);
}

double mean_via_ratio(const OutcomeModel& model, const CountSample& counts, double beta,
                      std::size_t index, const ZetaOptions& opts) {
    check_dims(model, counts, "mean_via_ratio");
    if (index >= model.k()) {
        throw DimensionError("mean_via_ratio: index out of range");
    }
    return means_via_ratio(model, counts, beta, opts)[index];
}

std::vector<double> means_via_ratio(const OutcomeModel& model, const CountSample& counts,
                                    double beta, const ZetaOptions& opts) {
    check_dims(model, counts, "means_via_ratio");
    return detail::means_via_ratio_raw(model.f(), counts.m(), beta, opts);
}

}  // namespace mre
