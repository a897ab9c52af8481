#include "mfbias/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mfbias/errors.hpp"
#include "mfbias/numeric.hpp"

namespace mfbias {

namespace {

// Shared accumulation driver: walks primes <= X ascending, adds
// coeff(p)/sqrt(p), and snapshots the running state at every scheduled x.
// Snapshots read the accumulator without disturbing it, so values at shared
// checkpoints are bit-identical across schedules.
template <typename CoeffFn>
BiasSeries accumulate_bias(std::string source, double X,
                           const CheckpointSchedule& schedule, CoeffFn&& coeff) {
    BiasSeries series;
    series.source = std::move(source);
    series.checkpoints.reserve(schedule.x_values.size());

    CompensatedSum sum;
    std::int64_t pos = 0, neg = 0, zero = 0;
    std::size_t next = 0;

    const auto flush_until = [&](double p_or_end) {
        while (next < schedule.x_values.size() && schedule.x_values[next] < p_or_end) {
            series.checkpoints.push_back(
                {schedule.x_values[next], sum.value(), pos, neg, zero});
            ++next;
        }
    };

    if (X >= 2.0) {
        PrimeStream(static_cast<std::int64_t>(std::floor(X))).for_each([&](std::int64_t p) {
            flush_until(static_cast<double>(p));
            const double ap = coeff(p);
            if (ap > 0.0) ++pos;
            else if (ap < 0.0) ++neg;
            else ++zero;
            sum.add(ap / std::sqrt(static_cast<double>(p)));
        });
    }
    flush_until(std::numeric_limits<double>::infinity());
    return series;
}

} // namespace

BiasSeries bias_sum(const Eigenform& f, double X, const CheckpointSchedule& schedule) {
    if (!std::isfinite(X))
        throw UsageError("bias_sum: X must be finite");
    const double covered = f.imported
                               ? static_cast<double>(f.prime_a.empty() ? 0 : f.prime_a.back().first)
                               : static_cast<double>(f.trunc_order);
    if (X >= 2.0 && X > covered)
        throw RangeError("bias_sum: X = " + std::to_string(X) +
                         " beyond coefficient table (covers up to " +
                         std::to_string(static_cast<std::int64_t>(covered)) + ")");
    std::string source = f.imported ? "import_level_" + std::to_string(f.level)
                                    : "delta_" + std::to_string(f.weight);
    return accumulate_bias(std::move(source), X, schedule,
                           [&f](std::int64_t p) { return f.a_at_prime(p); });
}

BiasSeries dirichlet_bias(double X, const CheckpointSchedule& schedule) {
    if (!std::isfinite(X))
        throw UsageError("dirichlet_bias: X must be finite");
    BiasSeries series = accumulate_bias("chi4", X, schedule, [](std::int64_t p) {
        if (p == 2) return 0.0;
        return p % 4 == 1 ? 1.0 : -1.0;
    });
    series.predicted_slope = -0.5;
    series.predicted_slope_known = true;
    return series;
}

SlopeFit slope_fit(const BiasSeries& series, double x_min) {
    std::vector<const BiasCheckpoint*> pts;
    for (const auto& c : series.checkpoints)
        if (c.x >= x_min)
            pts.push_back(&c);
    if (pts.size() < 8)
        throw UsageError("slope_fit: need >= 8 checkpoints above x_min = " +
                         std::to_string(x_min) + ", have " + std::to_string(pts.size()));

    const auto n = static_cast<double>(pts.size());
    CompensatedSum su, ss, suu, sus;
    for (const auto* c : pts) {
        const double u = std::log(std::log(c->x));
        su.add(u);
        ss.add(c->S);
        suu.add(u * u);
        sus.add(u * c->S);
    }
    const double mean_u = su.value() / n;
    const double mean_s = ss.value() / n;
    const double var_u = suu.value() / n - mean_u * mean_u;
    if (!(var_u > 0.0))
        throw UsageError("slope_fit: regressor log log x is constant over the window");
    const double cov = sus.value() / n - mean_u * mean_s;

    SlopeFit fit;
    fit.slope = cov / var_u;
    fit.intercept = mean_s - fit.slope * mean_u;
    CompensatedSum rss;
    for (const auto* c : pts) {
        const double r = c->S - fit.slope * std::log(std::log(c->x)) - fit.intercept;
        rss.add(r * r);
    }
    fit.rms_residual = std::sqrt(rss.value() / n);
    fit.x_min = pts.front()->x;
    fit.x_max = pts.back()->x;
    fit.points_used = static_cast<std::int64_t>(pts.size());
    return fit;
}

const char* to_string(BiasVerdict v) {
    switch (v) {
    case BiasVerdict::positive_bias: return "positive-bias";
    case BiasVerdict::negative_bias: return "negative-bias";
    case BiasVerdict::inconsistent: return "inconsistent";
    }
    return "inconsistent";
}

BiasVerdict classify_bias_predicted(const SlopeFit& fit, double predicted_slope) {
    const bool same_sign = (fit.slope >= 0.0) == (predicted_slope >= 0.0);
    if (!same_sign && std::abs(fit.slope) > 2.0 * fit.rms_residual)
        return BiasVerdict::inconsistent;
    return predicted_slope >= 0.0 ? BiasVerdict::positive_bias : BiasVerdict::negative_bias;
}

BiasVerdict classify_bias(const SlopeFit& fit, int m) {
    return classify_bias_predicted(fit, 0.5 - m);
}

double sato_tate_cdf(double theta) {
    return (theta - std::sin(theta) * std::cos(theta)) / std::numbers::pi;
}

SatoTateHistogram sato_tate(const Eigenform& f, double X, int bins) {
    if (bins < 2)
        throw UsageError("sato_tate: need at least 2 bins");
    if (!(X >= 2.0))
        throw UsageError("sato_tate: need X >= 2");

    SatoTateHistogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = std::numbers::pi * i / bins;
    h.edges.back() = std::numbers::pi;

    std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
    PrimeStream(static_cast<std::int64_t>(std::floor(X))).for_each([&](std::int64_t p) {
        const double ap = f.a_at_prime(p);
        if (ap == 0.0) {
            ++h.zero_count;
            return;
        }
        double half = std::clamp(ap / 2.0, -1.0, 1.0);
        const double theta = std::acos(half);
        auto bin = static_cast<std::int64_t>(theta / std::numbers::pi * bins);
        bin = std::clamp<std::int64_t>(bin, 0, bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
        ++h.prime_count;
    });

    h.empirical.resize(static_cast<std::size_t>(bins), 0.0);
    h.model.resize(static_cast<std::size_t>(bins), 0.0);
    for (int i = 0; i < bins; ++i) {
        if (h.prime_count > 0)
            h.empirical[static_cast<std::size_t>(i)] =
                static_cast<double>(counts[static_cast<std::size_t>(i)]) /
                static_cast<double>(h.prime_count);
        h.model[static_cast<std::size_t>(i)] =
            sato_tate_cdf(h.edges[static_cast<std::size_t>(i) + 1]) -
            sato_tate_cdf(h.edges[static_cast<std::size_t>(i)]);
    }

    double cum_emp = 0.0, cum_model = 0.0, disc = 0.0;
    for (int i = 0; i < bins; ++i) {
        cum_emp += h.empirical[static_cast<std::size_t>(i)];
        cum_model += h.model[static_cast<std::size_t>(i)];
        disc = std::max(disc, std::abs(cum_emp - cum_model));
    }
    h.discrepancy = disc;
    return h;
}

} // namespace mfbias
