#include "mfbias/drh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mfbias/errors.hpp"
#include "mfbias/numeric.hpp"

namespace mfbias {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Shared accumulation: log P(x) = sum over p <= x of -log(local factor),
// snapshotted at the scheduled checkpoints without disturbing the
// accumulator (shared checkpoints are schedule-independent bit for bit).
template <typename FactorArg>
EulerProductTrace accumulate_product(std::string source, double X,
                                     const CheckpointSchedule& schedule, int m, int nu,
                                     double l_central, int force_m, FactorArg&& factor_arg) {
    if (!std::isfinite(X))
        throw UsageError("partial_euler_product: X must be finite");

    EulerProductTrace trace;
    trace.source = std::move(source);
    trace.nu = nu;
    trace.l_central = l_central;
    trace.m = force_m >= 0 ? force_m : m;
    if (trace.m > 60)
        throw UsageError("partial_euler_product: scaling exponent too large");
    trace.predicted_limit = std::pow(std::sqrt(2.0), nu) * l_central /
                            (std::exp(trace.m * kEulerGamma) * factorial(trace.m));
    if (!(trace.predicted_limit > 0.0))
        throw InternalError("partial_euler_product: predicted limit is not positive");

    CompensatedSum log_p;
    std::size_t next = 0;
    const auto flush_until = [&](double p_or_end) {
        while (next < schedule.x_values.size() && schedule.x_values[next] < p_or_end) {
            const double x = schedule.x_values[next];
            EulerCheckpoint cp;
            cp.x = x;
            cp.P = std::exp(log_p.value());
            cp.scaled = ipow(std::log(x), trace.m) * cp.P;
            cp.ratio = cp.scaled / trace.predicted_limit;
            trace.checkpoints.push_back(cp);
            ++next;
        }
    };

    if (X >= 2.0) {
        PrimeStream(static_cast<std::int64_t>(std::floor(X))).for_each([&](std::int64_t p) {
            flush_until(static_cast<double>(p));
            const double arg = factor_arg(p);
            if (!(arg > 0.0))
                throw InternalError("partial_euler_product: nonpositive local factor at p = " +
                                    std::to_string(p) + " violates the Deligne-bound guard");
            log_p.add(-std::log(arg));
        });
    }
    flush_until(std::numeric_limits<double>::infinity());
    return trace;
}

} // namespace

EulerProductTrace partial_euler_product(const Eigenform& f, double X,
                                        const CheckpointSchedule& schedule,
                                        int m, double l_central, int force_m) {
    const double covered = f.imported
                               ? static_cast<double>(f.prime_a.empty() ? 0 : f.prime_a.back().first)
                               : static_cast<double>(f.trunc_order);
    if (X >= 2.0 && X > covered)
        throw RangeError("partial_euler_product: X beyond coefficient table");
    std::string source = f.imported ? "import_level_" + std::to_string(f.level)
                                    : "delta_" + std::to_string(f.weight);
    // GL(2): (1 - a_f(p) p^{-1/2} + p^{-1})^{-1}; R = 1 (second-moment pole
    // order for newforms), nu = -R = -1.
    return accumulate_product(std::move(source), X, schedule, m, -1, l_central, force_m,
                              [&f](std::int64_t p) {
                                  const double sq = std::sqrt(static_cast<double>(p));
                                  return 1.0 - f.a_at_prime(p) / sq +
                                         1.0 / static_cast<double>(p);
                              });
}

EulerProductTrace partial_euler_product_chi4(double X, const CheckpointSchedule& schedule,
                                             double beta_half, int force_m) {
    // GL(1) chi_4: (1 - chi_4(p) p^{-1/2})^{-1}; L_2 has a zeta-type pole
    // structure with R = -1, so nu = +1 and m = 0.
    return accumulate_product("chi4", X, schedule, 0, 1, beta_half, force_m,
                              [](std::int64_t p) {
                                  if (p == 2) return 1.0;
                                  const double chi = p % 4 == 1 ? 1.0 : -1.0;
                                  return 1.0 - chi / std::sqrt(static_cast<double>(p));
                              });
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

DrhReport drh_report(const EulerProductTrace& trace) {
    if (trace.checkpoints.empty())
        throw UsageError("drh_report: trace has no checkpoints");

    DrhReport report;
    int current_decade = std::numeric_limits<int>::min();
    std::vector<double> bucket;
    const auto flush = [&]() {
        if (bucket.empty()) return;
        report.decade_medians.push_back(
            {current_decade, median(bucket), static_cast<int>(bucket.size())});
        bucket.clear();
    };
    for (const auto& cp : trace.checkpoints) {
        if (!(cp.ratio > 0.0))
            throw InternalError("drh_report: nonpositive ratio at x = " + std::to_string(cp.x));
        // decades are (10^d, 10^{d+1}] so a checkpoint at an exact power of
        // ten closes its decade instead of opening a one-point bucket
        const int d = static_cast<int>(std::ceil(std::log10(cp.x))) - 1;
        if (d != current_decade) {
            flush();
            current_decade = d;
        }
        bucket.push_back(std::abs(std::log(cp.ratio)));
    }
    flush();

    report.medians_nonincreasing = true;
    for (std::size_t i = 1; i < report.decade_medians.size(); ++i)
        if (report.decade_medians[i].median_abs_log_ratio >
            report.decade_medians[i - 1].median_abs_log_ratio)
            report.medians_nonincreasing = false;
    report.final_decade_median = report.decade_medians.back().median_abs_log_ratio;
    report.consistent = report.final_decade_median < std::log(2.0);
    return report;
}

SlopeConsistencyReport slope_consistency(const EulerProductTrace& trace, const SlopeFit& fit) {
    SlopeConsistencyReport report;
    report.predicted_slope = -trace.nu / 2.0 - trace.m; // R/2 - m with R = -nu
    report.fitted_slope = fit.slope;
    report.deviation = std::abs(fit.slope - report.predicted_slope);
    report.band = 0.3; // the desk-scale acceptance window half-width
    report.agrees = report.deviation <= report.band;
    return report;
}

} // namespace mfbias
