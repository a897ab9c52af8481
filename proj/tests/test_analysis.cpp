#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>

#include "mfbias/analysis.hpp"
#include "mfbias/errors.hpp"
#include "mfbias/forms.hpp"
#include "mfbias/primes.hpp"
#include "oracles.hpp"

using mfbias::BiasSeries;
using mfbias::build_delta_k;
using mfbias::checkpoints;
using mfbias::Eigenform;

namespace {

// Imported form with a_f(p) = c at every prime <= limit.
Eigenform constant_form(double c, std::int64_t limit) {
    std::ostringstream text;
    text << "# weight=2, level=1, root=+1\n";
    for (std::int64_t p : oracles::naive_sieve(limit)) text << p << ',' << c << '\n';
    std::istringstream in(text.str());
    return mfbias::import_coefficients(in);
}

BiasSeries synthetic_series(double slope, double intercept, double noise_amp) {
    BiasSeries s;
    s.source = "synthetic";
    const auto sched = checkpoints(1000, 1e6, 24);
    int i = 0;
    for (double x : sched.x_values) {
        const double noise = noise_amp * std::sin(1.0 + 2.0 * i++);
        s.checkpoints.push_back({x, slope * std::log(std::log(x)) + intercept + noise,
                                 0, 0, 0});
    }
    return s;
}

} // namespace

TEST_CASE("bias_sum: single prime X=2 gives S = -0.375 for Delta") {
    const Eigenform d = build_delta_k(12, 10);
    const auto s = mfbias::bias_sum(d, 2.0, checkpoints(2, 4, 2));
    REQUIRE(s.checkpoints.size() == 2);
    CHECK(s.checkpoints[0].x == 2.0);
    CHECK(s.checkpoints[0].S == doctest::Approx(-0.375).epsilon(1e-15));
    CHECK(s.checkpoints[0].count_neg == 1);
    CHECK(s.checkpoints[0].count_pos == 0);
    CHECK(s.source == "delta_12");
}

TEST_CASE("bias_sum: empty range X < 2 yields an all-zero series") {
    const Eigenform d = build_delta_k(12, 10);
    const auto s = mfbias::bias_sum(d, 1.5, checkpoints(2, 100, 5));
    REQUIRE(s.checkpoints.size() == 5);
    for (const auto& c : s.checkpoints) {
        CHECK(c.S == 0.0);
        CHECK(c.count_pos + c.count_neg + c.count_zero == 0);
    }
}

TEST_CASE("bias_sum: X beyond the coefficient table is a range error") {
    const Eigenform d = build_delta_k(12, 100);
    CHECK_THROWS_AS(mfbias::bias_sum(d, 1000.0, checkpoints(2, 1000, 4)),
                    mfbias::RangeError);
}

TEST_CASE("bias_sum: sign counts total pi(x) at every checkpoint") {
    const Eigenform d = build_delta_k(12, 10000);
    const auto sched = checkpoints(10, 10000, 12);
    const auto s = mfbias::bias_sum(d, 10000.0, sched);
    const auto primes = oracles::naive_sieve(10000);
    for (const auto& c : s.checkpoints) {
        const auto pi = static_cast<std::int64_t>(
            std::count_if(primes.begin(), primes.end(),
                          [&](std::int64_t p) { return static_cast<double>(p) <= c.x; }));
        CHECK(c.count_pos + c.count_neg + c.count_zero == pi);
    }
}

TEST_CASE("bias_sum: checkpoint increments are recomputable partial sums") {
    const Eigenform d = build_delta_k(12, 5000);
    const auto s = mfbias::bias_sum(d, 5000.0, checkpoints(10, 5000, 8));
    for (std::size_t i = 1; i < s.checkpoints.size(); ++i) {
        double inc = 0.0;
        for (std::int64_t p : oracles::naive_sieve(5000)) {
            const double x = static_cast<double>(p);
            if (x > s.checkpoints[i - 1].x && x <= s.checkpoints[i].x)
                inc += d.a_at_prime(p) / std::sqrt(x);
        }
        CHECK(s.checkpoints[i].S - s.checkpoints[i - 1].S ==
              doctest::Approx(inc).epsilon(1e-12));
    }
}

TEST_CASE("bias_sum is schedule-independent at shared checkpoints") {
    const Eigenform d = build_delta_k(12, 100000);
    const auto a = mfbias::bias_sum(d, 1e5, checkpoints(100, 1e5, 4));  // 100,1e3,1e4,1e5
    const auto b = mfbias::bias_sum(d, 1e5, checkpoints(100, 1e5, 7));  // hits decades too
    for (const auto& ca : a.checkpoints)
        for (const auto& cb : b.checkpoints)
            if (ca.x == cb.x) {
                CHECK(std::fabs(ca.S - cb.S) <= 1e-12);
                CHECK(ca.count_pos == cb.count_pos);
                CHECK(ca.count_neg == cb.count_neg);
            }
}

TEST_CASE("dirichlet_bias: first terms and zero bookkeeping") {
    const auto s = mfbias::dirichlet_bias(3.0, checkpoints(2, 3, 2));
    REQUIRE(s.checkpoints.size() == 2);
    CHECK(s.checkpoints[0].x == 2.0);
    CHECK(s.checkpoints[0].S == 0.0);
    CHECK(s.checkpoints[0].count_zero == 1);
    CHECK(s.checkpoints[1].S == doctest::Approx(-0.5773502691896258).epsilon(1e-15));
    CHECK(s.predicted_slope == -0.5);
    CHECK(s.predicted_slope_known);
    CHECK(s.source == "chi4");

    const auto big = mfbias::dirichlet_bias(10000.0, checkpoints(10, 10000, 6));
    for (const auto& c : big.checkpoints) CHECK(c.count_zero == 1);
}

TEST_CASE("all-ones coefficients give a strictly increasing Mertens-type sum") {
    const Eigenform ones = constant_form(1.0, 2000); // table ends at the last prime, 1999
    const auto s = mfbias::bias_sum(ones, 1999.0, checkpoints(10, 1999, 10));
    double direct = 0.0;
    for (std::int64_t p : oracles::naive_sieve(1999)) direct += 1.0 / std::sqrt(static_cast<double>(p));
    for (std::size_t i = 1; i < s.checkpoints.size(); ++i)
        CHECK(s.checkpoints[i].S > s.checkpoints[i - 1].S);
    CHECK(s.checkpoints.back().S == doctest::Approx(direct).epsilon(1e-13));
    CHECK(s.checkpoints.back().count_pos == 303); // pi(1999)
}

TEST_CASE("slope_fit: exact linear input recovered exactly") {
    const auto fit = mfbias::slope_fit(synthetic_series(0.5, -1.25, 0.0), 0.0);
    CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(-1.25).epsilon(1e-12));
    CHECK(fit.rms_residual < 1e-12);
    CHECK(fit.points_used == 24);
}

TEST_CASE("slope_fit: flat input gives slope 0") {
    const auto fit = mfbias::slope_fit(synthetic_series(0.0, 3.75, 0.0), 0.0);
    CHECK(fit.slope == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("slope_fit: recovers slope within 3x the noise amplitude") {
    const double eps = 0.01;
    const auto fit = mfbias::slope_fit(synthetic_series(0.7, 1.2, eps), 0.0);
    CHECK(std::fabs(fit.slope - 0.7) <= 3.0 * eps);
    CHECK(fit.rms_residual <= eps);
}

TEST_CASE("slope_fit: too few checkpoints rejected") {
    BiasSeries s;
    for (double x : checkpoints(10, 1e5, 7).x_values)
        s.checkpoints.push_back({x, 1.0, 0, 0, 0});
    CHECK_THROWS_AS(mfbias::slope_fit(s, 0.0), mfbias::UsageError);
    // 12 checkpoints but only 7 above x_min.
    BiasSeries t;
    for (double x : checkpoints(10, 1e5, 12).x_values)
        t.checkpoints.push_back({x, 1.0, 0, 0, 0});
    CHECK_THROWS_AS(mfbias::slope_fit(t, 5e4), mfbias::UsageError);
}

TEST_CASE("slope_fit: window recorded from the points actually used") {
    const auto fit = mfbias::slope_fit(synthetic_series(0.5, 0.0, 0.0), 2000.0);
    CHECK(fit.x_min >= 2000.0);
    CHECK(fit.x_max == 1e6);
    CHECK(fit.points_used < 24);
}

TEST_CASE("classify_bias: verdict boundaries") {
    mfbias::SlopeFit fit;
    fit.rms_residual = 0.05;

    fit.slope = 0.45;
    CHECK(mfbias::classify_bias(fit, 0) == mfbias::BiasVerdict::positive_bias);
    fit.slope = -0.48;
    CHECK(mfbias::classify_bias(fit, 1) == mfbias::BiasVerdict::negative_bias);
    fit.slope = -0.6;
    CHECK(mfbias::classify_bias(fit, 0) == mfbias::BiasVerdict::inconsistent);
    // Wrong sign inside the 2x rms band stays at the predicted verdict.
    fit.slope = -0.08;
    CHECK(mfbias::classify_bias(fit, 0) == mfbias::BiasVerdict::positive_bias);

    CHECK(std::string(mfbias::to_string(mfbias::BiasVerdict::positive_bias)) ==
          "positive-bias");
    CHECK(std::string(mfbias::to_string(mfbias::BiasVerdict::negative_bias)) ==
          "negative-bias");
    CHECK(std::string(mfbias::to_string(mfbias::BiasVerdict::inconsistent)) ==
          "inconsistent");
}

TEST_CASE("sato_tate_cdf: mass checks") {
    CHECK(mfbias::sato_tate_cdf(0.0) == 0.0);
    CHECK(mfbias::sato_tate_cdf(std::numbers::pi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(mfbias::sato_tate_cdf(std::numbers::pi / 2) ==
          doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sato_tate: histogram structure and model masses") {
    const Eigenform d = build_delta_k(12, 10000);
    const auto h = mfbias::sato_tate(d, 10000.0, 20);
    REQUIRE(h.edges.size() == 21);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == doctest::Approx(std::numbers::pi));
    double emp = 0.0, mod = 0.0;
    for (int i = 0; i < 20; ++i) {
        emp += h.empirical[static_cast<std::size_t>(i)];
        mod += h.model[static_cast<std::size_t>(i)];
    }
    CHECK(emp == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mod == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.prime_count + h.zero_count == 1229); // pi(10^4)
    CHECK(h.discrepancy > 0.0);
    CHECK(h.discrepancy < 0.1);
}

TEST_CASE("sato_tate: zero coefficients counted separately") {
    const Eigenform zeros = constant_form(0.0, 100);
    const auto h = mfbias::sato_tate(zeros, 100.0, 10);
    CHECK(h.zero_count == 25);
    CHECK(h.prime_count == 0);
    for (double mass : h.empirical) CHECK(mass == 0.0);
}

TEST_CASE("sato_tate: guards") {
    const Eigenform d = build_delta_k(12, 100);
    CHECK_THROWS_AS(mfbias::sato_tate(d, 100.0, 1), mfbias::UsageError);
    CHECK_THROWS_AS(mfbias::sato_tate(d, 1.0, 10), mfbias::UsageError);
}
