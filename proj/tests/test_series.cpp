#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "mfbias/errors.hpp"
#include "mfbias/series.hpp"
#include "oracles.hpp"

using mfbias::TruncatedIntegerSeries;

namespace {

TruncatedIntegerSeries from_ints(std::vector<long> v) {
    std::vector<mpz_class> c(v.begin(), v.end());
    return TruncatedIntegerSeries(std::move(c));
}

// Sparse pentagonal series sum (-1)^j q^{j(3j-1)/2} over both signs of j.
TruncatedIntegerSeries pentagonal(std::int64_t N) {
    std::vector<mpz_class> c(static_cast<std::size_t>(N) + 1, mpz_class(0));
    c[0] = 1;
    for (std::int64_t j = 1;; ++j) {
        const std::int64_t g1 = j * (3 * j - 1) / 2;
        const std::int64_t g2 = j * (3 * j + 1) / 2;
        if (g1 > N) break;
        const int sign = (j % 2 == 0) ? 1 : -1;
        c[static_cast<std::size_t>(g1)] += sign;
        if (g2 <= N) c[static_cast<std::size_t>(g2)] += sign;
    }
    return TruncatedIntegerSeries(std::move(c));
}

} // namespace

TEST_CASE("multiply: difference of squares at N=2") {
    const auto p = multiply(from_ints({1, 1, 0}), from_ints({1, -1, 0}));
    CHECK(p[0] == 1);
    CHECK(p[1] == 0);
    CHECK(p[2] == -1);
}

TEST_CASE("multiply: identity element at N=64") {
    std::mt19937_64 rng(7);
    const TruncatedIntegerSeries a(oracles::random_series(rng, 65, 40));
    const auto one = TruncatedIntegerSeries::one(64);
    CHECK(multiply(a, one) == a);
    CHECK(multiply(one, a) == a);
}

TEST_CASE("multiply: pentagonal series squared matches schoolbook at N=10") {
    const auto P = pentagonal(10);
    const auto fast = multiply(P, P);
    const auto slow = oracles::schoolbook_multiply(P.coeffs(), P.coeffs());
    CHECK(fast.coeffs() == slow);
}

TEST_CASE("multiply: mismatched truncation orders rejected") {
    CHECK_THROWS_AS(multiply(from_ints({1, 1}), from_ints({1, 1, 1})), mfbias::UsageError);
}

TEST_CASE("multiply: commutative and associative on random inputs, N<=256") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t len = 16 + static_cast<std::size_t>(rng() % 241);
        const TruncatedIntegerSeries a(oracles::random_series(rng, len, 100));
        const TruncatedIntegerSeries b(oracles::random_series(rng, len, 100));
        const TruncatedIntegerSeries c(oracles::random_series(rng, len, 100));
        CHECK(multiply(a, b) == multiply(b, a));
        CHECK(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
    }
}

TEST_CASE("multiply: fast path equals schoolbook on 100 random series, N<=512") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 2 + static_cast<std::size_t>(rng() % 511);
        const unsigned bits = 1 + static_cast<unsigned>(rng() % 256);
        const TruncatedIntegerSeries a(oracles::random_series(rng, len, bits));
        const TruncatedIntegerSeries b(oracles::random_series(rng, len, bits));
        CHECK(multiply(a, b).coeffs() ==
              oracles::schoolbook_multiply(a.coeffs(), b.coeffs()));
    }
}

TEST_CASE("power: binomial square at N=3") {
    const auto p = power(from_ints({1, -1, 0, 0}), 2);
    CHECK(p[0] == 1);
    CHECK(p[1] == -2);
    CHECK(p[2] == 1);
    CHECK(p[3] == 0);
}

TEST_CASE("power: identity exponent and empty product") {
    std::mt19937_64 rng(17);
    const TruncatedIntegerSeries a(oracles::random_series(rng, 33, 64));
    CHECK(power(a, 1) == a);
    CHECK(power(a, 0) == TruncatedIntegerSeries::one(32));
}

TEST_CASE("power: pentagonal^24 matches schoolbook repeated multiplication at N=10") {
    const auto P = pentagonal(10);
    CHECK(power(P, 24).coeffs() == oracles::schoolbook_power(P.coeffs(), 24));
}

TEST_CASE("power equals e-fold schoolbook for e<=24, N<=64") {
    std::mt19937_64 rng(19);
    const TruncatedIntegerSeries a(oracles::random_series(rng, 65, 24));
    for (unsigned e : {2u, 3u, 7u, 24u})
        CHECK(power(a, e).coeffs() == oracles::schoolbook_power(a.coeffs(), e));
}

TEST_CASE("eta_power_series: first tau values") {
    const auto d = mfbias::eta_power_series(12);
    CHECK(d[1] == 1);
    CHECK(d[2] == -24);
    CHECK(d[3] == 252);
    CHECK(d[4] == -1472);
    CHECK(d[5] == 4830);
    CHECK(d[12] == -370944);
}

TEST_CASE("eta_power_series matches termwise product oracle to N=300") {
    const auto d = mfbias::eta_power_series(300);
    const auto oracle = oracles::tau_termwise(300);
    for (std::int64_t n = 1; n <= 300; ++n) CHECK(d[n] == oracle[static_cast<std::size_t>(n)]);
}

TEST_CASE("eta_power_series: truncation consistency") {
    const auto big = mfbias::eta_power_series(400);
    const auto small = mfbias::eta_power_series(150);
    CHECK(big.truncated(150) == small);
}

TEST_CASE("tau is multiplicative on coprime pairs up to 100") {
    const auto d = mfbias::eta_power_series(100);
    for (std::int64_t m = 2; m <= 100; ++m)
        for (std::int64_t n = m + 1; m * n <= 100; ++n) {
            if (mpz_class(gcd(mpz_class(m), mpz_class(n))) != 1) continue;
            CHECK(d[m * n] == d[m] * d[n]);
        }
}

TEST_CASE("bernoulli: small values and error cases") {
    CHECK(mfbias::bernoulli(2) == mpq_class(1, 6));
    CHECK(mfbias::bernoulli(4) == mpq_class(-1, 30));
    CHECK(mfbias::bernoulli(6) == mpq_class(1, 42));
    CHECK(mfbias::bernoulli(14) == mpq_class(7, 6));
    CHECK_THROWS_AS(mfbias::bernoulli(3), mfbias::UsageError);
    CHECK_THROWS_AS(mfbias::bernoulli(0), mfbias::UsageError);
}

TEST_CASE("bernoulli: sign pattern B_{4m} < 0, B_{4m+2} > 0") {
    for (int n = 4; n <= 40; n += 4) CHECK(mfbias::bernoulli(n) < 0);
    for (int n = 6; n <= 42; n += 4) CHECK(mfbias::bernoulli(n) > 0);
}

TEST_CASE("bernoulli: von Staudt-Clausen denominators for n<=30") {
    for (int n = 2; n <= 30; n += 2) {
        mpz_class denom = 1;
        for (std::int64_t p : oracles::trial_division_primes(n + 1))
            if (n % (p - 1) == 0) denom *= p;
        CHECK(mfbias::bernoulli(n).get_den() == denom);
    }
}

TEST_CASE("sigma_table: examples and divisor-enumeration oracle") {
    const auto s3 = mfbias::sigma_table(3, 200);
    CHECK(s3[1] == 1);
    CHECK(s3[6] == 252);
    for (std::int64_t n = 1; n <= 200; ++n) CHECK(s3[static_cast<std::size_t>(n)] ==
                                                  oracles::sigma_naive(3, n));
    for (int r : {3, 5, 7, 9, 13}) {
        const auto t = mfbias::sigma_table(r, 100);
        for (std::int64_t p : oracles::trial_division_primes(100)) {
            mpz_class pr;
            mpz_ui_pow_ui(pr.get_mpz_t(), static_cast<unsigned long>(p),
                          static_cast<unsigned long>(r));
            CHECK(t[static_cast<std::size_t>(p)] == 1 + pr);
        }
    }
}

TEST_CASE("eisenstein_series: normalization constants") {
    const auto check_q1 = [](int w, long c) {
        const auto e = mfbias::eisenstein_series(w, 4);
        CHECK(e[0] == 1);
        CHECK(e[1] == c);
    };
    check_q1(4, 240);
    check_q1(6, -504);
    check_q1(8, 480);
    check_q1(10, -264);
    check_q1(14, -24);
    CHECK_THROWS_AS(mfbias::eisenstein_series(12, 4), mfbias::UsageError);
    CHECK_THROWS_AS(mfbias::eisenstein_series(5, 4), mfbias::UsageError);
}

TEST_CASE("eisenstein q^2 coefficients follow sigma_{w-1}") {
    // E_4: 240 * sigma_3(2) = 240 * 9; E_6: -504 * sigma_5(2) = -504 * 33.
    CHECK(mfbias::eisenstein_series(4, 4)[2] == 240 * 9);
    CHECK(mfbias::eisenstein_series(6, 4)[2] == -504 * 33);
}

TEST_CASE("series utilities: zero, one, truncated, release") {
    const auto z = TruncatedIntegerSeries::zero(5);
    CHECK(z.trunc_order() == 5);
    for (std::int64_t n = 0; n <= 5; ++n) CHECK(z[n] == 0);
    const auto o = TruncatedIntegerSeries::one(5);
    CHECK(o[0] == 1);
    CHECK(o[5] == 0);
    CHECK_THROWS_AS(o.truncated(6), mfbias::UsageError);
    auto v = TruncatedIntegerSeries::one(3);
    const std::vector<mpz_class> moved = std::move(v).release();
    CHECK(moved.size() == 4);
    CHECK(moved[0] == 1);
}
