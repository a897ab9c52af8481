// Independent reference implementations used to cross-check the library.
// Everything here is deliberately naive: quadratic convolutions, termwise
// product expansion, trial division.  No code is shared with src/.
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracles {

// c[k] = sum_{i+j=k} a[i] b[j], truncated at min size.
inline std::vector<mpz_class> schoolbook_multiply(const std::vector<mpz_class>& a,
                                                  const std::vector<mpz_class>& b) {
    std::vector<mpz_class> c(std::min(a.size(), b.size()), mpz_class(0));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; i + j < c.size() && j < b.size(); ++j)
            if (i < a.size()) c[i + j] += a[i] * b[j];
    return c;
}

inline std::vector<mpz_class> schoolbook_power(const std::vector<mpz_class>& a,
                                               unsigned e) {
    std::vector<mpz_class> r(a.size(), mpz_class(0));
    r[0] = 1;
    for (unsigned i = 0; i < e; ++i) r = schoolbook_multiply(r, a);
    return r;
}

// prod_{n=1}^{N} (1 - q^n)^24 truncated at q^N, multiplied out one factor at
// a time.  tau(n) is coefficient n-1 of this (the leading q of Delta shifts
// everything by one).
inline std::vector<mpz_class> eta24_termwise(std::int64_t N) {
    std::vector<mpz_class> acc(static_cast<std::size_t>(N) + 1, mpz_class(0));
    acc[0] = 1;
    for (std::int64_t n = 1; n <= N; ++n)
        for (int rep = 0; rep < 24; ++rep)
            for (std::int64_t k = N; k >= n; --k) acc[static_cast<std::size_t>(k)] -=
                acc[static_cast<std::size_t>(k - n)];
    return acc;
}

inline std::vector<mpz_class> tau_termwise(std::int64_t N) {
    const std::vector<mpz_class> prod = eta24_termwise(N);
    std::vector<mpz_class> tau(static_cast<std::size_t>(N) + 1, mpz_class(0));
    for (std::int64_t n = 1; n <= N; ++n) tau[static_cast<std::size_t>(n)] =
        prod[static_cast<std::size_t>(n - 1)];
    return tau;
}

// Plain (non-segmented) sieve of Eratosthenes over a full boolean table.
inline std::vector<std::int64_t> naive_sieve(std::int64_t X) {
    std::vector<bool> composite(static_cast<std::size_t>(X) + 1, false);
    std::vector<std::int64_t> primes;
    for (std::int64_t n = 2; n <= X; ++n) {
        if (composite[static_cast<std::size_t>(n)]) continue;
        primes.push_back(n);
        for (std::int64_t m = n * n; m <= X; m += n) composite[static_cast<std::size_t>(m)] = true;
    }
    return primes;
}

inline std::vector<std::int64_t> trial_division_primes(std::int64_t X) {
    std::vector<std::int64_t> primes;
    for (std::int64_t n = 2; n <= X; ++n) {
        bool p = true;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) { p = false; break; }
        if (p) primes.push_back(n);
    }
    return primes;
}

// sigma_r(n) by direct divisor enumeration.
inline mpz_class sigma_naive(int r, std::int64_t n) {
    mpz_class s = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_class t;
        mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d),
                      static_cast<unsigned long>(r));
        s += t;
    }
    return s;
}

// Deterministic random series with coefficients up to `bits` bits, signed.
inline std::vector<mpz_class> random_series(std::mt19937_64& rng, std::size_t len,
                                            unsigned bits) {
    std::vector<mpz_class> v(len);
    for (auto& c : v) {
        mpz_class x = 0;
        for (unsigned got = 0; got < bits; got += 64) {
            x <<= 64;
            x += mpz_class(static_cast<unsigned long>(rng() & 0xffffffffUL)) * 4294967296UL +
                 static_cast<unsigned long>(rng() & 0xffffffffUL);
        }
        x >>= (64 - bits % 64) % 64;
        if (rng() & 1) x = -x;
        c = x;
    }
    return v;
}

} // namespace oracles
