#ifndef MFBIAS_SERIES_HPP
#define MFBIAS_SERIES_HPP

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace mfbias {

// Dense power series over Z truncated at a fixed order N: coeffs()[n] is the
// coefficient of q^n, 0 <= n <= N.  Instances are immutable after
// construction, so concurrent reads are safe.
class TruncatedIntegerSeries {
public:
    // Takes ownership of the coefficient vector; trunc_order = size - 1.
    explicit TruncatedIntegerSeries(std::vector<mpz_class> coeffs);

    static TruncatedIntegerSeries zero(std::int64_t trunc_order);
    static TruncatedIntegerSeries one(std::int64_t trunc_order);

    std::int64_t trunc_order() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
    const mpz_class& operator[](std::int64_t n) const { return coeffs_[static_cast<std::size_t>(n)]; }
    const std::vector<mpz_class>& coeffs() const { return coeffs_; }

    // Copy restricted to order new_order <= trunc_order.
    TruncatedIntegerSeries truncated(std::int64_t new_order) const;

    // Moves the coefficient vector out (rvalue only; avoids deep copies of
    // multi-million-entry tables when handing data to consumers).
    std::vector<mpz_class> release() && { return std::move(coeffs_); }

    bool operator==(const TruncatedIntegerSeries& other) const { return coeffs_ == other.coeffs_; }

private:
    std::vector<mpz_class> coeffs_;
};

// Exact product truncated at the common order N.  Both inputs must share the
// same truncation order (usage error otherwise).  Uses signed Kronecker
// substitution: coefficients are packed into two huge integers with lane
// widths derived from an a-priori bound on the product coefficients, the
// packed integers are multiplied once (GMP's quasi-linear multiplication does
// the heavy lifting), and the lanes are decoded back with a half-lane offset.
// Exact for arbitrary signed coefficients; far better than quadratic for
// N >= 2^12.
TruncatedIntegerSeries multiply(const TruncatedIntegerSeries& a, const TruncatedIntegerSeries& b);

// a^e by binary exponentiation over multiply().  e = 0 returns the constant
// series 1 (documented convention, not an error).
TruncatedIntegerSeries power(const TruncatedIntegerSeries& a, std::uint64_t e);

// q-expansion of Delta(z) = q prod_{n>=1} (1 - q^n)^24 truncated at q^N, i.e.
// coeffs()[n] = tau(n) for 1 <= n <= N.  The inner product is generated
// sparsely from the pentagonal number theorem (exponents j(3j-1)/2, sign
// (-1)^j), squared as a sparse convolution, then raised to the 24th power
// with four dense multiplies (4 -> 8 -> 16 -> 24).
TruncatedIntegerSeries eta_power_series(std::int64_t N);

// Exact Bernoulli number B_n from the recurrence
//   sum_{j=0}^{m} C(m+1, j) B_j = 0,  B_0 = 1  (so B_1 = -1/2).
// Requires even n >= 2 (usage error otherwise).
mpq_class bernoulli(int n);

// sigma_r(n) = sum_{d | n} d^r for 1 <= n <= N by divisor sieving
// (O(N log N) big-integer additions).  Index 0 of the result is unused (0).
std::vector<mpz_class> sigma_table(int r, std::int64_t N);

// Integer-normalised Eisenstein series of the given weight w:
//   E_w = 1 - (2w / B_w) sum_{n>=1} sigma_{w-1}(n) q^n.
// Supported weights: 4, 6, 8, 10, 14 (for these -2w/B_w is an integer:
// 240, -504, 480, -264, -24).  Anything else is a usage error.
TruncatedIntegerSeries eisenstein_series(int weight, std::int64_t N);

} // namespace mfbias

#endif
