#include "mfbias/series.hpp"

#include <cstddef>
#include <utility>

#include "mfbias/errors.hpp"

namespace mfbias {

TruncatedIntegerSeries::TruncatedIntegerSeries(std::vector<mpz_class> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty())
        throw UsageError("TruncatedIntegerSeries: coefficient vector must have length >= 1");
}

TruncatedIntegerSeries TruncatedIntegerSeries::zero(std::int64_t trunc_order) {
    if (trunc_order < 0)
        throw UsageError("TruncatedIntegerSeries: truncation order must be >= 0");
    return TruncatedIntegerSeries(std::vector<mpz_class>(static_cast<std::size_t>(trunc_order) + 1));
}

TruncatedIntegerSeries TruncatedIntegerSeries::one(std::int64_t trunc_order) {
    TruncatedIntegerSeries s = zero(trunc_order);
    s.coeffs_[0] = 1;
    return s;
}

TruncatedIntegerSeries TruncatedIntegerSeries::truncated(std::int64_t new_order) const {
    if (new_order < 0 || new_order > trunc_order())
        throw UsageError("truncated: new order must lie in [0, trunc_order]");
    return TruncatedIntegerSeries(std::vector<mpz_class>(
        coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(new_order) + 1));
}

namespace {

// Packs sum_i c_i * 2^(8 * lane_bytes * i).  Positive and negative
// coefficients are exported into separate byte buffers (mpz_export writes
// magnitudes), imported in one pass each, and subtracted.  The caller
// guarantees |c_i| fits in lane_bytes.
mpz_class pack_lanes(const std::vector<mpz_class>& c, std::size_t lane_bytes) {
    const std::size_t n = c.size();
    std::vector<unsigned char> pos(n * lane_bytes, 0);
    std::vector<unsigned char> neg(n * lane_bytes, 0);
    bool any_pos = false, any_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        const int s = sgn(c[i]);
        if (s == 0) continue;
        unsigned char* dst = (s > 0 ? pos.data() : neg.data()) + i * lane_bytes;
        if (s > 0) any_pos = true; else any_neg = true;
        std::size_t written = 0;
        mpz_export(dst, &written, -1, 1, 0, 0, c[i].get_mpz_t());
        if (written > lane_bytes)
            throw InternalError("pack_lanes: coefficient exceeded its lane bound");
    }
    mpz_class packed = 0;
    if (any_pos)
        mpz_import(packed.get_mpz_t(), pos.size(), -1, 1, 0, 0, pos.data());
    if (any_neg) {
        mpz_class negative;
        mpz_import(negative.get_mpz_t(), neg.size(), -1, 1, 0, 0, neg.data());
        packed -= negative;
    }
    return packed;
}

// Decodes the first out_lanes balanced lane digits of the packed product.
// Adding 2^(8*lane_bytes - 1) to every lane shifts each digit c_i (known to
// satisfy |c_i| < 2^(8*lane_bytes - 1)) into [0, 2^(8*lane_bytes)), which
// makes the whole integer non-negative and its byte lanes independent.
std::vector<mpz_class> unpack_lanes(mpz_class& prod, std::size_t total_lanes,
                                    std::size_t out_lanes, std::size_t lane_bytes) {
    {
        std::vector<unsigned char> offset_bytes(total_lanes * lane_bytes, 0);
        for (std::size_t i = 0; i < total_lanes; ++i)
            offset_bytes[i * lane_bytes + lane_bytes - 1] = 0x80;
        mpz_class offset;
        mpz_import(offset.get_mpz_t(), offset_bytes.size(), -1, 1, 0, 0, offset_bytes.data());
        prod += offset;
    }
    if (sgn(prod) < 0)
        throw InternalError("unpack_lanes: offset did not cover the packed product");

    std::vector<unsigned char> buf(total_lanes * lane_bytes, 0);
    std::size_t written = 0;
    if (sgn(prod) != 0)
        mpz_export(buf.data(), &written, -1, 1, 0, 0, prod.get_mpz_t());
    if (written > buf.size())
        throw InternalError("unpack_lanes: product exceeded its lane budget");
    {
        mpz_class released;
        mpz_swap(prod.get_mpz_t(), released.get_mpz_t());
    }

    const mpz_class half = mpz_class(1) << (8 * lane_bytes - 1);
    std::vector<mpz_class> out(out_lanes);
    mpz_class lane;
    for (std::size_t i = 0; i < out_lanes; ++i) {
        mpz_import(lane.get_mpz_t(), lane_bytes, -1, 1, 0, 0, buf.data() + i * lane_bytes);
        out[i] = lane - half;
    }
    return out;
}

mpz_class max_abs_coeff(const std::vector<mpz_class>& c) {
    mpz_class m = 0;
    for (const mpz_class& x : c)
        if (mpz_cmpabs(x.get_mpz_t(), m.get_mpz_t()) > 0)
            m = abs(x);
    return m;
}

} // namespace

TruncatedIntegerSeries multiply(const TruncatedIntegerSeries& a, const TruncatedIntegerSeries& b) {
    if (a.trunc_order() != b.trunc_order())
        throw UsageError("multiply: mismatched truncation orders (" +
                         std::to_string(a.trunc_order()) + " vs " +
                         std::to_string(b.trunc_order()) + ")");
    const std::int64_t n = a.trunc_order();
    const std::size_t lanes = static_cast<std::size_t>(n) + 1;

    const mpz_class max_a = max_abs_coeff(a.coeffs());
    const mpz_class max_b = max_abs_coeff(b.coeffs());
    if (max_a == 0 || max_b == 0)
        return TruncatedIntegerSeries::zero(n);

    // Every product coefficient is a convolution of at most `lanes` terms.
    const mpz_class bound = mpz_class(static_cast<unsigned long>(lanes)) * max_a * max_b;
    const std::size_t lane_bits = mpz_sizeinbase(bound.get_mpz_t(), 2) + 1;
    const std::size_t lane_bytes = (lane_bits + 7) / 8;

    mpz_class prod;
    {
        const mpz_class packed_a = pack_lanes(a.coeffs(), lane_bytes);
        if (&a == &b) {
            mpz_mul(prod.get_mpz_t(), packed_a.get_mpz_t(), packed_a.get_mpz_t());
        } else {
            const mpz_class packed_b = pack_lanes(b.coeffs(), lane_bytes);
            mpz_mul(prod.get_mpz_t(), packed_a.get_mpz_t(), packed_b.get_mpz_t());
        }
    }
    return TruncatedIntegerSeries(unpack_lanes(prod, 2 * lanes - 1, lanes, lane_bytes));
}

TruncatedIntegerSeries power(const TruncatedIntegerSeries& a, std::uint64_t e) {
    if (e == 0)
        return TruncatedIntegerSeries::one(a.trunc_order());
    TruncatedIntegerSeries base = a;
    TruncatedIntegerSeries result = TruncatedIntegerSeries::one(a.trunc_order());
    bool result_is_one = true;
    while (e > 0) {
        if (e & 1) {
            result = result_is_one ? base : multiply(result, base);
            result_is_one = false;
        }
        e >>= 1;
        if (e > 0)
            base = multiply(base, base);
    }
    return result;
}

TruncatedIntegerSeries eta_power_series(std::int64_t N) {
    if (N < 1)
        throw UsageError("eta_power_series: truncation order must be >= 1");
    const std::int64_t m = N - 1; // order of the inner product prod (1-q^n)^24

    // Pentagonal number theorem: prod (1-q^n) = sum_j (-1)^j q^{j(3j-1)/2}
    // over all j in Z, giving O(sqrt(N)) terms.
    std::vector<std::pair<std::int64_t, int>> pent;
    pent.emplace_back(0, 1);
    for (std::int64_t j = 1;; ++j) {
        const std::int64_t g1 = j * (3 * j - 1) / 2;
        const std::int64_t g2 = j * (3 * j + 1) / 2;
        if (g1 > m && g2 > m) break;
        const int s = (j % 2 == 1) ? -1 : 1;
        if (g1 <= m) pent.emplace_back(g1, s);
        if (g2 <= m) pent.emplace_back(g2, s);
    }

    // Square the sparse series directly; counts of two-term pentagonal
    // representations stay tiny, so int64 accumulation is exact.
    std::vector<std::int64_t> sq(static_cast<std::size_t>(m) + 1, 0);
    for (const auto& [e1, s1] : pent) {
        for (const auto& [e2, s2] : pent) {
            const std::int64_t e = e1 + e2;
            if (e > m) continue;
            sq[static_cast<std::size_t>(e)] += s1 * s2;
        }
    }
    std::vector<mpz_class> sq_z(sq.size());
    for (std::size_t i = 0; i < sq.size(); ++i)
        sq_z[i] = static_cast<long>(sq[i]);

    // 2 -> 4 -> 8 -> 16 -> 24: four dense multiplies total.
    const TruncatedIntegerSeries p2{std::move(sq_z)};
    const TruncatedIntegerSeries p4 = multiply(p2, p2);
    const TruncatedIntegerSeries p8 = multiply(p4, p4);
    const TruncatedIntegerSeries p16 = multiply(p8, p8);
    const TruncatedIntegerSeries p24 = multiply(p16, p8);

    std::vector<mpz_class> delta(static_cast<std::size_t>(N) + 1);
    for (std::int64_t i = 0; i <= m; ++i)
        delta[static_cast<std::size_t>(i + 1)] = p24[i];
    return TruncatedIntegerSeries(std::move(delta));
}

mpq_class bernoulli(int n) {
    if (n < 2 || n % 2 != 0)
        throw UsageError("bernoulli: argument must be an even integer >= 2");
    std::vector<mpq_class> b(static_cast<std::size_t>(n) + 1);
    b[0] = 1;
    mpz_class binom;
    for (int m = 1; m <= n; ++m) {
        mpq_class acc = 0;
        for (int j = 0; j < m; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(m) + 1,
                         static_cast<unsigned long>(j));
            acc += mpq_class(binom) * b[static_cast<std::size_t>(j)];
        }
        b[static_cast<std::size_t>(m)] = -acc / (m + 1);
    }
    return b[static_cast<std::size_t>(n)];
}

std::vector<mpz_class> sigma_table(int r, std::int64_t N) {
    if (r < 1)
        throw UsageError("sigma_table: exponent must be >= 1");
    if (N < 1)
        throw UsageError("sigma_table: table length must be >= 1");
    std::vector<mpz_class> table(static_cast<std::size_t>(N) + 1);
    mpz_class dr;
    for (std::int64_t d = 1; d <= N; ++d) {
        mpz_ui_pow_ui(dr.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(r));
        for (std::int64_t k = d; k <= N; k += d)
            table[static_cast<std::size_t>(k)] += dr;
    }
    return table;
}

TruncatedIntegerSeries eisenstein_series(int weight, std::int64_t N) {
    switch (weight) {
    case 4: case 6: case 8: case 10: case 14:
        break;
    default:
        throw UsageError("eisenstein_series: weight must be one of {4, 6, 8, 10, 14}; "
                         "other weights have non-integral normalisation");
    }
    if (N < 0)
        throw UsageError("eisenstein_series: truncation order must be >= 0");

    const mpq_class c = mpq_class(-2 * weight) / bernoulli(weight);
    if (c.get_den() != 1)
        throw InternalError("eisenstein_series: -2w/B_w unexpectedly non-integral");
    const mpz_class scale = c.get_num();

    std::vector<mpz_class> coeffs(static_cast<std::size_t>(N) + 1);
    coeffs[0] = 1;
    if (N >= 1) {
        const std::vector<mpz_class> sig = sigma_table(weight - 1, N);
        for (std::int64_t n = 1; n <= N; ++n)
            coeffs[static_cast<std::size_t>(n)] = scale * sig[static_cast<std::size_t>(n)];
    }
    return TruncatedIntegerSeries(std::move(coeffs));
}

} // namespace mfbias
