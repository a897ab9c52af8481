#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mfbias/primes.hpp"

namespace mfbias {

// A level-1 eigenform Delta_k = Delta * E_{k-12} with its exact tau_k table,
// or an imported newform carrying prime-indexed normalized coefficients only.
// Instances are treated as immutable after construction.
struct Eigenform {
    int weight = 0;
    std::int64_t level = 1;
    std::int64_t trunc_order = 0; // largest index with coefficient data
    int root_number = 1;          // (-1)^(k/2) for the built-ins
    bool imported = false;

    std::vector<mpz_class> tau; // exact tau_k(0..N); empty for imports
    std::vector<double> a_norm; // a_f(n) = tau_k(n) * n^{-(k-1)/2}; empty for imports
    std::vector<std::pair<std::int64_t, double>> prime_a; // imports: (p, a_f(p)) ascending

    bool has_exact_table() const { return !tau.empty(); }

    // Normalized coefficient at a prime.  Range error past the table.
    double a_at_prime(std::int64_t p) const;

    // Normalized coefficient at any index; imported forms reconstruct
    // composite values by the Hecke recursion from their prime data.
    double a(std::int64_t n) const;
};

Eigenform build_delta_k(int k, std::int64_t N);

// CSV schema: header `# weight=<k>, level=<N>, root=<+1|-1>`, then rows
// `p,a_p` with p ascending primes.
Eigenform import_coefficients(std::istream& in);
void export_prime_coeffs_csv(const Eigenform& f, std::int64_t limit, std::ostream& out);

// Exact-tau export: rows `n,tau`, n = 1..limit.
void export_tau_csv(const Eigenform& f, std::int64_t limit, std::ostream& out);

struct HeckeReport {
    std::int64_t bound = 0;
    // coprime pairs (m, n), m <= n, with tau(mn) != tau(m)tau(n)
    std::vector<std::pair<std::int64_t, std::int64_t>> multiplicative_failures;
    // primes p with tau(p^2) != tau(p)^2 - p^(k-1)
    std::vector<std::int64_t> prime_square_failures;
    bool ok() const {
        return multiplicative_failures.empty() && prime_square_failures.empty();
    }
};

// Verifies both Hecke invariants exactly for all applicable indices <= bound.
HeckeReport hecke_check(const Eigenform& f, std::int64_t bound);

struct DeligneReport {
    std::int64_t prime_limit = 0;
    std::vector<std::int64_t> violations; // primes with tau(p)^2 > 4 p^(k-1)
    bool ok() const { return violations.empty(); }
};

// Exact integer comparison tau_k(p)^2 <= 4 p^(k-1) for p <= prime_limit.
DeligneReport deligne_check(const Eigenform& f, std::int64_t prime_limit);

struct AxisValue {
    double value = 0.0;      // sum_{n<=terms} tau_k(n) e^{-2 pi n t}
    double tail_bound = 0.0; // proven bound on the omitted tail
    std::int64_t terms = 0;
};

// f(it) = sum tau_k(n) e^{-2 pi n t}, truncated once the geometric tail bound
// derived from |tau_k(n)| <= n^{(k+1)/2} drops below tail_tol.
AxisValue evaluate_imaginary_axis(const Eigenform& f, double t, double tail_tol);

// points values t_i = t_min * (t_max/t_min)^{i/points}, i = 1..points,
// covering (t_min, t_max].
struct GeometricGrid {
    double t_min = 1.0;
    double t_max = 20.0;
    int points = 200;
};

std::vector<double> grid_points(const GeometricGrid& grid);

struct MizumotoReport {
    std::vector<double> t_values;
    std::vector<double> values;
    std::vector<double> tail_bounds;
    std::vector<double> failures; // grid points with f(it) <= 0
    bool all_positive = false;
};

// Numerical evidence for Mizumoto positivity on the grid; not a proof.
MizumotoReport mizumoto_check(const Eigenform& f, const GeometricGrid& grid);

struct SatakeAngle {
    std::int64_t p = 0;
    double theta = 0.0; // in [0, pi], a_f(p) = 2 cos(theta)
};

struct SatakeResult {
    std::vector<SatakeAngle> angles;
    std::int64_t clamp_engaged = 0; // |a/2| exceeded 1 by float dust
    double max_excess = 0.0;        // largest |a/2| - 1 seen among clamped
};

SatakeResult satake_angles(const Eigenform& f, const std::vector<std::int64_t>& primes);

} // namespace mfbias
