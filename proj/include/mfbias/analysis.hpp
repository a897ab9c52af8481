#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfbias/forms.hpp"
#include "mfbias/primes.hpp"

namespace mfbias {

struct BiasCheckpoint {
    double x = 0.0;
    double S = 0.0; // sum_{p<=x} a_f(p)/sqrt(p)
    std::int64_t count_pos = 0;
    std::int64_t count_neg = 0;
    std::int64_t count_zero = 0;
};

struct BiasSeries {
    std::string source;
    std::vector<BiasCheckpoint> checkpoints;
    double predicted_slope = 0.0;
    bool predicted_slope_known = false;
};

// Checkpointed S_f(x) with compensated summation and per-checkpoint sign
// counters.  X < 2 yields an all-zero series; X past the coefficient table
// is a range error.
BiasSeries bias_sum(const Eigenform& f, double X, const CheckpointSchedule& schedule);

// The chi_4 race: chi(p) = +1 for p = 1 mod 4, -1 for p = 3 mod 4, 0 at 2.
// predicted_slope = -1/2.
BiasSeries dirichlet_bias(double X, const CheckpointSchedule& schedule);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms_residual = 0.0;
    double x_min = 0.0; // fit window [x_min, x_max]
    double x_max = 0.0;
    std::int64_t points_used = 0;
};

// Unweighted least squares of S against log log x over checkpoints with
// x >= x_min; needs at least 8 such checkpoints.
SlopeFit slope_fit(const BiasSeries& series, double x_min);

enum class BiasVerdict { positive_bias, negative_bias, inconsistent };

const char* to_string(BiasVerdict v);

// Compares the fitted slope sign against sign(predicted_slope);
// "inconsistent" only when the signs differ and |slope| exceeds the
// 2 x rms-residual decision band.
BiasVerdict classify_bias_predicted(const SlopeFit& fit, double predicted_slope);

// GL(2) form of the verdict: predicted slope 1/2 - m.
BiasVerdict classify_bias(const SlopeFit& fit, int m);

struct SatoTateHistogram {
    std::vector<double> edges;     // bins+1 edges over [0, pi]
    std::vector<double> empirical; // masses, sum to 1 over nonzero a_f(p)
    std::vector<double> model;     // mu_ST masses per bin
    double discrepancy = 0.0;      // sup over edges of |cum empirical - cum model|
    std::int64_t prime_count = 0;  // primes with a_f(p) != 0
    std::int64_t zero_count = 0;   // excluded a_f(p) = 0 primes
};

// mu_ST cumulative distribution F(theta) = (theta - sin(theta)cos(theta))/pi.
double sato_tate_cdf(double theta);

SatoTateHistogram sato_tate(const Eigenform& f, double X, int bins);

} // namespace mfbias
