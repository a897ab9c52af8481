#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfbias/analysis.hpp"
#include "mfbias/forms.hpp"
#include "mfbias/primes.hpp"

namespace mfbias {

struct EulerCheckpoint {
    double x = 0.0;
    double P = 0.0;      // partial Euler product at s = 1/2
    double scaled = 0.0; // (log x)^m * P(x)
    double ratio = 0.0;  // scaled / predicted_limit
};

struct EulerProductTrace {
    std::string source;
    int m = 0;  // scaling exponent (forced value in diagnostic mode)
    int nu = 0; // -R, R = ord_{s=1} L_2(s, pi): R = 1 for GL(2) newforms, -1 for chi_4
    double l_central = 0.0;
    double predicted_limit = 0.0; // sqrt(2)^nu * l_central / (e^{m gamma} m!)
    std::vector<EulerCheckpoint> checkpoints;
};

// GL(2) local factors (1 - a_f(p) p^{-1/2} + p^{-1})^{-1}, accumulated in
// log space.  m and l_central come from lfunc; force_m >= 0 replaces the
// scaling exponent (and the e^{m gamma} m! constant) while keeping l_central,
// the wrong-scaling diagnostic of the CLI's --force-m.
EulerProductTrace partial_euler_product(const Eigenform& f, double X,
                                        const CheckpointSchedule& schedule,
                                        int m, double l_central, int force_m = -1);

// GL(1) chi_4 local factors (1 - chi_4(p) p^{-1/2})^{-1}; nu = +1, m = 0.
EulerProductTrace partial_euler_product_chi4(double X, const CheckpointSchedule& schedule,
                                             double beta_half, int force_m = -1);

struct DecadeMedian {
    int decade = 0; // checkpoints with x in (10^d, 10^{d+1}]
    double median_abs_log_ratio = 0.0;
    int count = 0;
};

struct DrhReport {
    std::vector<DecadeMedian> decade_medians;
    bool medians_nonincreasing = false;
    double final_decade_median = 0.0;
    bool consistent = false; // final-decade median |log ratio| < log 2
};

DrhReport drh_report(const EulerProductTrace& trace);

struct SlopeConsistencyReport {
    double predicted_slope = 0.0; // R/2 - m
    double fitted_slope = 0.0;
    double deviation = 0.0;
    double band = 0.0;
    bool agrees = false;
};

SlopeConsistencyReport slope_consistency(const EulerProductTrace& trace, const SlopeFit& fit);

} // namespace mfbias
