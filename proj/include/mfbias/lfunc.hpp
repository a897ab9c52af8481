#pragma once

#include <cstdint>
#include <vector>

#include "mfbias/forms.hpp"

namespace mfbias {

struct QuadratureResult {
    double value = 0.0;
    double error_bound = 0.0; // last refinement delta + integral tail bound
    int panels = 0;
    double Y = 0.0; // truncation point of [1, Y]
};

// Raw integral I_m = int_1^Y f(iy) (log y)^m y^{(k-2)/2} dy by adaptive
// Gauss-Legendre panels; Y from the explicit tail bound |f(iy)| <= C_k
// e^{-2 pi y}.  No parity factor applied.
QuadratureResult lambda_integral_raw(const Eigenform& f, int m, double tol, int nodes = 16);

// Lambda^(m)(1/2) = (1 + (-1)^{k/2+m}) I_m.  Returns exactly 0 without
// quadrature when k/2 + m is odd; otherwise |error| <= 2*tol.
QuadratureResult lambda_derivative_full(const Eigenform& f, int m, double tol, int nodes = 16);

double lambda_derivative(const Eigenform& f, int m, double tol);

struct CentralData {
    int weight = 0;
    int J = 0;
    std::vector<double> lambda_derivs; // Lambda^(j)(1/2), j = 0..J
    std::vector<double> error_bounds;  // per derivative; 0 for parity zeros
    std::vector<int> parity_forced_zeros;
    int m = 0;              // first j with |Lambda^(j)| above threshold
    double l_central = 0.0; // L^(m)(1/2) = Lambda^(m)(1/2) (2 pi)^{k/2} / (k/2-1)!
    double threshold = 0.0;
};

// Determines the vanishing order by scanning derivatives 0..J against the
// nonzeroness threshold.  All below threshold -> computation error
// (indeterminate order), never a guess.
CentralData vanishing_order(const Eigenform& f, int J, double threshold = 1e-8,
                            double tol = 1e-12, int nodes = 16);

struct SuperpositivityEntry {
    int j = 0;
    double value = 0.0;
    double error_bound = 0.0;
    bool parity_zero = false;
    bool strictly_positive = false; // value > 10 x error bound
};

struct SuperpositivityReport {
    std::vector<SuperpositivityEntry> entries;
    bool pass = false; // all values >= -tol
};

SuperpositivityReport superpositivity_certificate(const Eigenform& f, int J, double tol);

struct BetaHalf {
    double value = 0.0;        // = scheme_crvz
    double scheme_crvz = 0.0;  // Cohen-Rodriguez Villegas-Zagier acceleration
    double scheme_euler = 0.0; // iterated averaging of partial sums
};

// L(1/2, chi_4) = sum (-1)^n (2n+1)^{-1/2} by two independent alternating-
// series accelerations.
BetaHalf dirichlet_beta_half_detail(double tol);
double dirichlet_beta_half(double tol);

} // namespace mfbias
