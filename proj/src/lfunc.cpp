#include "mfbias/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mfbias/errors.hpp"
#include "mfbias/numeric.hpp"

namespace mfbias {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct GLRule {
    std::vector<double> x; // nodes on [-1, 1]
    std::vector<double> w;
};

// Gauss-Legendre nodes by Newton iteration on the Legendre recurrence.
GLRule make_gl(int n) {
    GLRule rule;
    rule.x.resize(static_cast<std::size_t>(n));
    rule.w.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        rule.x[static_cast<std::size_t>(i)] = -z;
        rule.x[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[static_cast<std::size_t>(i)] = w;
        rule.w[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

double ipow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

// C_k with |f(iy)| <= C_k e^{-2 pi y} for y >= 1, from |tau_k(n)| <= n^{(k+1)/2}:
// C_k = sum_{n>=1} n^{(k+1)/2} e^{-2 pi (n-1)}.
double axis_coefficient_bound(int k) {
    const double b = (k + 1) / 2.0;
    CompensatedSum s;
    for (int n = 1; n < 200; ++n) {
        const double term = std::exp(b * std::log(static_cast<double>(n)) - kTwoPi * (n - 1));
        s.add(term);
        if (n > 3 && term < 1e-18 * s.value()) break;
    }
    return s.value();
}

// (log y)^m y^a weighted integrand of Eq.-style Lambda integrals.
double integrand(const Eigenform& f, double y, int m, int a_exp) {
    const double eval_tol = std::exp(-kTwoPi * y) * 1e-15;
    const double v = evaluate_imaginary_axis(f, y, eval_tol).value;
    return v * ipow(std::log(y), m) * ipow(y, a_exp);
}

double integrate_panels(const Eigenform& f, int m, int a_exp, double Y,
                        int panels, const GLRule& rule) {
    CompensatedSum total;
    const double h = (Y - 1.0) / panels;
    for (int i = 0; i < panels; ++i) {
        const double lo = 1.0 + i * h;
        const double mid = lo + h / 2.0;
        const double half = h / 2.0;
        for (std::size_t j = 0; j < rule.x.size(); ++j)
            total.add(rule.w[j] * half * integrand(f, mid + half * rule.x[j], m, a_exp));
    }
    return total.value();
}

} // namespace

QuadratureResult lambda_integral_raw(const Eigenform& f, int m, double tol, int nodes) {
    if (!f.has_exact_table())
        throw UnsupportedError("Lambda integrals need the exact tau table; "
                               "imported forms carry none");
    if (f.level != 1)
        throw UnsupportedError("the integral representation is implemented for level 1 only");
    if (m < 0 || m > 60)
        throw UsageError("derivative order must lie in [0, 60]");
    if (!(tol > 0.0))
        throw UsageError("quadrature tolerance must be > 0");
    if (nodes < 2 || nodes > 128)
        throw UsageError("nodes per panel must lie in [2, 128]");

    const int a_exp = (f.weight - 2) / 2;
    const double C = axis_coefficient_bound(f.weight);

    // Truncation point: for y >= Y >= 12 (k <= 26, m modest) the weight
    // (log y)^m y^a is below e^{pi y}, so the tail is under C e^{-pi Y}/pi;
    // push Y until that is < tol/2.
    double Y = std::max(12.0, std::log(2.0 * C / (kPi * tol)) / kPi + 0.5);
    while (kPi * Y - m * std::log(std::log(Y)) - a_exp * std::log(Y) < 0.0)
        Y += 1.0;
    const double tail = C * std::exp(-kPi * Y) / kPi;

    const GLRule rule = make_gl(nodes);
    int panels = 8;
    double prev = integrate_panels(f, m, a_exp, Y, panels, rule);
    for (;;) {
        panels *= 2;
        const double cur = integrate_panels(f, m, a_exp, Y, panels, rule);
        const double diff = std::abs(cur - prev);
        if (diff < tol / 2.0)
            return {cur, diff + tail, panels, Y};
        if (panels >= (1 << 14))
            throw ComputationError("lambda_integral_raw: panel refinement did not converge");
        prev = cur;
    }
}

QuadratureResult lambda_derivative_full(const Eigenform& f, int m, double tol, int nodes) {
    if (!f.has_exact_table())
        throw UnsupportedError("Lambda integrals need the exact tau table; "
                               "imported forms carry none");
    if (m < 0)
        throw UsageError("derivative order must be >= 0");
    if (!(tol > 0.0))
        throw UsageError("quadrature tolerance must be > 0");
    // parity factor 1 + (-1)^{k/2 + m} kills odd k/2 + m outright
    if ((f.weight / 2 + m) % 2 == 1)
        return {0.0, 0.0, 0, 0.0};
    QuadratureResult raw = lambda_integral_raw(f, m, tol, nodes);
    raw.value *= 2.0;
    raw.error_bound *= 2.0;
    return raw;
}

double lambda_derivative(const Eigenform& f, int m, double tol) {
    return lambda_derivative_full(f, m, tol).value;
}

CentralData vanishing_order(const Eigenform& f, int J, double threshold, double tol, int nodes) {
    if (J < 2)
        throw UsageError("vanishing_order: need J >= 2");
    if (!(threshold > 0.0))
        throw UsageError("vanishing_order: threshold must be > 0");

    CentralData data;
    data.weight = f.weight;
    data.J = J;
    data.threshold = threshold;
    data.lambda_derivs.resize(static_cast<std::size_t>(J) + 1);
    data.error_bounds.resize(static_cast<std::size_t>(J) + 1);

    int m = -1;
    for (int j = 0; j <= J; ++j) {
        const QuadratureResult r = lambda_derivative_full(f, j, tol, nodes);
        data.lambda_derivs[static_cast<std::size_t>(j)] = r.value;
        data.error_bounds[static_cast<std::size_t>(j)] = r.error_bound;
        if ((f.weight / 2 + j) % 2 == 1)
            data.parity_forced_zeros.push_back(j);
        if (m < 0 && std::abs(r.value) > threshold)
            m = j;
    }
    if (m < 0)
        throw ComputationError("vanishing_order: all derivatives up to J = " +
                               std::to_string(J) + " lie below threshold " +
                               std::to_string(threshold) + "; order indeterminate");
    data.m = m;
    data.l_central = data.lambda_derivs[static_cast<std::size_t>(m)] *
                     ipow(kTwoPi, f.weight / 2) / factorial(f.weight / 2 - 1);
    return data;
}

SuperpositivityReport superpositivity_certificate(const Eigenform& f, int J, double tol) {
    if (J < 0)
        throw UsageError("superpositivity_certificate: need J >= 0");
    if (!(tol > 0.0))
        throw UsageError("superpositivity_certificate: tol must be > 0");

    SuperpositivityReport report;
    report.pass = true;
    for (int j = 0; j <= J; ++j) {
        const bool parity_zero = (f.weight / 2 + j) % 2 == 1;
        const QuadratureResult r = lambda_derivative_full(f, j, tol, 16);
        SuperpositivityEntry e;
        e.j = j;
        e.value = r.value;
        e.error_bound = r.error_bound;
        e.parity_zero = parity_zero;
        e.strictly_positive = !parity_zero && r.value > 10.0 * r.error_bound;
        if (r.value < -tol)
            report.pass = false;
        report.entries.push_back(e);
    }
    return report;
}

namespace {

// Cohen-Rodriguez Villegas-Zagier acceleration for sum (-1)^k a_k, a_k >= 0;
// error ~ (3 + sqrt 8)^{-n}.
double beta_crvz(int n) {
    double d = std::pow(3.0 + std::sqrt(8.0), n);
    d = (d + 1.0 / d) / 2.0;
    double b = -1.0, c = -d, s = 0.0;
    for (int k = 0; k < n; ++k) {
        c = b - c;
        s += c / std::sqrt(2.0 * k + 1.0);
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1.0));
    }
    return s / d;
}

// Iterated averaging (Euler transform) of the raw partial sums.
double beta_euler(int rows) {
    std::vector<double> s(static_cast<std::size_t>(rows));
    double partial = 0.0;
    for (int i = 0; i < rows; ++i) {
        partial += (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(2.0 * i + 1.0);
        s[static_cast<std::size_t>(i)] = partial;
    }
    for (int level = rows - 1; level > 0; --level)
        for (int i = 0; i < level; ++i)
            s[static_cast<std::size_t>(i)] =
                0.5 * (s[static_cast<std::size_t>(i)] + s[static_cast<std::size_t>(i) + 1]);
    return s[0];
}

} // namespace

BetaHalf dirichlet_beta_half_detail(double tol) {
    if (!(tol > 0.0))
        throw UsageError("dirichlet_beta_half: tol must be > 0");
    const int n = std::max(12, static_cast<int>(std::ceil(
                                   -std::log(tol) / std::log(3.0 + std::sqrt(8.0)))) + 3);
    const int rows = std::clamp(static_cast<int>(-std::log2(tol)) + 10, 28, 60);
    BetaHalf b;
    b.scheme_crvz = beta_crvz(n);
    b.scheme_euler = beta_euler(rows);
    b.value = b.scheme_crvz;
    return b;
}

double dirichlet_beta_half(double tol) {
    return dirichlet_beta_half_detail(tol).value;
}

} // namespace mfbias
