#include "mfbias/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "mfbias/errors.hpp"
#include "mfbias/numeric.hpp"
#include "mfbias/series.hpp"

namespace mfbias {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_prime_trial(std::int64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

double Eigenform::a_at_prime(std::int64_t p) const {
    if (!imported) {
        if (p < 1 || p > trunc_order)
            throw RangeError("coefficient index " + std::to_string(p) +
                             " beyond table of order " + std::to_string(trunc_order));
        return a_norm[static_cast<std::size_t>(p)];
    }
    auto it = std::lower_bound(prime_a.begin(), prime_a.end(), p,
                               [](const auto& e, std::int64_t v) { return e.first < v; });
    if (it == prime_a.end() || it->first != p)
        throw RangeError("imported form has no coefficient at p = " + std::to_string(p));
    return it->second;
}

namespace {

// a_f(p^e) from a_f(p): Hecke recursion u_{j+1} = a_p u_j - u_{j-1} away from
// the level, a_p^e at ramified primes.
double prime_power_a(const Eigenform& f, std::int64_t p, int e) {
    const double ap = f.a_at_prime(p);
    if (f.level % p == 0)
        return std::pow(ap, e);
    double prev = 1.0, cur = ap;
    for (int j = 1; j < e; ++j) {
        const double next = ap * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

} // namespace

double Eigenform::a(std::int64_t n) const {
    if (n < 1)
        throw UsageError("coefficient index must be >= 1");
    if (!imported) {
        if (n > trunc_order)
            throw RangeError("coefficient index " + std::to_string(n) +
                             " beyond table of order " + std::to_string(trunc_order));
        return a_norm[static_cast<std::size_t>(n)];
    }
    double result = 1.0;
    std::int64_t rem = n;
    for (std::int64_t d = 2; d * d <= rem; ++d) {
        if (rem % d != 0) continue;
        int e = 0;
        while (rem % d == 0) { rem /= d; ++e; }
        result *= prime_power_a(*this, d, e);
    }
    if (rem > 1)
        result *= prime_power_a(*this, rem, 1);
    return result;
}

Eigenform build_delta_k(int k, std::int64_t N) {
    switch (k) {
    case 12: case 16: case 18: case 20: case 22: case 26:
        break;
    default:
        throw UsageError("build_delta_k: weight must be one of {12, 16, 18, 20, 22, 26}");
    }
    if (N < 1)
        throw UsageError("build_delta_k: truncation order must be >= 1");

    TruncatedIntegerSeries series = eta_power_series(N);
    if (k > 12)
        series = multiply(series, eisenstein_series(k - 12, N));

    Eigenform f;
    f.weight = k;
    f.level = 1;
    f.trunc_order = N;
    f.root_number = (k / 2) % 2 == 0 ? 1 : -1;
    f.imported = false;
    f.tau = std::move(series).release();

    f.a_norm.resize(static_cast<std::size_t>(N) + 1);
    const double exponent = -(k - 1) / 2.0;
    for (std::int64_t n = 1; n <= N; ++n)
        f.a_norm[static_cast<std::size_t>(n)] =
            f.tau[static_cast<std::size_t>(n)].get_d() *
            std::pow(static_cast<double>(n), exponent);
    return f;
}

namespace {

// header: `# weight=<k>, level=<N>, root=<+1|-1>`
void parse_import_header(const std::string& line, Eigenform& f) {
    std::string s = line;
    if (s.empty() || s[0] != '#')
        throw ValidationError("line 1: expected header `# weight=<k>, level=<N>, root=<+1|-1>`");
    s.erase(0, 1);
    bool saw_weight = false, saw_level = false, saw_root = false;
    std::stringstream ss(s);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line 1: malformed header field `" + field + "`");
        std::string key = field.substr(0, eq);
        std::string val = field.substr(eq + 1);
        const auto trim = [](std::string& t) {
            t.erase(0, t.find_first_not_of(" \t"));
            t.erase(t.find_last_not_of(" \t") + 1);
        };
        trim(key);
        trim(val);
        try {
            if (key == "weight") { f.weight = std::stoi(val); saw_weight = true; }
            else if (key == "level") { f.level = std::stoll(val); saw_level = true; }
            else if (key == "root") { f.root_number = std::stoi(val); saw_root = true; }
            else throw ValidationError("line 1: unknown header key `" + key + "`");
        } catch (const ValidationError&) {
            throw;
        } catch (const std::exception&) {
            throw ValidationError("line 1: non-numeric value for `" + key + "`");
        }
    }
    if (!saw_weight || !saw_level || !saw_root)
        throw ValidationError("line 1: header must supply weight, level and root");
    if (f.weight < 1)
        throw ValidationError("line 1: weight must be >= 1");
    if (f.level < 1)
        throw ValidationError("line 1: level must be >= 1");
    if (f.root_number != 1 && f.root_number != -1)
        throw ValidationError("line 1: root must be +1 or -1");
}

} // namespace

Eigenform import_coefficients(std::istream& in) {
    Eigenform f;
    f.imported = true;

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("line 1: empty input, header missing");
    parse_import_header(line, f);

    std::int64_t lineno = 1;
    std::int64_t last_p = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const std::string where = "line " + std::to_string(lineno);
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ValidationError(where + ": expected `p,a_p`");
        std::int64_t p = 0;
        double ap = 0.0;
        try {
            std::size_t used = 0;
            p = std::stoll(line.substr(0, comma), &used);
            ap = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw ValidationError(where + ": malformed row `" + line + "`");
        }
        if (!is_prime_trial(p))
            throw ValidationError(where + ": index " + std::to_string(p) + " is not prime");
        if (p <= last_p)
            throw ValidationError(where + ": primes must be strictly ascending");
        if (!std::isfinite(ap) || std::abs(ap) > 2.0 + 1e-9)
            throw ValidationError(where + ": |a_p| = " + format17(std::abs(ap)) +
                                  " violates the Deligne bound 2 + 1e-9");
        f.prime_a.emplace_back(p, ap);
        last_p = p;
    }
    f.trunc_order = f.prime_a.empty() ? 1 : f.prime_a.back().first;
    return f;
}

void export_prime_coeffs_csv(const Eigenform& f, std::int64_t limit, std::ostream& out) {
    out << "# weight=" << f.weight << ", level=" << f.level
        << ", root=" << (f.root_number > 0 ? "+1" : "-1") << "\n";
    if (f.imported) {
        for (const auto& [p, ap] : f.prime_a)
            if (p <= limit)
                out << p << "," << format17(ap) << "\n";
        return;
    }
    if (limit > f.trunc_order)
        throw RangeError("export limit exceeds coefficient table");
    PrimeStream(limit).for_each([&](std::int64_t p) {
        out << p << "," << format17(f.a_norm[static_cast<std::size_t>(p)]) << "\n";
    });
}

void export_tau_csv(const Eigenform& f, std::int64_t limit, std::ostream& out) {
    if (!f.has_exact_table())
        throw UnsupportedError("exact tau table unavailable for imported forms");
    if (limit < 1 || limit > f.trunc_order)
        throw RangeError("export limit must lie in [1, trunc_order]");
    for (std::int64_t n = 1; n <= limit; ++n)
        out << n << "," << f.tau[static_cast<std::size_t>(n)].get_str() << "\n";
}

HeckeReport hecke_check(const Eigenform& f, std::int64_t bound) {
    if (!f.has_exact_table())
        throw UnsupportedError("hecke_check needs the exact tau table (built-in forms only)");
    if (bound < 1 || bound > f.trunc_order)
        throw UsageError("hecke_check: bound must lie in [1, trunc_order]");

    HeckeReport report;
    report.bound = bound;

    const auto& tau = f.tau;
    for (std::int64_t m = 2; m * m <= bound; ++m) {
        for (std::int64_t n = m; m * n <= bound; ++n) {
            if (std::gcd(m, n) != 1) continue;
            if (tau[static_cast<std::size_t>(m * n)] !=
                tau[static_cast<std::size_t>(m)] * tau[static_cast<std::size_t>(n)])
                report.multiplicative_failures.emplace_back(m, n);
        }
    }

    mpz_class pk1, rhs;
    for (std::int64_t p = 2; p * p <= bound; ++p) {
        if (!is_prime_trial(p)) continue;
        mpz_ui_pow_ui(pk1.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(f.weight - 1));
        rhs = tau[static_cast<std::size_t>(p)] * tau[static_cast<std::size_t>(p)] - pk1;
        if (tau[static_cast<std::size_t>(p * p)] != rhs)
            report.prime_square_failures.push_back(p);
    }
    return report;
}

DeligneReport deligne_check(const Eigenform& f, std::int64_t prime_limit) {
    if (prime_limit < 2)
        throw UsageError("deligne_check: prime_limit must be >= 2");
    DeligneReport report;
    report.prime_limit = std::min(prime_limit, f.trunc_order);

    if (f.imported) {
        for (const auto& [p, ap] : f.prime_a)
            if (p <= report.prime_limit && std::abs(ap) > 2.0 + 1e-9)
                report.violations.push_back(p);
        return report;
    }

    mpz_class lhs, rhs;
    PrimeStream(report.prime_limit).for_each([&](std::int64_t p) {
        lhs = f.tau[static_cast<std::size_t>(p)] * f.tau[static_cast<std::size_t>(p)];
        mpz_ui_pow_ui(rhs.get_mpz_t(), static_cast<unsigned long>(p),
                      static_cast<unsigned long>(f.weight - 1));
        rhs *= 4;
        if (lhs > rhs)
            report.violations.push_back(p);
    });
    return report;
}

AxisValue evaluate_imaginary_axis(const Eigenform& f, double t, double tail_tol) {
    if (!f.has_exact_table())
        throw UnsupportedError("evaluate_imaginary_axis needs the exact tau table");
    if (!(t > 0.0))
        throw UsageError("evaluate_imaginary_axis: t must be > 0");
    if (!(tail_tol > 0.0))
        throw UsageError("evaluate_imaginary_axis: tail_tol must be > 0");

    // Tail past M: sum_{n>M} n^b e^{-2 pi n t} with b = (k+1)/2 is bounded by
    // a geometric series with ratio r = (1 + 1/(M+1))^b e^{-2 pi t} once
    // r < 1.  All bookkeeping in logs to dodge underflow.
    const double b = (f.weight + 1) / 2.0;
    const double log_tol = std::log(tail_tol);
    std::int64_t M = 0;
    double tail_bound = 0.0;
    for (M = 1;; ++M) {
        if (M > f.trunc_order)
            throw ResourceError("evaluate_imaginary_axis: truncation order " +
                                std::to_string(f.trunc_order) +
                                " cannot reach the requested tail tolerance; rebuild with larger N");
        const double log_r = b * std::log1p(1.0 / static_cast<double>(M + 1)) - kTwoPi * t;
        if (log_r >= 0.0) continue;
        const double log_first = b * std::log(static_cast<double>(M + 1)) -
                                 kTwoPi * static_cast<double>(M + 1) * t;
        const double log_tail = log_first - std::log1p(-std::exp(log_r));
        if (log_tail <= log_tol) {
            tail_bound = std::exp(log_tail);
            break;
        }
    }

    CompensatedSum sum;
    const double q = std::exp(-kTwoPi * t);
    double qn = 1.0;
    for (std::int64_t n = 1; n <= M; ++n) {
        qn *= q;
        sum.add(f.tau[static_cast<std::size_t>(n)].get_d() * qn);
    }
    return {sum.value(), tail_bound, M};
}

std::vector<double> grid_points(const GeometricGrid& grid) {
    if (!(grid.t_min > 0.0) || !(grid.t_max > grid.t_min))
        throw UsageError("grid_points: need 0 < t_min < t_max");
    if (grid.points < 1)
        throw UsageError("grid_points: need at least one point");
    std::vector<double> ts(static_cast<std::size_t>(grid.points));
    for (int i = 1; i <= grid.points; ++i)
        ts[static_cast<std::size_t>(i - 1)] =
            grid.t_min * std::pow(grid.t_max / grid.t_min,
                                  static_cast<double>(i) / grid.points);
    ts.back() = grid.t_max;
    return ts;
}

MizumotoReport mizumoto_check(const Eigenform& f, const GeometricGrid& grid) {
    if (!f.has_exact_table())
        throw UnsupportedError("mizumoto_check needs the exact tau table");
    MizumotoReport report;
    report.t_values = grid_points(grid);

    if ((f.weight / 2) % 2 == 1)
        for (const double t : report.t_values)
            if (t == 1.0)
                throw UsageError("mizumoto_check: grid touches t = 1, where automorphy "
                                 "forces f(i) = 0 for odd k/2; shift the grid");

    report.values.reserve(report.t_values.size());
    report.tail_bounds.reserve(report.t_values.size());
    for (const double t : report.t_values) {
        const double tol = std::exp(-kTwoPi * t) * 1e-10; // relative to the leading term
        const AxisValue av = evaluate_imaginary_axis(f, t, tol);
        report.values.push_back(av.value);
        report.tail_bounds.push_back(av.tail_bound);
        if (!(av.value > 0.0))
            report.failures.push_back(t);
    }
    report.all_positive = report.failures.empty();
    return report;
}

SatakeResult satake_angles(const Eigenform& f, const std::vector<std::int64_t>& primes) {
    SatakeResult result;
    result.angles.reserve(primes.size());
    for (const std::int64_t p : primes) {
        double half = f.a_at_prime(p) / 2.0;
        if (half > 1.0 || half < -1.0) {
            ++result.clamp_engaged;
            result.max_excess = std::max(result.max_excess, std::abs(half) - 1.0);
            half = std::clamp(half, -1.0, 1.0);
        }
        result.angles.push_back({p, std::acos(half)});
    }
    return result;
}

} // namespace mfbias
