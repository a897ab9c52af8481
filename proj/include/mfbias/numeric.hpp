#ifndef MFBIAS_NUMERIC_HPP
#define MFBIAS_NUMERIC_HPP

#include <cmath>
#include <cstdint>
#include <string_view>

namespace mfbias {

// Euler-Mascheroni constant, used in the Euler-product limit constant.
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Neumaier-compensated accumulator.  Partial sums over 10^6..10^7 prime
// terms of magnitude ~p^{-1/2} lose digits under naive addition; the
// compensation keeps the result schedule-independent to ~1 ulp.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// FNV-1a, used for deterministic coefficient digests in reports.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace mfbias

#endif
