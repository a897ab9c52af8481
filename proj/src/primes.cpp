#include "mfbias/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mfbias/errors.hpp"

namespace mfbias {

namespace {
std::int64_t g_default_segment_bytes = PrimeStream::kDefaultSegmentBytes;
}

std::int64_t default_segment_bytes() { return g_default_segment_bytes; }

void set_default_segment_bytes(std::int64_t bytes) {
    if (bytes < 1024)
        throw UsageError("segment size must be >= 1024 bytes");
    g_default_segment_bytes = bytes;
}

PrimeStream::PrimeStream(std::int64_t limit, std::int64_t segment_bytes)
    : limit_(limit),
      segment_bytes_(segment_bytes == 0 ? default_segment_bytes() : segment_bytes) {
    if (limit_ < 2)
        throw UsageError("PrimeStream: limit must be >= 2");
    if (limit_ > kMaxLimit)
        throw ResourceError("PrimeStream: limit " + std::to_string(limit_) +
                            " exceeds the supported maximum " + std::to_string(kMaxLimit));
    if (segment_bytes_ < 1024)
        throw UsageError("PrimeStream: segment size must be >= 1024 bytes");
}

namespace {

std::int64_t isqrt64(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

void PrimeStream::for_each(const std::function<void(std::int64_t)>& emit) const {
    emit(2);
    if (limit_ < 3) return;

    // odd base primes up to sqrt(limit), by a plain odd-only sieve
    const std::int64_t root = isqrt64(limit_);
    std::vector<bool> base_composite(static_cast<std::size_t>(root / 2 + 1), false);
    std::vector<std::int64_t> base_primes;
    for (std::int64_t i = 1; 2 * i + 1 <= root; ++i) {
        if (base_composite[static_cast<std::size_t>(i)]) continue;
        const std::int64_t p = 2 * i + 1;
        base_primes.push_back(p);
        for (std::int64_t j = p * p; j <= root; j += 2 * p)
            base_composite[static_cast<std::size_t>(j / 2)] = true;
    }

    // byte map over odd numbers, one segment per pass
    const std::int64_t seg_len = segment_bytes_; // odd values per segment
    std::vector<std::uint8_t> composite(static_cast<std::size_t>(seg_len));
    for (std::int64_t low = 3; low <= limit_; low += 2 * seg_len) {
        const std::int64_t high = std::min(low + 2 * seg_len - 2, limit_);
        std::fill(composite.begin(), composite.end(), 0);
        for (const std::int64_t p : base_primes) {
            if (p * p > high) break;
            std::int64_t first = std::max(p * p, ((low + p - 1) / p) * p);
            if (first % 2 == 0) first += p;
            for (std::int64_t j = first; j <= high; j += 2 * p)
                composite[static_cast<std::size_t>((j - low) / 2)] = 1;
        }
        for (std::int64_t v = low; v <= high; v += 2)
            if (!composite[static_cast<std::size_t>((v - low) / 2)])
                emit(v);
    }
}

std::vector<std::int64_t> PrimeStream::to_vector() const {
    std::vector<std::int64_t> primes;
    if (limit_ >= 16) {
        const double x = static_cast<double>(limit_);
        primes.reserve(static_cast<std::size_t>(1.2 * x / std::log(x)));
    }
    for_each([&primes](std::int64_t p) { primes.push_back(p); });
    return primes;
}

PrimeStream segmented_sieve(std::int64_t X, std::int64_t segment_bytes) {
    return PrimeStream(X, segment_bytes);
}

CheckpointSchedule checkpoints(double x_min, double X, int count) {
    if (!(x_min >= 2.0) || !(x_min < X) || !std::isfinite(X))
        throw UsageError("checkpoints: need 2 <= x_min < X");
    if (count < 2)
        throw UsageError("checkpoints: need count >= 2");

    CheckpointSchedule sched;
    sched.ratio = std::pow(X / x_min, 1.0 / (count - 1));
    sched.x_values.resize(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        sched.x_values[static_cast<std::size_t>(i)] =
            x_min * std::pow(X / x_min, static_cast<double>(i) / (count - 1));
    sched.x_values.front() = x_min;
    sched.x_values.back() = X;
    for (std::size_t i = 1; i < sched.x_values.size(); ++i)
        if (!(sched.x_values[i] > sched.x_values[i - 1]))
            throw UsageError("checkpoints: grid degenerates at this count (points collide)");
    return sched;
}

} // namespace mfbias
