#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace mfbias {

// Segmented sieve of Eratosthenes.  Streams every prime <= limit exactly
// once, in ascending order, touching O(sqrt(limit) + segment) memory.  The
// segment is a byte map over odd numbers; the default covers ~512K integers
// per pass, sized to stay inside L2.
class PrimeStream {
public:
    static constexpr std::int64_t kMaxLimit = 100'000'000;
    static constexpr std::int64_t kDefaultSegmentBytes = 256 * 1024;

    // segment_bytes = 0 picks up the process-wide default (CLI flag hook).
    explicit PrimeStream(std::int64_t limit, std::int64_t segment_bytes = 0);

    std::int64_t limit() const { return limit_; }
    std::int64_t segment_bytes() const { return segment_bytes_; }

    // Invokes emit(p) for every prime p <= limit, ascending.
    void for_each(const std::function<void(std::int64_t)>& emit) const;

    std::vector<std::int64_t> to_vector() const;

private:
    std::int64_t limit_;
    std::int64_t segment_bytes_;
};

PrimeStream segmented_sieve(std::int64_t X, std::int64_t segment_bytes = 0);

// Process-wide sieve segment size used when a PrimeStream is built without
// an explicit one.  Set once (by the CLI flag) before computation starts;
// affects performance only, never the emitted primes.
std::int64_t default_segment_bytes();
void set_default_segment_bytes(std::int64_t bytes);

// Geometric evaluation points x_i = x_min * (X/x_min)^(i/(count-1)),
// i = 0..count-1; both endpoints included.
struct CheckpointSchedule {
    std::vector<double> x_values;
    double ratio = 1.0; // common quotient x_{i+1}/x_i
};

CheckpointSchedule checkpoints(double x_min, double X, int count);

} // namespace mfbias
