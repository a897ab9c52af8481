#ifndef MFBIAS_ERRORS_HPP
#define MFBIAS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mfbias {

// Error taxonomy shared by the library and the CLI.  The category string is
// stable and machine-readable; the CLI copies it into JSON error blocks.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& msg)
        : std::runtime_error(msg), category_(std::move(category)) {}
    const std::string& category() const { return category_; }

private:
    std::string category_;
};

// Caller violated a documented precondition (bad flag value, mismatched
// truncation orders, degenerate ranges).
struct UsageError : Error {
    explicit UsageError(const std::string& msg) : Error("usage", msg) {}
};

// External input failed schema or bound validation (import files).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

// Operation is not defined for this object (e.g. L-integrals on imported
// forms that carry no exact coefficient table).
struct UnsupportedError : Error {
    explicit UnsupportedError(const std::string& msg) : Error("unsupported", msg) {}
};

// Request exceeds what the configured resources can deliver (sieve limit,
// series truncation too short for a requested tolerance).
struct ResourceError : Error {
    explicit ResourceError(const std::string& msg) : Error("resource", msg) {}
};

// Index or evaluation point outside the tabulated range.
struct RangeError : Error {
    explicit RangeError(const std::string& msg) : Error("range", msg) {}
};

// A computation could not reach a verdict (e.g. all derivatives below the
// vanishing-order threshold).  Reported, never guessed around.
struct ComputationError : Error {
    explicit ComputationError(const std::string& msg) : Error("computation", msg) {}
};

// An internal invariant failed; indicates a bug, not a caller mistake.
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error("internal", msg) {}
};

} // namespace mfbias

#endif
