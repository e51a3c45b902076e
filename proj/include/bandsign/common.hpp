#pragma once

// Shared vocabulary for the library: evaluator aliases, error types,
// intervals, decay classes and the integration result record.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bandsign {

using cplx = std::complex<double>;
using real_fn = std::function<double(double)>;
using complex_fn = std::function<cplx(cplx)>;

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConvergence : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InvalidBracket : Error { using Error::Error; };
struct ScanTooCoarse : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct ConstructionFailed : Error { using Error::Error; };
struct NoZero : Error { using Error::Error; };
struct BudgetExhausted : Error { using Error::Error; };
struct TruncationExceeded : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Basic records
// ---------------------------------------------------------------------------

struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo < hi)) throw DomainError("Interval: requires lo < hi");
    }
    double width() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::int64_t evaluations = 0;
};

// Tail behaviour of an integrand on the real line, declared by the caller.
//   polynomial(p):  |f(x)| ~ |x|^{-p} for large |x| (p > 1)
//   exponential(e): |f(x)| <~ exp(-e|x|)
//   compact(R):     f vanishes outside [-R, R]
struct DecayClass {
    enum class Kind { Polynomial, Exponential, Compact };
    Kind kind;
    double param;

    static DecayClass polynomial(double p) { return {Kind::Polynomial, p}; }
    static DecayClass exponential(double eps) { return {Kind::Exponential, eps}; }
    static DecayClass compact(double radius) { return {Kind::Compact, radius}; }
};

}  // namespace bandsign
