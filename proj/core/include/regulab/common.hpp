#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace regulab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Inputs with incompatible dimensions / characteristics.
struct DimensionError : Error {
    using Error::Error;
};

// An enumeration would exceed the configured point budget.
struct BudgetError : Error {
    using Error::Error;
};

// A verified invariant failed (should not happen on valid inputs).
struct InvariantError : Error {
    using Error::Error;
};

// Maximum number of points p^n (and similar enumeration sizes) we are
// willing to materialize.  Overridable via the REGULAB_BUDGET environment
// variable; the default is 2^24.
std::uint64_t enumeration_budget();

// p^e as uint64, throwing BudgetError on overflow.
std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp);

// Throws BudgetError unless p^n fits within the enumeration budget.
// Returns p^n.
std::uint64_t require_budget(std::uint32_t p, std::uint32_t n,
                             const char* what = "enumeration");

// Counter-based deterministic generator (splitmix64 over seed/stream/counter).
// Identical output regardless of call interleaving elsewhere, which keeps
// parallel and serial runs reproducible.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();
    // Uniform in [0, bound). bound must be > 0.  Rejection sampling, unbiased.
    std::uint64_t below(std::uint64_t bound);
    double unit();  // uniform in [0,1)

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

// Pairwise (tree) summation: deterministic and far more accurate than a
// running sum for the p^n-sized reductions used throughout.
double pairwise_sum(std::span<const double> xs);
std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs);

// Index-generated variant: sums f(0) + ... + f(count-1) pairwise without
// materializing the sequence.
template <class F>
double pairwise_sum_indexed(std::uint64_t count, F&& f, std::uint64_t offset = 0) {
    if (count <= 32) {
        double s = 0.0;
        for (std::uint64_t i = 0; i < count; ++i) s += f(offset + i);
        return s;
    }
    std::uint64_t half = count / 2;
    return pairwise_sum_indexed(half, f, offset) +
           pairwise_sum_indexed(count - half, f, offset + half);
}

template <class F>
std::complex<double> pairwise_csum_indexed(std::uint64_t count, F&& f,
                                           std::uint64_t offset = 0) {
    if (count <= 32) {
        std::complex<double> s{0.0, 0.0};
        for (std::uint64_t i = 0; i < count; ++i) s += f(offset + i);
        return s;
    }
    std::uint64_t half = count / 2;
    return pairwise_csum_indexed(half, f, offset) +
           pairwise_csum_indexed(count - half, f, offset + half);
}

}  // namespace regulab
