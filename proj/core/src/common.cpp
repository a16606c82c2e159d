#include "regulab/common.hpp"

#include <cstdlib>
#include <limits>

namespace regulab {

std::uint64_t enumeration_budget() {
    static const std::uint64_t budget = [] {
        if (const char* env = std::getenv("REGULAB_BUDGET")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end && *end == '\0' && v > 0) return static_cast<std::uint64_t>(v);
        }
        return std::uint64_t{1} << 24;
    }();
    return budget;
}

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < exp; ++i) {
        if (base != 0 && r > std::numeric_limits<std::uint64_t>::max() / base)
            throw BudgetError("checked_pow: overflow computing " + std::to_string(base) +
                              "^" + std::to_string(exp));
        r *= base;
    }
    return r;
}

std::uint64_t require_budget(std::uint32_t p, std::uint32_t n, const char* what) {
    std::uint64_t size;
    try {
        size = checked_pow(p, n);
    } catch (const BudgetError&) {
        throw BudgetError(std::string(what) + ": p^n overflows uint64 (p=" +
                          std::to_string(p) + ", n=" + std::to_string(n) + ")");
    }
    if (size > enumeration_budget())
        throw BudgetError(std::string(what) + ": p^n = " + std::to_string(size) +
                          " exceeds budget " + std::to_string(enumeration_budget()));
    return size;
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {}

std::uint64_t CounterRng::next() {
    // mix seed, stream and counter through three rounds; counter-based so the
    // k-th draw is a pure function of (seed, stream, k)
    std::uint64_t x = splitmix64(seed_ ^ splitmix64(stream_ ^ 0x6a09e667f3bcc909ull));
    x = splitmix64(x ^ counter_++);
    return splitmix64(x);
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
    if (bound == 0) throw InvariantError("CounterRng::below: bound must be positive");
    // rejection sampling over the largest multiple of bound
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                          std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t v = next();
        if (v < limit) return v % bound;
    }
}

double CounterRng::unit() {
    return static_cast<double>(next() >> 11) * 0x1p-53;
}

double pairwise_sum(std::span<const double> xs) {
    return pairwise_sum_indexed(xs.size(), [&](std::uint64_t i) { return xs[i]; });
}

std::complex<double> pairwise_sum(std::span<const std::complex<double>> xs) {
    return pairwise_csum_indexed(xs.size(), [&](std::uint64_t i) { return xs[i]; });
}

}  // namespace regulab
