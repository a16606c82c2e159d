#include "doctest.h"
#include "regulab/common.hpp"

#include <cmath>
#include <map>
#include <vector>

using namespace regulab;

TEST_CASE("checked_pow matches repeated multiplication and overflows loudly") {
    CHECK(checked_pow(2, 0) == 1);
    CHECK(checked_pow(3, 4) == 81);
    CHECK(checked_pow(2, 63) == (1ull << 63));
    CHECK_THROWS_AS(checked_pow(2, 64), BudgetError);
    CHECK_THROWS_AS(checked_pow(3, 41), BudgetError);
}

TEST_CASE("require_budget enforces the cap") {
    CHECK(require_budget(2, 10) == 1024);
    CHECK_THROWS_AS(require_budget(2, 25), BudgetError);  // default cap 2^24
    CHECK_THROWS_AS(require_budget(3, 40), BudgetError);
}

TEST_CASE("CounterRng is deterministic and order-independent") {
    CounterRng a(42, 7), b(42, 7);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    // different stream is a different sequence
    CounterRng c(42, 8);
    bool differs = false;
    CounterRng a2(42, 7);
    for (int i = 0; i < 10; ++i) differs |= (a2.next() != c.next());
    CHECK(differs);
}

TEST_CASE("CounterRng::below is unbiased enough and in range") {
    CounterRng rng(1, 0);
    std::map<std::uint64_t, int> counts;
    const int N = 30000;
    for (int i = 0; i < N; ++i) {
        std::uint64_t v = rng.below(7);
        CHECK(v < 7);
        counts[v]++;
    }
    for (auto& [v, c] : counts) CHECK(std::abs(c - N / 7.0) < 5 * std::sqrt(N / 7.0));
}

TEST_CASE("pairwise_sum agrees with long double accumulation") {
    CounterRng rng(5, 0);
    std::vector<double> xs;
    long double ref = 0.0L;
    for (int i = 0; i < 10000; ++i) {
        double v = rng.unit() - 0.5;
        xs.push_back(v);
        ref += v;
    }
    CHECK(pairwise_sum(xs) == doctest::Approx(static_cast<double>(ref)).epsilon(1e-12));

    double gen = pairwise_sum_indexed(xs.size(), [&](std::uint64_t i) { return xs[i]; });
    CHECK(gen == doctest::Approx(pairwise_sum(xs)).epsilon(1e-15));
}
