#include "doctest.h"
#include "regulab/fourier.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace regulab;

namespace {

// quadratic-time transform, the oracle for the radix-p passes
Spectrum naive_spectrum(const DensityFunction& f) {
    Spectrum s;
    s.p = f.p();
    s.n = f.n();
    std::uint64_t N = f.size();
    s.coeffs.resize(N);
    for (std::uint64_t ri = 0; ri < N; ++ri) {
        FieldVector r = FieldVector::from_index(f.p(), f.n(), ri);
        std::complex<double> acc{0, 0};
        for (std::uint64_t xi = 0; xi < N; ++xi) {
            FieldVector x = FieldVector::from_index(f.p(), f.n(), xi);
            acc += f[xi] * char_ep(f.p(), r.dot(x));
        }
        s.coeffs[ri] = acc / static_cast<double>(N);
    }
    return s;
}

// brute-force U^2: E_{x,h1,h2} f(x) f(x+h1) f(x+h2) f(x+h1+h2), p^(3n) work
double u2_oracle(const BalancedFunction& f) {
    std::uint64_t N = f.size();
    long double acc = 0.0L;
    for (std::uint64_t xi = 0; xi < N; ++xi) {
        FieldVector x = FieldVector::from_index(f.p(), f.n(), xi);
        for (std::uint64_t h1i = 0; h1i < N; ++h1i) {
            FieldVector h1 = FieldVector::from_index(f.p(), f.n(), h1i);
            for (std::uint64_t h2i = 0; h2i < N; ++h2i) {
                FieldVector h2 = FieldVector::from_index(f.p(), f.n(), h2i);
                acc += static_cast<long double>(f.at(x)) * f.at(x + h1) * f.at(x + h2) *
                       f.at(x + h1 + h2);
            }
        }
    }
    long double mean = acc / static_cast<long double>(N) / N / N;
    return static_cast<double>(std::pow(static_cast<double>(mean), 0.25));
}

// brute-force U^3 over 3-dimensional parallelepipeds, p^(4n) work
double u3_oracle(const BalancedFunction& f) {
    std::uint64_t N = f.size();
    long double acc = 0.0L;
    for (std::uint64_t xi = 0; xi < N; ++xi) {
        FieldVector x = FieldVector::from_index(f.p(), f.n(), xi);
        for (std::uint64_t a = 0; a < N; ++a) {
            FieldVector h1 = FieldVector::from_index(f.p(), f.n(), a);
            for (std::uint64_t b = 0; b < N; ++b) {
                FieldVector h2 = FieldVector::from_index(f.p(), f.n(), b);
                for (std::uint64_t c = 0; c < N; ++c) {
                    FieldVector h3 = FieldVector::from_index(f.p(), f.n(), c);
                    long double prod = 1.0L;
                    for (int mask = 0; mask < 8; ++mask) {
                        FieldVector y = x;
                        if (mask & 1) y = y + h1;
                        if (mask & 2) y = y + h2;
                        if (mask & 4) y = y + h3;
                        prod *= f.at(y);
                    }
                    acc += prod;
                }
            }
        }
    }
    long double mean = acc / static_cast<long double>(N) / N / N / N;
    return static_cast<double>(std::pow(static_cast<double>(mean), 0.125));
}

}  // namespace

TEST_CASE("char_ep is the standard character") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        std::complex<double> sum{0, 0};
        for (std::uint32_t t = 0; t < p; ++t) sum += char_ep(p, t);
        CHECK(std::abs(sum) < 1e-12);
        CHECK(char_ep(p, 0) == std::complex<double>(1, 0));
        CHECK(std::abs(char_ep(p, 1) - std::polar(1.0, 2 * std::acos(-1.0) / p)) < 1e-12);
    }
}

TEST_CASE("full_spectrum equals the quadratic-time oracle") {
    CounterRng rng(21, 0);
    for (auto [p, n] : {std::pair{2u, 6u}, {3u, 4u}, {5u, 3u}}) {
        DensityFunction f = random_function(p, n, rng);
        Spectrum fast = full_spectrum(f);
        Spectrum slow = naive_spectrum(f);
        for (std::uint64_t i = 0; i < f.size(); ++i)
            CHECK(std::abs(fast.coeffs[i] - slow.coeffs[i]) < 1e-9);
    }
}

TEST_CASE("Parseval and inversion sanity") {
    CounterRng rng(22, 0);
    DensityFunction f = random_function(3, 4, rng);
    Spectrum s = full_spectrum(f);
    double lhs = 0.0;
    for (const auto& c : s.coeffs) lhs += std::norm(c);
    CHECK(lhs == doctest::Approx(f.l2_norm() * f.l2_norm()).epsilon(1e-10));
    CHECK(std::abs(s.coeffs[0] - std::complex<double>(f.mean(), 0)) < 1e-12);
}

TEST_CASE("coset_fourier agrees with direct point enumeration") {
    CounterRng rng(23, 0);
    std::uint32_t p = 3, n = 4;
    DensityFunction f = random_function(p, n, rng);
    for (int trial = 0; trial < 20; ++trial) {
        Subspace H = Subspace::random(p, n, 1 + static_cast<std::uint32_t>(rng.below(3)), rng);
        FieldVector c = FieldVector::from_index(p, n, rng.below(f.size()));
        FieldVector r = FieldVector::from_index(p, n, rng.below(f.size()));
        // direct: enumerate the whole space, filter membership in H + c
        std::complex<double> direct{0, 0};
        std::uint64_t count = 0;
        double msum = 0.0;
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            FieldVector x = FieldVector::from_index(p, n, i);
            if (!H.contains(x - c)) continue;
            direct += f[i] * char_ep(p, r.dot(x));
            msum += f[i];
            ++count;
        }
        direct /= static_cast<double>(count);
        CHECK(std::abs(coset_fourier(f, H, c, r, false) - direct) < 1e-9);
        // balanced: subtract the coset mean before transforming
        std::complex<double> bal{0, 0};
        double mean = msum / count;
        for (std::uint64_t i = 0; i < f.size(); ++i) {
            FieldVector x = FieldVector::from_index(p, n, i);
            if (!H.contains(x - c)) continue;
            bal += (f[i] - mean) * char_ep(p, r.dot(x));
        }
        bal /= static_cast<double>(count);
        CHECK(std::abs(coset_fourier(f, H, c, r, true) - bal) < 1e-9);
    }
}

TEST_CASE("coset_spectrum covers all character classes of the coset") {
    CounterRng rng(24, 0);
    std::uint32_t p = 3, n = 4;
    DensityFunction f = random_function(p, n, rng);
    Subspace H = Subspace::random(p, n, 2, rng);
    FieldVector c = FieldVector::from_index(p, n, rng.below(f.size()));
    Coset B(H, c);

    CosetSpectrum cs = coset_spectrum(f, B, false);
    REQUIRE(cs.coeffs.size() == checked_pow(p, H.dim()));
    for (std::uint64_t s = 0; s < cs.coeffs.size(); ++s) {
        FieldVector r = cs.frequency(s);
        CHECK(std::abs(cs.value(s) - coset_fourier(f, H, B.rep, r, false)) < 1e-9);
    }
    // frequencies exhaust the classes mod the annihilator: distinct freq
    // vectors reduce to distinct cosets of H^perp
    Subspace A = H.annihilator();
    std::vector<FieldVector> reps;
    for (std::uint64_t s = 0; s < cs.coeffs.size(); ++s) {
        FieldVector cr = A.coset_rep(cs.frequency(s));
        for (const auto& prev : reps) CHECK(!(prev == cr));
        reps.push_back(cr);
    }

    // every ambient frequency r is covered through its class representative:
    // |f_hat restricted| is invariant under shifting r by H^perp
    for (int trial = 0; trial < 10; ++trial) {
        FieldVector r = FieldVector::from_index(p, n, rng.below(f.size()));
        FieldVector shift = A.basis().empty() ? FieldVector(p, n)
                                              : A.basis()[rng.below(A.basis().size())];
        double m1 = std::abs(coset_fourier(f, H, c, r, false));
        double m2 = std::abs(coset_fourier(f, H, c, r + shift, false));
        CHECK(m1 == doctest::Approx(m2).epsilon(1e-9));
    }

    // balanced spectrum zeros the trivial class and matches elsewhere
    CosetSpectrum bs = coset_spectrum(f, B, true);
    CHECK(std::abs(bs.coeffs[0]) < 1e-12);
    for (std::uint64_t s = 1; s < bs.coeffs.size(); ++s)
        CHECK(std::abs(std::abs(bs.coeffs[s]) - std::abs(cs.coeffs[s])) < 1e-9);
}

TEST_CASE("max_bias_on_coset finds the exhaustive maximum") {
    CounterRng rng(25, 0);
    std::uint32_t p = 2, n = 5;
    DensityFunction f = random_function(p, n, rng);
    Subspace H = Subspace::random(p, n, 3, rng);
    for (const auto& c : H.coset_reps()) {
        BiasResult best = max_bias_on_coset(f, H, c);
        double brute = 0.0;
        for (std::uint64_t ri = 0; ri < f.size(); ++ri) {
            FieldVector r = FieldVector::from_index(p, n, ri);
            brute = std::max(brute, std::abs(coset_fourier(f, H, c, r, true)));
        }
        CHECK(best.value == doctest::Approx(brute).epsilon(1e-9));
        CHECK(std::abs(coset_fourier(f, H, c, best.r, true)) ==
              doctest::Approx(best.value).epsilon(1e-12));
    }
}

TEST_CASE("u2_norm matches the parallelepiped oracle") {
    CounterRng rng(26, 0);
    for (auto [p, n] : {std::pair{2u, 3u}, {3u, 2u}, {5u, 1u}}) {
        BalancedFunction f = random_function(p, n, rng, -1.0, 1.0);
        CHECK(u2_norm(f) == doctest::Approx(u2_oracle(f)).epsilon(1e-9));
    }
}

TEST_CASE("u3_norm matches the parallelepiped oracle") {
    CounterRng rng(27, 0);
    for (auto [p, n] : {std::pair{2u, 3u}, {3u, 2u}}) {
        BalancedFunction f = random_function(p, n, rng, -1.0, 1.0);
        CHECK(u3_norm(f) == doctest::Approx(u3_oracle(f)).epsilon(1e-9));
    }
}

TEST_CASE("Gowers norms of a character are 1, of balanced noise are small") {
    std::uint32_t p = 3, n = 4;
    // f = indicator-style cosine of a linear form has full U^2 mass at one freq
    FieldVector r = FieldVector::from_index(p, n, 5);
    std::uint64_t N = checked_pow(p, n);
    std::vector<double> tab(N);
    for (std::uint64_t i = 0; i < N; ++i) {
        FieldVector x = FieldVector::from_index(p, n, i);
        tab[i] = std::cos(2 * std::acos(-1.0) * r.dot(x) / p);
    }
    BalancedFunction f(p, n, tab);
    // cos = (e + conj e)/2: two spectral atoms of weight 1/2
    double expect = std::pow(2 * std::pow(0.5, 4), 0.25);
    CHECK(u2_norm(f) == doctest::Approx(expect).epsilon(1e-9));

    CounterRng rng(28, 0);
    BalancedFunction g = random_function(p, n, rng, -0.05, 0.05);
    CHECK(u2_norm(g) < 0.05);
    CHECK(u3_norm(g) >= u2_norm(g) - 1e-12);  // monotonicity
}

TEST_CASE("regularity_check flags exactly the bad cosets") {
    CounterRng rng(29, 0);
    std::uint32_t p = 2, n = 5;
    DensityFunction f = random_function(p, n, rng);
    Subspace H = Subspace::random(p, n, 3, rng);
    double eps = 0.1;
    UniformityReport rep = regularity_check(f, H, eps);
    CHECK(rep.total_cosets == checked_pow(p, H.codim()));
    std::uint64_t bad = 0;
    for (const auto& c : H.coset_reps())
        if (max_bias_on_coset(f, H, c).value > eps) ++bad;
    CHECK(rep.bad_cosets.size() == bad);
    CHECK(rep.bad_fraction == doctest::Approx(static_cast<double>(bad) / rep.total_cosets));
    CHECK(rep.regular == (rep.bad_fraction <= eps));
}
