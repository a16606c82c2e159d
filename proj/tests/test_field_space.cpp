#include "doctest.h"
#include "regulab/field_space.hpp"

#include <algorithm>
#include <set>

using namespace regulab;

namespace {

// independent rank oracle: plain Gaussian elimination over F_p, no pivoting
// conventions shared with Subspace
std::uint32_t rank_oracle(std::uint32_t p, std::vector<FieldVector> rows) {
    std::uint32_t rank = 0;
    std::uint32_t n = rows.empty() ? 0 : rows[0].n();
    for (std::uint32_t col = 0; col < n && rank < rows.size(); ++col) {
        std::uint32_t sel = rank;
        while (sel < rows.size() && rows[sel][col] == 0) ++sel;
        if (sel == rows.size()) continue;
        std::swap(rows[sel], rows[rank]);
        std::uint8_t inv = mod_inverse(p, rows[rank][col]);
        rows[rank] = rows[rank] * inv;
        for (std::uint32_t r = 0; r < rows.size(); ++r)
            if (r != rank && rows[r][col] != 0)
                rows[r] = rows[r] - rows[rank] * rows[r][col];
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("index round trip, little-endian") {
    for (std::uint32_t p : {2u, 3u, 5u}) {
        std::uint64_t total = checked_pow(p, 4);
        for (std::uint64_t i = 0; i < total; ++i) {
            FieldVector v = FieldVector::from_index(p, 4, i);
            CHECK(v.to_index() == i);
        }
        // coords[0] is the least significant digit
        FieldVector v = FieldVector::from_index(p, 4, 1);
        CHECK(v[0] == 1);
        CHECK(v[1] == 0);
    }
}

TEST_CASE("vector arithmetic mod p") {
    FieldVector a(3, {1, 2, 0});
    FieldVector b(3, {2, 2, 1});
    CHECK((a + b) == FieldVector(3, {0, 1, 1}));
    CHECK((a - b) == FieldVector(3, {2, 0, 2}));
    CHECK((-b) == FieldVector(3, {1, 1, 2}));
    CHECK((a * 2) == FieldVector(3, {2, 1, 0}));
    CHECK(a.dot(b) == (1 * 2 + 2 * 2 + 0 * 1) % 3);
}

TEST_CASE("mod_inverse") {
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u})
        for (std::uint32_t a = 1; a < p; ++a)
            CHECK((a * mod_inverse(p, static_cast<std::uint8_t>(a))) % p == 1);
}

TEST_CASE("span dimension matches the elimination oracle") {
    CounterRng rng(11, 0);
    for (std::uint32_t p : {2u, 3u, 5u}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::uint32_t n = 2 + static_cast<std::uint32_t>(rng.below(5));
            std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.below(n + 2));
            std::vector<FieldVector> vs;
            for (std::uint32_t j = 0; j < k; ++j)
                vs.push_back(FieldVector::from_index(p, n, rng.below(checked_pow(p, n))));
            Subspace S = Subspace::span(p, n, vs);
            CHECK(S.dim() == rank_oracle(p, vs));
            for (const auto& v : vs) CHECK(S.contains(v));
        }
    }
}

TEST_CASE("RREF canonical form: same subspace from shuffled generators") {
    CounterRng rng(12, 0);
    for (int trial = 0; trial < 30; ++trial) {
        std::uint32_t p = 3, n = 5;
        Subspace S = Subspace::random(p, n, 1 + static_cast<std::uint32_t>(rng.below(4)), rng);
        // regenerate from random combinations of the basis
        std::vector<FieldVector> gens;
        for (int j = 0; j < 8; ++j) {
            FieldVector v(p, n);
            for (const auto& b : S.basis()) v = v + b * static_cast<std::uint32_t>(rng.below(p));
            gens.push_back(v);
        }
        Subspace T = Subspace::span(p, n, gens);
        if (T.dim() == S.dim()) CHECK(T == S);
        CHECK(T.subspace_of(S));
    }
}

TEST_CASE("annihilator: exhaustive orthogonality check and double dual") {
    CounterRng rng(13, 0);
    for (std::uint32_t p : {2u, 3u}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::uint32_t n = 4;
            Subspace S = Subspace::random(p, n, static_cast<std::uint32_t>(rng.below(n + 1)), rng);
            Subspace A = S.annihilator();
            CHECK(A.dim() == S.codim());
            std::uint64_t total = checked_pow(p, n);
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < total; ++i) {
                FieldVector r = FieldVector::from_index(p, n, i);
                bool ortho = true;
                for (const auto& h : S.basis()) ortho &= (r.dot(h) == 0);
                if (ortho) {
                    ++count;
                    CHECK(A.contains(r));
                }
            }
            CHECK(count == checked_pow(p, A.dim()));
            CHECK(A.annihilator() == S);
        }
    }
}

TEST_CASE("intersect and sum against exhaustive membership") {
    CounterRng rng(14, 0);
    std::uint32_t p = 2, n = 5;
    for (int trial = 0; trial < 25; ++trial) {
        Subspace A = Subspace::random(p, n, static_cast<std::uint32_t>(rng.below(n + 1)), rng);
        Subspace B = Subspace::random(p, n, static_cast<std::uint32_t>(rng.below(n + 1)), rng);
        Subspace I = A.intersect(B);
        Subspace S = A.sum(B);
        for (std::uint64_t i = 0; i < checked_pow(p, n); ++i) {
            FieldVector v = FieldVector::from_index(p, n, i);
            CHECK(I.contains(v) == (A.contains(v) && B.contains(v)));
            if (A.contains(v) || B.contains(v)) CHECK(S.contains(v));
        }
        CHECK(S.dim() + I.dim() == A.dim() + B.dim());
    }
}

TEST_CASE("coset machinery: canonical reps partition the space") {
    std::uint32_t p = 3, n = 4;
    CounterRng rng(15, 0);
    Subspace H = Subspace::random(p, n, 2, rng);
    auto reps = H.coset_reps();
    CHECK(reps.size() == checked_pow(p, H.codim()));
    std::set<std::uint64_t> seen;
    for (const auto& r : reps) {
        CHECK(H.coset_rep(r) == r);
        seen.insert(r.to_index());
    }
    CHECK(seen.size() == reps.size());
    // every point reduces to a listed rep and stays in its own coset
    for (std::uint64_t i = 0; i < checked_pow(p, n); ++i) {
        FieldVector x = FieldVector::from_index(p, n, i);
        FieldVector c = H.coset_rep(x);
        CHECK(seen.count(c.to_index()) == 1);
        CHECK(H.contains(x - c));
    }
}

TEST_CASE("coordinate complement is complementary") {
    CounterRng rng(16, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::uint32_t p = 2, n = 6;
        Subspace S = Subspace::random(p, n, static_cast<std::uint32_t>(rng.below(n + 1)), rng);
        Subspace C = S.coordinate_complement();
        CHECK(C.dim() == S.codim());
        CHECK(S.intersect(C).dim() == 0);
        CHECK(S.sum(C).dim() == n);
    }
}

TEST_CASE("coordinate_window and elements") {
    Subspace W = Subspace::coordinate_window(3, 5, 1, 2);
    CHECK(W.dim() == 2);
    auto els = W.elements();
    CHECK(els.size() == 9);
    for (const auto& v : els) {
        CHECK(v[0] == 0);
        CHECK(v[3] == 0);
        CHECK(v[4] == 0);
    }
}

TEST_CASE("Coset canonicalizes its representative") {
    std::uint32_t p = 2, n = 4;
    CounterRng rng(17, 0);
    Subspace H = Subspace::random(p, n, 2, rng);
    FieldVector x = FieldVector::from_index(p, n, 13);
    Coset B(H, x);
    CHECK(B.rep == H.coset_rep(x));
    CHECK(B.contains(x));
    Coset B2(H, x + H.basis()[0]);
    CHECK(B == B2);
}
