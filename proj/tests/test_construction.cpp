#include "doctest.h"
#include "regulab/construction.hpp"

#include <cmath>
#include <set>

using namespace regulab;

TEST_CASE("dimension schedule follows the recurrence") {
    auto s2 = dimension_schedule(2, 6);
    // d: 1, 2, 2^0=1, 2^1=2, 2^3=8, 2^11 = 2048
    CHECK(s2.d == std::vector<BigInt>{1, 2, 1, 2, 8, 2048});
    CHECK(s2.D == std::vector<BigInt>{1, 3, 4, 6, 14, 2062});
    auto s3 = dimension_schedule(3, 5);
    CHECK(s3.d == std::vector<BigInt>{1, 2, 1, 3, 81});
    CHECK(s3.D == std::vector<BigInt>{1, 3, 4, 7, 88});
    // next step still materializes: D_7 = 2062 + 2^2059 for p = 2
    auto s7 = dimension_schedule(2, 7);
    CHECK(s7.D[6] == BigInt(2062) + (BigInt(1) << 2059));
    // ...but the one after that cannot
    CHECK_THROWS_AS(dimension_schedule(2, 8), BudgetError);
}

TEST_CASE("schedule_D_at agrees with the exact schedule on small indices") {
    for (std::uint32_t p : {2u, 3u}) {
        auto sch = dimension_schedule(p, 6);
        for (std::uint32_t m = 1; m <= 6; ++m) {
            TowerInt D = schedule_D_at(p, TowerInt::exact(m));
            auto v = D.eval();
            REQUIRE(v.has_value());
            CHECK(*v == sch.D[m - 1]);
        }
    }
    CHECK(*schedule_D_at(2, TowerInt::exact(0)).eval() == 0);
}

TEST_CASE("schedule_D_at symbolic lower bound twr(m-5) is sound at the bases") {
    // D_5 = 14 >= twr(0)+... the bound enters at m >= 5: D_{j+5} >= twr(j)+4
    auto s2 = dimension_schedule(2, 7);
    auto s3 = dimension_schedule(3, 6);
    for (std::uint32_t j = 0; j <= 2; ++j) {
        BigInt t = 1;
        for (std::uint32_t k = 0; k < j; ++k) t = BigInt(1) << static_cast<unsigned>(t);
        CHECK(s2.D[j + 4] >= t);  // D_{j+5} >= twr(j)
        if (j + 4 < s3.D.size()) CHECK(s3.D[j + 4] >= t);
    }
    // interval recurrence must dominate the symbolic bound where both exist
    TowerInt d82 = schedule_D_at(2, TowerInt::exact(82));
    CHECK(compare(d82, twr_of(77)) != TowerCmp::Less);
}

TEST_CASE("verify_spanning: known good and bad tuples") {
    std::uint32_t p = 2, n = 4;
    Subspace V = Subspace::full(p, n);
    auto e = [&](std::uint32_t k) { return FieldVector::unit(p, n, k); };

    // 4 independent vectors: any hyperplane contains at most 3 = 3/4 * 4, not <
    CHECK(!verify_spanning({e(0), e(1), e(2), e(3)}, V).ok);
    // 8 vectors, each hyperplane contains at most 5 < 6
    std::vector<FieldVector> good{e(0), e(1), e(2), e(3), e(0) + e(1), e(2) + e(3),
                                  e(0) + e(2), e(1) + e(3)};
    auto chk = verify_spanning(good, V);
    CHECK(chk.ok);
    CHECK(4 * chk.max_hyperplane_count < 3 * chk.tuple_size);
    // concentrated tuple fails: 6 of 8 in the hyperplane x_3 = 0
    std::vector<FieldVector> bad{e(0), e(1), e(2), e(0) + e(1), e(1) + e(2),
                                 e(0) + e(2), e(3), e(3) + e(0)};
    CHECK(!verify_spanning(bad, V).ok);
    // outside V is an error
    Subspace W = Subspace::coordinate_window(p, n, 0, 2);
    CHECK_THROWS_AS(verify_spanning({e(3)}, W), DimensionError);
}

TEST_CASE("spanning property implies every 3/4-subset spans") {
    // the hyperplane criterion is equivalent to: every subset of >= 3/4 of the
    // tuple spans V; check the implication on random accepted tuples
    CounterRng rng(31, 0);
    std::uint32_t p = 2, n = 3;
    Subspace V = Subspace::full(p, n);
    auto tuple = sample_spanning_vectors(V, 8, rng);
    std::uint64_t subsets = 0, checked = 0;
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
        if (static_cast<std::uint32_t>(__builtin_popcount(mask)) * 4 < 3 * 8) continue;
        std::vector<FieldVector> sub;
        for (int k = 0; k < 8; ++k)
            if (mask & (1u << k)) sub.push_back(tuple[k]);
        CHECK(Subspace::span(p, n, sub).dim() == n);
        ++checked;
        ++subsets;
    }
    CHECK(checked == subsets);
    CHECK(checked > 0);
}

TEST_CASE("sample_spanning_tuple layer shapes") {
    std::vector<std::uint64_t> D{1, 3, 4, 6};
    auto t1 = sample_spanning_tuple(2, 1, D, 6, 7);
    REQUIRE(t1.vectors.size() == 1);
    CHECK(t1.vectors[0] == FieldVector::unit(2, 6, 0));

    auto t2 = sample_spanning_tuple(3, 2, D, 7, 7);
    REQUIRE(t2.vectors.size() == 3);
    for (std::uint32_t m = 0; m < 3; ++m)
        CHECK(t2.vectors[m] == FieldVector::unit(3, 7, 1) + FieldVector::unit(3, 7, 2) * m);

    auto t3 = sample_spanning_tuple(2, 3, D, 6, 7);
    CHECK(t3.vectors.size() == 8);  // p^{D_2} = 2^3
    Subspace window = Subspace::coordinate_window(2, 6, 3, 1);
    for (const auto& v : t3.vectors) {
        CHECK(!v.is_zero());
        CHECK(window.contains(v));
    }
    CHECK(verify_spanning(t3.vectors, window).ok);

    auto t4 = sample_spanning_tuple(2, 4, D, 6, 7);
    CHECK(t4.vectors.size() == 16);  // p^{D_3} = 2^4
    Subspace w4 = Subspace::coordinate_window(2, 6, 4, 2);
    CHECK(verify_spanning(t4.vectors, w4).ok);

    // determinism
    auto again = sample_spanning_tuple(2, 4, D, 6, 7);
    CHECK(again.vectors == t4.vectors);
}

TEST_CASE("build_instance: densities, measurability and f assembly") {
    std::uint32_t p = 2, n = 6;
    std::vector<double> w{0.25, 0.25, 0.25, 0.125};
    Instance inst = build_instance(p, n, w, 3);
    CHECK(inst.D == std::vector<std::uint64_t>{1, 3, 4, 6});
    std::uint64_t N = checked_pow(p, n);

    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        // density exactly 1/p
        std::uint64_t cnt = 0;
        for (std::uint64_t xi = 0; xi < N; ++xi)
            if (inst.in_layer(i, FieldVector::from_index(p, n, xi))) ++cnt;
        CHECK(cnt * p == N);
        // labels match membership and A_i is a union of H_i-cosets
        std::uint64_t label_size = checked_pow(p, static_cast<std::uint32_t>(inst.D[i - 1]));
        std::set<std::uint64_t> labels(inst.layer_labels[i - 1].begin(),
                                       inst.layer_labels[i - 1].end());
        CHECK(labels.size() * p == label_size);
        for (std::uint64_t xi = 0; xi < N; ++xi) {
            FieldVector x = FieldVector::from_index(p, n, xi);
            CHECK(inst.in_layer(i, x) == (labels.count(xi % label_size) == 1));
        }
    }
    // f is the weighted sum of the indicators
    for (std::uint64_t xi = 0; xi < N; ++xi) {
        FieldVector x = FieldVector::from_index(p, n, xi);
        double expect = 0.0;
        for (std::uint32_t i = 1; i <= inst.s; ++i)
            if (inst.in_layer(i, x)) expect += w[i - 1];
        CHECK(inst.f[xi] == doctest::Approx(expect).epsilon(1e-15));
    }
    CHECK(inst.f.mean() == doctest::Approx(0.875 / p).epsilon(1e-12));

    // H_i / U_i shapes
    CHECK(inst.H(0) == Subspace::full(p, n));
    CHECK(inst.H(4).dim() == n - 6);
    CHECK(inst.U(2).dim() == 3);
    CHECK(inst.H(2).intersect(inst.U(2)).dim() == 0);
}

TEST_CASE("hlms_weights") {
    auto w = hlms_weights(2, 1.0 / 64.0);
    CHECK(w.size() == 4);  // floor(64 / 16)
    for (double x : w) CHECK(x == doctest::Approx(0.25));
    auto w3 = hlms_weights(3, 1.0 / 120.0);
    CHECK(w3.size() == 5);  // floor(120 / 24)
    CHECK(w3[0] == doctest::Approx(0.2));
    CHECK_THROWS_AS(hlms_weights(2, 0.5), DimensionError);
}

TEST_CASE("claim mean: every admissible u sees exactly w_i/p on average") {
    std::uint32_t p = 2, n = 6;
    Instance inst = build_instance(p, n, hlms_weights(p, 1.0 / 64.0), 9);
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        double w = inst.weights[i - 1];
        std::uint64_t prev = i >= 2 ? checked_pow(p, static_cast<std::uint32_t>(inst.D[i - 2])) : 1;
        for (std::uint64_t ul = 0; ul < prev; ++ul) {
            FieldVector u = FieldVector::from_index(p, n, ul);
            ClaimReport rep = claim_mean_check(inst, i, u);
            // with W = H_{i-1} the window coordinates are free, so xi_u never
            // annihilates W: every u is admissible
            CHECK(rep.admissible);
            CHECK(rep.value.real() == doctest::Approx(w / p).epsilon(1e-9));
            CHECK(std::abs(rep.value.imag()) < 1e-9);
        }
    }
    // with W = H_i the spanning vectors are orthogonal to W: nothing admissible
    ClaimReport none = claim_mean_check(inst, 3, FieldVector::from_index(p, n, 2), inst.H(3));
    CHECK(!none.admissible);
}

TEST_CASE("verify_large_bias on the failing layer of each H-chain prefix") {
    std::uint32_t p = 2, n = 6;
    Instance inst = build_instance(p, n, hlms_weights(p, 1.0 / 64.0), 9);
    for (std::uint32_t k = 0; k < inst.s; ++k) {
        LargeBiasReport rep = verify_large_bias(inst, inst.H(k));
        CHECK(!rep.fully_regular);
        CHECK(rep.layer == k + 1);
        CHECK(rep.pass);
    }
    LargeBiasReport top = verify_large_bias(inst, inst.H(inst.s));
    CHECK(top.fully_regular);
}

TEST_CASE("sarl schedule at the reference parameters") {
    SarlSchedule sch = sarl_schedule(2, 1e-4, 320);
    CHECK(sch.t == 5);
    CHECK(sch.valid);
    CHECK(sch.h_ok);
    REQUIRE(sch.h.size() == 5);
    CHECK(*sch.h[0].eval() == 20);
    CHECK(*sch.h[1].eval() == 80);   // D at phi(1) = 2 is 3; (3+1)*320/16
    CHECK(*sch.phi[0].eval() == 2);  // 20 - 18
    CHECK(*sch.phi[1].eval() == 82);
    // h_3 = 20 * (D_82 + 1) through the interval recurrence (identical
    // intervals are not provably equal as numbers, so compare the trees)
    auto d82 = schedule_D_at(2, TowerInt::exact(82));
    CHECK(sch.h[2].str() == d82.add(1).scale_up(320, 16).str());
    // later h are symbolic but must still be certified >= 10p = 20
    CHECK(compare(sch.h[3], TowerInt::exact(20)) == TowerCmp::Greater);
    CHECK(compare(sch.h[4], TowerInt::exact(20)) == TowerCmp::Greater);
    CHECK(sch.weight_sum_bound == doctest::Approx(5 * 19 * 0.01));
    CHECK(sch.weight_sum_ok);

    // parameter validation
    CHECK(!sarl_schedule(2, 0.2, 320).valid);    // delta > 1/20p
    CHECK(!sarl_schedule(2, 1e-4, 100).valid);   // c < 80 p^2
    CHECK(sarl_schedule(2, 0.02, 320).degenerate);  // sqrt(50)/20 < 1, t = 0
}

TEST_CASE("tower lower bound verdict") {
    TowerReport rep = tower_lower_bound(2, 1e-4, 320);
    CHECK(rep.t == 5);
    REQUIRE(rep.F.size() == 5);
    CHECK(compare(rep.F[1], twr_of(20)) == TowerCmp::Equal);
    for (const auto& step : rep.steps) CHECK(step.ok);
    CHECK(rep.final_verdict == TowerCmp::Greater);
    CHECK(rep.all_verified);
}
