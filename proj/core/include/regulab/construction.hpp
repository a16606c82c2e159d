#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regulab/common.hpp"
#include "regulab/field_space.hpp"
#include "regulab/fourier.hpp"
#include "regulab/tower.hpp"

namespace regulab {

// d_1 = 1, d_2 = 2, d_{j+1} = p^(D_j - 3) for j >= 2; D_i = d_1 + ... + d_i.
struct DimensionSchedule {
    std::uint32_t p = 2;
    std::uint32_t s = 0;
    std::vector<BigInt> d;
    std::vector<BigInt> D;

    // machine-sized prefix view; throws if any D_i exceeds uint64
    std::vector<std::uint64_t> D_small() const;
    std::vector<std::uint64_t> d_small() const;
};

// Exact evaluation; refuses once intermediate values need more than ~2^22 bits.
DimensionSchedule dimension_schedule(std::uint32_t p, std::uint32_t s);

// D_m with TowerInt bookkeeping: exact/interval recurrence for small exact m,
// and the lower bound D_m >= twr(m - 5) for symbolic m (sound for m >= 5).
TowerInt schedule_D_at(std::uint32_t p, const TowerInt& m);

// One nonzero vector per label u in U_{i-1}; vectors live in the coordinate
// window span{e_(D_{i-1}+1), ..., e_(D_i)} of the ambient space.  The label of
// vectors[k] is the element of U_{i-1} with little-endian index k.
struct SpanningTuple {
    std::uint32_t layer = 0;
    std::vector<FieldVector> vectors;
};

struct SpanningCheck {
    bool ok = false;
    std::uint64_t max_hyperplane_count = 0;  // over codim-1 subspaces of V
    std::uint64_t tuple_size = 0;
};

// True iff every hyperplane of V contains < 3/4 of the tuple (with
// multiplicity) -- equivalent to every 3/4-subset of the tuple spanning V.
SpanningCheck verify_spanning(const std::vector<FieldVector>& tuple, const Subspace& V);

// Draws `count` nonzero vectors of V uniformly, retrying wholesale until the
// spanning check passes.  retries_used reports the number of failed attempts.
std::vector<FieldVector> sample_spanning_vectors(const Subspace& V, std::uint64_t count,
                                                 CounterRng& rng,
                                                 std::uint32_t max_retries = 50,
                                                 std::uint32_t* retries_used = nullptr);

// X_1 = (e_1); X_2 = (e_2 + m e_3); X_i for i >= 3 sampled per sample_spanning_vectors.
SpanningTuple sample_spanning_tuple(std::uint32_t p, std::uint32_t i,
                                    const std::vector<std::uint64_t>& D,
                                    std::uint32_t ambient_n, std::uint64_t seed);

struct Instance {
    std::uint32_t p = 2;
    std::uint32_t n = 0;
    std::uint32_t s = 0;
    std::vector<std::uint64_t> d;
    std::vector<std::uint64_t> D;
    std::vector<double> weights;
    std::vector<SpanningTuple> tuples;  // tuples[i-1] is X_i
    // layer_labels[i-1]: sorted little-endian indices (over the first D_i
    // coordinates) of the H_i-cosets making up A_i
    std::vector<std::vector<std::uint64_t>> layer_labels;
    DensityFunction f;
    std::uint64_t seed = 0;

    Subspace H(std::uint32_t i) const;  // H_0 = F_p^n, H_i = {0}^(D_i) x F_p^(n-D_i)
    Subspace U(std::uint32_t i) const;  // U_i = F_p^(D_i) x {0}
    // xi^{(i)}_u for the label of u (little-endian index over first D_{i-1} coords)
    const FieldVector& xi(std::uint32_t i, std::uint64_t u_label) const;
    // x in A_i  <=>  xi^{(i)}_{pi_{i-1}(x)}^T x = 0
    bool in_layer(std::uint32_t i, const FieldVector& x) const;
};

Instance build_instance(std::uint32_t p, std::uint32_t n, std::vector<double> weights,
                        std::uint64_t seed);

// s = floor(eps^{-1} / 8p) copies of 8 p eps.
std::vector<double> hlms_weights(std::uint32_t p, double eps);

struct LargeBiasReport {
    bool fully_regular = false;  // W <= H_s: no layer left to violate
    std::uint32_t layer = 0;     // the i with W <= H_{i-1}, W not<= H_i
    double bias_threshold = 0.0;      // w_i / 2p
    double fraction = 0.0;            // of W-cosets with max bias >= threshold
    double fraction_threshold = 0.0;  // w_i / 8p
    std::uint64_t bad = 0;
    std::uint64_t total = 0;
    bool pass = false;
};

LargeBiasReport verify_large_bias(const Instance& inst, const Subspace& W);

struct ClaimReport {
    bool admissible = false;          // u in S, i.e. W not<= <xi_u>^perp
    std::complex<double> value{};     // E_{h in H_{i-1}} f_hat|_{W+u+h}(xi_u)
    double expected = 0.0;            // w_i / p
};

// Default W = H_{i-1} (every u in U_{i-1} is then admissible).
ClaimReport claim_mean_check(const Instance& inst, std::uint32_t i, const FieldVector& u);
ClaimReport claim_mean_check(const Instance& inst, std::uint32_t i, const FieldVector& u,
                             const Subspace& W);

// ---- symbolic schedule bookkeeping (astronomically large parameters) ----

struct SarlSchedule {
    std::uint32_t p = 2;
    double delta = 0.0;
    std::uint64_t c = 0;  // eps(d) = sqrt(delta) / (c (d+1)), c >= 80 p^2
    std::uint32_t t = 0;
    bool degenerate = false;  // t == 0
    std::vector<TowerInt> h;         // h_1..h_t
    std::vector<std::string> eps;    // descriptions of eps_1..eps_t
    std::vector<TowerInt> phi;       // phi(i, h_i - 9p) for i = 1..t-1
    std::vector<TowerInt> D_at_phi;  // D at those indices
    bool h_ok = false;               // every h_i >= 10p, verified symbolically
    double weight_sum_bound = 0.0;   // t (1 + 9p) sqrt(delta) >= true sum of weights
    bool weight_sum_ok = false;
    bool valid = false;
    std::vector<std::string> messages;
};

SarlSchedule sarl_schedule(std::uint32_t p, double delta, std::uint64_t c);

struct TowerVerdict {
    std::string what;
    TowerCmp cmp = TowerCmp::Incomparable;
    bool ok = false;  // cmp is Greater or Equal
    std::string lhs;
    std::string rhs;
};

struct TowerReport {
    std::uint32_t t = 0;
    std::vector<TowerInt> F;            // F(0..t-1)
    std::vector<TowerVerdict> steps;    // base + induction comparisons
    TowerCmp final_verdict = TowerCmp::Incomparable;  // F(t-1) vs wwz(t)
    bool all_verified = false;
};

// F(0) = 0, F(i+1) = twr(floor(c (F(i)+1) / 8p)); verifies F(1) >= twr(10p)
// and F(i+1) >= wwz(i+2) step by step.
TowerReport tower_lower_bound(std::uint32_t p, double delta, std::uint64_t c);

const char* tower_cmp_name(TowerCmp c);

}  // namespace regulab
