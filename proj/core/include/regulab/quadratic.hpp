#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "regulab/energy.hpp"
#include "regulab/field_space.hpp"
#include "regulab/fourier.hpp"

namespace regulab {

// P(x) = x^T M x + b^T x + c over F_p, p odd, M symmetric (the symmetric
// representative is unique in odd characteristic).
struct QuadPoly {
    std::uint32_t p = 3;
    std::uint32_t n = 0;
    std::vector<std::vector<std::uint8_t>> M;  // n x n, symmetric
    FieldVector b;
    std::uint8_t c = 0;

    static QuadPoly zero(std::uint32_t p, std::uint32_t n);
    static QuadPoly linear(const FieldVector& b, std::uint8_t c = 0);
    // upper[t] is the coefficient of x_i x_j for i <= j in row-major upper
    // triangle order; off-diagonal entries are split as M_ij = M_ji = coeff/2
    static QuadPoly from_upper_triangle(std::uint32_t p, std::uint32_t n,
                                        const std::vector<std::uint8_t>& upper,
                                        const FieldVector& b, std::uint8_t c = 0);

    std::uint8_t eval(const FieldVector& x) const;
    std::uint32_t degree() const;  // 2, 1 or 0
    bool quad_part_zero() const;
    std::string str() const;
};

// rank over F_p of an n x n matrix
std::uint32_t matrix_rank(std::uint32_t p, std::vector<std::vector<std::uint8_t>> M);

struct QuadraticFactor {
    std::uint32_t p = 3;
    std::uint32_t n = 0;
    std::vector<QuadPoly> linear_polys;  // quadratic part zero
    std::vector<QuadPoly> quad_polys;    // quadratic part nonzero

    std::uint32_t D() const {
        return static_cast<std::uint32_t>(linear_polys.size() + quad_polys.size());
    }
    // {x : b_i^T x = 0 for every linear poly}
    Subspace linear_layer() const;
    void validate() const;  // dimensions, characteristic, layer membership
};

struct Atom {
    std::vector<std::uint8_t> label;     // one residue per poly: linear, then quad
    std::vector<std::uint64_t> points;   // little-endian indices
};

// nonempty level sets, sorted by label (little-endian over the label digits)
std::vector<Atom> atoms(const QuadraticFactor& B);

// cell partition whose cells are the atoms of B (same order as atoms(B))
PartitionView factor_partition(const QuadraticFactor& B);

struct RankReport {
    bool infinite = false;  // empty quadratic layer
    std::uint32_t rank = 0;
    std::vector<std::uint8_t> witness;  // lambda attaining the minimum

    bool at_least(double bound) const { return infinite || rank >= bound; }
};

// min over projective lambda of rank(sum lambda_i M_i); exhaustive scan
RankReport factor_rank(const QuadraticFactor& B);

struct AtomEquidist {
    std::vector<std::uint8_t> label;
    std::uint64_t size = 0;
    double size_ratio = 0.0;  // |B| / p^n
    bool size_ok = false;     // within [p^-D/2, 3 p^-D/2]
    double max_phase = 0.0;   // max over nonconstant L of |E_{x in B} e_p(L(x))|
    FieldVector worst_L;
    double phase_bound = 0.0;      // p^{-r/2}
    bool phase_ok = false;
    double corrected_bound = 0.0;  // (1 - 1/p) p^{-r/2} p^n / |B|
    bool corrected_ok = false;
};

struct EquidistReport {
    RankReport rank;
    bool applicable = false;       // quadratic layer nonempty
    bool size_applicable = false;  // r >= 2(D+1)
    std::vector<AtomEquidist> per_atom;
    bool all_phase_ok = false;
    bool all_size_ok = false;
    bool all_corrected_ok = false;
};

EquidistReport check_equidistribution(const QuadraticFactor& B);

struct QuadBiasReport {
    double value = 0.0;
    std::vector<std::uint8_t> quad_part;  // upper-triangle coefficients
    FieldVector r;                        // maximizing linear frequency
    double alpha = 0.0;                   // atom mean of f
};

// sup over quadratic P of |E_{x in B} (f(x) - alpha_B) e_p(P(x))|, exact:
// each quadratic part is swept, the linear part maximized spectrally
QuadBiasReport quadratic_bias(const DensityFunction& f, const Atom& atom,
                              unsigned jobs = 1);

// same sup without balancing: sup_P |E_{x in B} f(x) e_p(P(x))|
QuadBiasReport u3_small_norm(const DensityFunction& f, const Atom& atom,
                             unsigned jobs = 1);

struct QrpReport {
    double delta = 0.0;
    double l2_err = 0.0;
    bool l2_ok = false;
    double u3 = 0.0;
    double u3_bound = 0.0;  // 1/omega(D)
    bool u3_ok = false;
    RankReport rank;
    double rank_bound = 0.0;  // R(D)
    bool rank_ok = false;
    bool pass = false;
};

// ||f_err||_{L2} < delta, ||f - E(f|B) - f_err||_{U3} < 1/omega(D),
// rank(B) >= R(D)
QrpReport qrp_predicate(const DensityFunction& f, const QuadraticFactor& B,
                        const DensityFunction& f_err, double delta,
                        const std::function<double(std::uint32_t)>& omega,
                        const std::function<double(std::uint32_t)>& R);

struct AtomBias {
    std::vector<std::uint8_t> label;
    std::uint64_t size = 0;
    double bias = 0.0;
    double a1_limit = 0.0;  // delta'_B + eta p^n/|B|
    bool a1_ok = false;
    bool unbiased = false;  // bias <= 3 delta^{2/3}
};

struct UnbiasedReport {
    bool hypotheses_ok = false;
    std::vector<std::string> messages;
    double threshold = 0.0;     // 3 delta^{2/3}
    double max_fraction = 0.0;  // 2 delta^{2/3}
    double eta = 0.0;           // measured U^3 residual
    std::uint64_t failing = 0;
    double fraction = 0.0;
    std::vector<AtomBias> per_atom;
    bool pass = false;
};

// all but a 2 delta^{2/3} fraction of atoms are 3 delta^{2/3}-quadratically
// unbiased; each atom also satisfies bias <= delta'_B + eta p^n/|B|
UnbiasedReport unbiased_atoms_check(const DensityFunction& f, const QuadraticFactor& B,
                                    const DensityFunction& f_err, double delta,
                                    const std::function<double(std::uint32_t)>& omega,
                                    const std::function<double(std::uint32_t)>& R,
                                    unsigned jobs = 1);

struct LinearRegReport {
    bool hypotheses_ok = false;
    double rank_bound = 0.0;  // 2(D + 1 + log_p(delta^{1/3}))
    RankReport rank;
    double eps = 0.0;  // 7 delta^{1/3}
    UniformityReport uniformity;
    bool pass = false;
};

// the linear layer's coset partition is 7 delta^{1/3}-regular for f
LinearRegReport linear_layer_regularity(const DensityFunction& f,
                                        const QuadraticFactor& B, double delta);

}  // namespace regulab
