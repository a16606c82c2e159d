#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "regulab/common.hpp"
#include "regulab/field_space.hpp"

namespace regulab {

// Dense table of real values on F_p^n, indexed little-endian base-p.
// Used both for densities (values in [0,1]) and balanced functions
// (values in [-1,1]).
class DensityFunction {
  public:
    DensityFunction() : p_(2), n_(0), table_(1, 0.0) {}
    DensityFunction(std::uint32_t p, std::uint32_t n);
    DensityFunction(std::uint32_t p, std::uint32_t n, std::vector<double> table);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint64_t size() const { return table_.size(); }
    double operator[](std::uint64_t i) const { return table_[i]; }
    double& operator[](std::uint64_t i) { return table_[i]; }
    const std::vector<double>& table() const { return table_; }

    double at(const FieldVector& x) const { return table_[x.to_index()]; }

    double mean() const;
    double l2_norm() const;  // (E_x f(x)^2)^(1/2)
    DensityFunction balanced() const;  // f - mean

    bool operator==(const DensityFunction& o) const = default;

  private:
    std::uint32_t p_;
    std::uint32_t n_;
    std::vector<double> table_;
};

using BalancedFunction = DensityFunction;

struct Spectrum {
    std::uint32_t p = 2;
    std::uint32_t n = 0;
    std::vector<std::complex<double>> coeffs;  // indexed by frequency r

    const std::complex<double>& at(const FieldVector& r) const {
        return coeffs[r.to_index()];
    }
};

// e_p(t) = exp(2*pi*i*t/p)
std::complex<double> char_ep(std::uint32_t p, std::uint32_t t);

// In-place unnormalized transform: a[r] <- sum_x a[x) e_p(r^T x), computed
// as n successive radix-p passes (cost n*p^(n+1) scalar ops).
void dft_inplace(std::uint32_t p, std::uint32_t n, std::vector<std::complex<double>>& a);

// f_hat(r) = E_x f(x) e_p(r^T x) for all r.
Spectrum full_spectrum(const DensityFunction& f);

// E_{x in H+c} F(x) e_p(r^T x), F = f (or f minus its coset mean if balanced).
std::complex<double> coset_fourier(const DensityFunction& f, const Subspace& H,
                                   const FieldVector& c, const FieldVector& r,
                                   bool balanced);

// Spectrum of f restricted to a coset, one coefficient per character class:
// index s ranges over F_p^dim(H), and frequency(s) is the canonical ambient
// representative with coeffs[s] = |f_hat|_{H+c}(frequency(s))|... precisely
// f_hat|_{H+c}(frequency(s)) up to the phase e_p(r^T c) which is recorded.
struct CosetSpectrum {
    Subspace subspace;
    FieldVector rep;
    std::vector<std::complex<double>> coeffs;  // index s in F_p^dim, = g_hat(s)

    // canonical ambient frequency for class s: sum_i s_i e_{pivot_i}
    FieldVector frequency(std::uint64_t s) const;
    // f_hat|_{H+c}(frequency(s)) with the translation phase applied
    std::complex<double> value(std::uint64_t s) const;
};

CosetSpectrum coset_spectrum(const DensityFunction& f, const Coset& B, bool balanced);

struct BiasResult {
    FieldVector r;
    double value = 0.0;
};

// max_r |(f - coset mean)_hat|_{H+c}(r)|, scanned over one representative per
// frequency class modulo the annihilator of H.
BiasResult max_bias_on_coset(const DensityFunction& f, const Subspace& H,
                             const FieldVector& c);

struct BadCoset {
    FieldVector rep;
    FieldVector worst_r;
    double bias = 0.0;
};

struct UniformityReport {
    double epsilon = 0.0;
    std::uint64_t total_cosets = 0;
    std::vector<BadCoset> bad_cosets;
    double bad_fraction = 0.0;
    bool regular = false;  // bad_fraction <= epsilon
};

// Lists every coset of H on which f is not eps-uniform.
UniformityReport regularity_check(const DensityFunction& f, const Subspace& H,
                                  double eps);

// ||f||_{U^2} = (sum_r |f_hat(r)|^4)^(1/4)
double u2_norm(const BalancedFunction& f);

// ||f||_{U^3} via ||f||_{U^3}^8 = E_h ||D_h f||_{U^2}^4 with
// (D_h f)(x) = f(x+h) f(x); p^(2n) scalar work.
double u3_norm(const BalancedFunction& f);

// Uniformly random table with values in [lo, hi).
DensityFunction random_function(std::uint32_t p, std::uint32_t n, CounterRng& rng,
                                double lo = 0.0, double hi = 1.0);

}  // namespace regulab
