#include "regulab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace regulab {

DensityFunction::DensityFunction(std::uint32_t p, std::uint32_t n)
    : p_(p), n_(n), table_(require_budget(p, n, "DensityFunction"), 0.0) {}

DensityFunction::DensityFunction(std::uint32_t p, std::uint32_t n, std::vector<double> table)
    : p_(p), n_(n), table_(std::move(table)) {
    if (table_.size() != require_budget(p, n, "DensityFunction"))
        throw DimensionError("DensityFunction: table size != p^n");
}

double DensityFunction::mean() const {
    return pairwise_sum(table_) / static_cast<double>(table_.size());
}

double DensityFunction::l2_norm() const {
    double s = pairwise_sum_indexed(table_.size(),
                                    [&](std::uint64_t i) { return table_[i] * table_[i]; });
    return std::sqrt(s / static_cast<double>(table_.size()));
}

DensityFunction DensityFunction::balanced() const {
    double m = mean();
    DensityFunction g = *this;
    for (auto& v : g.table_) v -= m;
    return g;
}

std::complex<double> char_ep(std::uint32_t p, std::uint32_t t) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(t % p) / static_cast<double>(p);
    return {std::cos(angle), std::sin(angle)};
}

void dft_inplace(std::uint32_t p, std::uint32_t n, std::vector<std::complex<double>>& a) {
    std::uint64_t size = a.size();
    std::vector<std::complex<double>> omega(p * p);
    for (std::uint32_t r = 0; r < p; ++r)
        for (std::uint32_t x = 0; x < p; ++x) omega[r * p + x] = char_ep(p, r * x % p);

    std::vector<std::complex<double>> tmp(p);
    std::uint64_t stride = 1;
    for (std::uint32_t axis = 0; axis < n; ++axis) {
        std::uint64_t block = stride * p;
        for (std::uint64_t base = 0; base < size; base += block) {
            for (std::uint64_t off = 0; off < stride; ++off) {
                std::uint64_t idx = base + off;
                for (std::uint32_t j = 0; j < p; ++j) tmp[j] = a[idx + j * stride];
                for (std::uint32_t r = 0; r < p; ++r) {
                    std::complex<double> acc{0.0, 0.0};
                    for (std::uint32_t j = 0; j < p; ++j) acc += omega[r * p + j] * tmp[j];
                    a[idx + r * stride] = acc;
                }
            }
        }
        stride = block;
    }
}

Spectrum full_spectrum(const DensityFunction& f) {
    Spectrum s;
    s.p = f.p();
    s.n = f.n();
    s.coeffs.assign(f.table().begin(), f.table().end());
    dft_inplace(f.p(), f.n(), s.coeffs);
    double inv = 1.0 / static_cast<double>(f.size());
    for (auto& c : s.coeffs) c *= inv;
    return s;
}

std::complex<double> coset_fourier(const DensityFunction& f, const Subspace& H,
                                   const FieldVector& c, const FieldVector& r,
                                   bool balanced) {
    if (H.p() != f.p() || H.n() != f.n()) throw DimensionError("coset_fourier: mismatch");
    std::uint32_t p = f.p();
    std::uint64_t count = checked_pow(p, H.dim());
    const auto& basis = H.basis();

    auto term = [&](std::uint64_t t) {
        FieldVector coeffs = FieldVector::from_index(p, H.dim(), t);
        FieldVector x = c;
        for (std::uint32_t i = 0; i < H.dim(); ++i)
            if (coeffs[i]) x = x + basis[i] * coeffs[i];
        return std::make_pair(f.at(x), r.dot(x));
    };

    std::complex<double> acc = pairwise_csum_indexed(count, [&](std::uint64_t t) {
        auto [v, phase] = term(t);
        return v * char_ep(p, phase);
    });
    acc /= static_cast<double>(count);
    if (balanced) {
        double m = pairwise_sum_indexed(count, [&](std::uint64_t t) { return term(t).first; }) /
                   static_cast<double>(count);
        std::complex<double> ch = pairwise_csum_indexed(count, [&](std::uint64_t t) {
            return char_ep(p, term(t).second);
        });
        acc -= m * ch / static_cast<double>(count);
    }
    return acc;
}

FieldVector CosetSpectrum::frequency(std::uint64_t s) const {
    FieldVector digits = FieldVector::from_index(subspace.p(), subspace.dim(), s);
    FieldVector r(subspace.p(), subspace.n());
    for (std::uint32_t i = 0; i < subspace.dim(); ++i) r[subspace.pivots()[i]] = digits[i];
    return r;
}

std::complex<double> CosetSpectrum::value(std::uint64_t s) const {
    return char_ep(subspace.p(), frequency(s).dot(rep)) * coeffs[s];
}

CosetSpectrum coset_spectrum(const DensityFunction& f, const Coset& B, bool balanced) {
    const Subspace& H = B.subspace;
    if (H.p() != f.p() || H.n() != f.n()) throw DimensionError("coset_spectrum: mismatch");
    std::uint32_t p = f.p();
    std::uint32_t d = H.dim();
    std::uint64_t count = require_budget(p, d, "coset_spectrum");

    // g(t) = f(rep + sum t_i b_i); then g_hat(s) = f_hat|_{H+c}(frequency(s))
    // up to the phase e_p(r^T rep) (since r^T b_i = s_i for the RREF basis)
    CosetSpectrum cs{H, B.rep, std::vector<std::complex<double>>(count)};
    FieldVector x = B.rep;
    std::vector<std::uint8_t> t(d, 0);
    for (std::uint64_t idx = 0;; ++idx) {
        cs.coeffs[idx] = f.at(x);
        if (idx + 1 == count) break;
        // mixed-radix increment of t, with x updated incrementally
        for (std::uint32_t k = 0;; ++k) {
            x = x + H.basis()[k];
            if (++t[k] < p) break;
            t[k] = 0;
            // x already wrapped around modulo p in this column
        }
    }
    dft_inplace(p, d, cs.coeffs);
    double inv = 1.0 / static_cast<double>(count);
    for (auto& c : cs.coeffs) c *= inv;
    if (balanced) cs.coeffs[0] = {0.0, 0.0};  // subtracting the mean only hits s = 0
    return cs;
}

BiasResult max_bias_on_coset(const DensityFunction& f, const Subspace& H,
                             const FieldVector& c) {
    CosetSpectrum cs = coset_spectrum(f, Coset(H, c), /*balanced=*/true);
    std::uint64_t best = 0;
    double best_val = 0.0;
    for (std::uint64_t s = 0; s < cs.coeffs.size(); ++s) {
        double v = std::abs(cs.coeffs[s]);
        if (v > best_val) {
            best_val = v;
            best = s;
        }
    }
    return {cs.frequency(best), best_val};
}

UniformityReport regularity_check(const DensityFunction& f, const Subspace& H,
                                  double eps) {
    require_budget(f.p(), H.codim(), "regularity_check");
    UniformityReport rep;
    rep.epsilon = eps;
    auto reps = H.coset_reps();
    rep.total_cosets = reps.size();
    for (const auto& c : reps) {
        BiasResult b = max_bias_on_coset(f, H, c);
        if (b.value > eps) rep.bad_cosets.push_back({c, b.r, b.value});
    }
    rep.bad_fraction =
        static_cast<double>(rep.bad_cosets.size()) / static_cast<double>(rep.total_cosets);
    rep.regular = rep.bad_fraction <= eps;
    return rep;
}

double u2_norm(const BalancedFunction& f) {
    Spectrum s = full_spectrum(f);
    double sum = pairwise_sum_indexed(s.coeffs.size(), [&](std::uint64_t r) {
        double m = std::norm(s.coeffs[r]);
        return m * m;
    });
    return std::pow(sum, 0.25);
}

double u3_norm(const BalancedFunction& f) {
    std::uint32_t p = f.p();
    std::uint64_t size = f.size();
    require_budget(p, 2 * f.n(), "u3_norm");  // p^(2n) scalar work
    std::vector<std::complex<double>> diff(size);
    double total = pairwise_sum_indexed(size, [&](std::uint64_t h) {
        FieldVector vh = FieldVector::from_index(p, f.n(), h);
        for (std::uint64_t x = 0; x < size; ++x) {
            FieldVector vx = FieldVector::from_index(p, f.n(), x);
            diff[x] = f[(vx + vh).to_index()] * f[x];
        }
        dft_inplace(p, f.n(), diff);
        double inv = 1.0 / static_cast<double>(size);
        return pairwise_sum_indexed(size, [&](std::uint64_t r) {
            double m = std::norm(diff[r] * inv);
            return m * m;
        });
    });
    return std::pow(total / static_cast<double>(size), 1.0 / 8.0);
}

DensityFunction random_function(std::uint32_t p, std::uint32_t n, CounterRng& rng,
                                double lo, double hi) {
    DensityFunction f(p, n);
    for (std::uint64_t i = 0; i < f.size(); ++i) f[i] = lo + (hi - lo) * rng.unit();
    return f;
}

}  // namespace regulab
