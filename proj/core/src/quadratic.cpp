#include "regulab/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace regulab {

namespace {

void require_odd(std::uint32_t p, const char* what) {
    if (p < 3 || p % 2 == 0)
        throw DimensionError(std::string(what) + ": quadratic machinery needs odd p");
}

}  // namespace

QuadPoly QuadPoly::zero(std::uint32_t p, std::uint32_t n) {
    require_odd(p, "QuadPoly::zero");
    QuadPoly q;
    q.p = p;
    q.n = n;
    q.M.assign(n, std::vector<std::uint8_t>(n, 0));
    q.b = FieldVector(p, n);
    q.c = 0;
    return q;
}

QuadPoly QuadPoly::linear(const FieldVector& b, std::uint8_t c) {
    QuadPoly q = zero(b.p(), b.n());
    q.b = b;
    q.c = c;
    return q;
}

QuadPoly QuadPoly::from_upper_triangle(std::uint32_t p, std::uint32_t n,
                                       const std::vector<std::uint8_t>& upper,
                                       const FieldVector& b, std::uint8_t c) {
    QuadPoly q = zero(p, n);
    if (upper.size() != static_cast<std::size_t>(n) * (n + 1) / 2)
        throw DimensionError("QuadPoly::from_upper_triangle: wrong coefficient count");
    std::uint8_t inv2 = mod_inverse(p, 2);
    std::size_t t = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i; j < n; ++j, ++t) {
            std::uint8_t a = static_cast<std::uint8_t>(upper[t] % p);
            if (i == j)
                q.M[i][i] = a;
            else
                q.M[i][j] = q.M[j][i] = static_cast<std::uint8_t>((a * inv2) % p);
        }
    }
    q.b = b;
    q.c = c;
    return q;
}

std::uint8_t QuadPoly::eval(const FieldVector& x) const {
    if (x.n() != n || x.p() != p) throw DimensionError("QuadPoly::eval: dimension mismatch");
    std::uint32_t acc = c;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        std::uint32_t row = 0;
        for (std::uint32_t j = 0; j < n; ++j) row += M[i][j] * x[j];
        acc += (row % p) * x[i];
        acc %= p * p;  // keep small
    }
    acc += b.dot(x);
    return static_cast<std::uint8_t>(acc % p);
}

std::uint32_t QuadPoly::degree() const {
    if (!quad_part_zero()) return 2;
    if (!b.is_zero()) return 1;
    return 0;
}

bool QuadPoly::quad_part_zero() const {
    for (const auto& row : M)
        for (std::uint8_t v : row)
            if (v != 0) return false;
    return true;
}

std::string QuadPoly::str() const {
    std::string s = "quad[";
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i; j < n; ++j)
            if (M[i][j] != 0)
                s += std::to_string((i == j ? M[i][j] : (2 * M[i][j]) % p)) + "*x" +
                     std::to_string(i) + "x" + std::to_string(j) + " ";
    s += "| " + b.str() + " | " + std::to_string(c) + "]";
    return s;
}

std::uint32_t matrix_rank(std::uint32_t p, std::vector<std::vector<std::uint8_t>> M) {
    std::uint32_t rows = static_cast<std::uint32_t>(M.size());
    std::uint32_t cols = rows == 0 ? 0 : static_cast<std::uint32_t>(M[0].size());
    std::uint32_t rank = 0;
    for (std::uint32_t col = 0; col < cols && rank < rows; ++col) {
        std::uint32_t sel = rank;
        while (sel < rows && M[sel][col] == 0) ++sel;
        if (sel == rows) continue;
        std::swap(M[sel], M[rank]);
        std::uint8_t inv = mod_inverse(p, M[rank][col]);
        for (std::uint32_t j = 0; j < cols; ++j)
            M[rank][j] = static_cast<std::uint8_t>((M[rank][j] * inv) % p);
        for (std::uint32_t r = 0; r < rows; ++r) {
            if (r == rank || M[r][col] == 0) continue;
            std::uint8_t m = M[r][col];
            for (std::uint32_t j = 0; j < cols; ++j)
                M[r][j] = static_cast<std::uint8_t>((M[r][j] + (p - m) * M[rank][j]) % p);
        }
        ++rank;
    }
    return rank;
}

Subspace QuadraticFactor::linear_layer() const {
    std::vector<FieldVector> normals;
    for (const auto& q : linear_polys) normals.push_back(q.b);
    return Subspace::span(p, n, normals).annihilator();
}

void QuadraticFactor::validate() const {
    require_odd(p, "QuadraticFactor");
    for (const auto& q : linear_polys) {
        if (q.p != p || q.n != n) throw DimensionError("QuadraticFactor: mismatched poly");
        if (!q.quad_part_zero())
            throw DimensionError("QuadraticFactor: quadratic poly in the linear layer");
    }
    for (const auto& q : quad_polys) {
        if (q.p != p || q.n != n) throw DimensionError("QuadraticFactor: mismatched poly");
        if (q.quad_part_zero())
            throw DimensionError("QuadraticFactor: linear poly in the quadratic layer");
    }
}

std::vector<Atom> atoms(const QuadraticFactor& B) {
    B.validate();
    std::uint64_t size = require_budget(B.p, B.n, "atoms");
    std::uint32_t D = B.D();
    std::map<std::uint64_t, Atom> by_label;  // ordered by label index
    for (std::uint64_t xi = 0; xi < size; ++xi) {
        FieldVector x = FieldVector::from_index(B.p, B.n, xi);
        std::vector<std::uint8_t> label;
        label.reserve(D);
        std::uint64_t key = 0, mult = 1;
        for (const auto& q : B.linear_polys) {
            std::uint8_t v = q.eval(x);
            label.push_back(v);
            key += v * mult;
            mult *= B.p;
        }
        for (const auto& q : B.quad_polys) {
            std::uint8_t v = q.eval(x);
            label.push_back(v);
            key += v * mult;
            mult *= B.p;
        }
        auto [it, fresh] = by_label.try_emplace(key);
        if (fresh) it->second.label = std::move(label);
        it->second.points.push_back(xi);
    }
    std::vector<Atom> out;
    out.reserve(by_label.size());
    for (auto& [key, atom] : by_label) out.push_back(std::move(atom));
    return out;
}

PartitionView factor_partition(const QuadraticFactor& B) {
    auto as = atoms(B);
    std::uint64_t size = checked_pow(B.p, B.n);
    std::vector<std::uint32_t> labels(size);
    for (std::uint32_t id = 0; id < as.size(); ++id)
        for (std::uint64_t x : as[id].points) labels[x] = id;
    return PartitionView::from_labels(B.p, B.n, std::move(labels));
}

RankReport factor_rank(const QuadraticFactor& B) {
    B.validate();
    RankReport rep;
    std::uint32_t q = static_cast<std::uint32_t>(B.quad_polys.size());
    if (q == 0) {
        rep.infinite = true;
        return rep;
    }
    std::uint64_t total = require_budget(B.p, q, "factor_rank");
    rep.rank = B.n + 1;  // above any attainable rank
    for (std::uint64_t li = 1; li < total; ++li) {
        FieldVector lambda = FieldVector::from_index(B.p, q, li);
        std::uint32_t lead = 0;
        while (lambda[lead] == 0) ++lead;
        if (lambda[lead] != 1) continue;  // one per projective class
        std::vector<std::vector<std::uint8_t>> M(B.n, std::vector<std::uint8_t>(B.n, 0));
        for (std::uint32_t k = 0; k < q; ++k) {
            if (lambda[k] == 0) continue;
            for (std::uint32_t i = 0; i < B.n; ++i)
                for (std::uint32_t j = 0; j < B.n; ++j)
                    M[i][j] = static_cast<std::uint8_t>(
                        (M[i][j] + lambda[k] * B.quad_polys[k].M[i][j]) % B.p);
        }
        std::uint32_t r = matrix_rank(B.p, M);
        if (r < rep.rank) {
            rep.rank = r;
            rep.witness = lambda.coords();
            if (r == 0) break;
        }
    }
    return rep;
}

EquidistReport check_equidistribution(const QuadraticFactor& B) {
    EquidistReport rep;
    rep.rank = factor_rank(B);
    rep.applicable = !rep.rank.infinite;
    std::uint32_t D = B.D();
    rep.size_applicable = rep.applicable && rep.rank.rank >= 2 * (D + 1);
    std::uint64_t size = require_budget(B.p, B.n, "check_equidistribution");
    double pn = static_cast<double>(size);
    double pD = std::pow(static_cast<double>(B.p), static_cast<double>(D));
    double pbound =
        rep.applicable ? std::pow(static_cast<double>(B.p), -0.5 * rep.rank.rank) : 0.0;

    rep.all_phase_ok = rep.all_size_ok = rep.all_corrected_ok = true;
    for (const Atom& atom : atoms(B)) {
        AtomEquidist a;
        a.label = atom.label;
        a.size = atom.points.size();
        a.size_ratio = a.size / pn;
        a.size_ok = a.size_ratio >= 0.5 / pD - 1e-12 && a.size_ratio <= 1.5 / pD + 1e-12;

        // indicator transform: max nonzero-frequency modulus of E_{x in B} e_p(r.x)
        std::vector<std::complex<double>> ind(size, {0.0, 0.0});
        for (std::uint64_t x : atom.points) ind[x] = {1.0, 0.0};
        dft_inplace(B.p, B.n, ind);
        a.max_phase = 0.0;
        a.worst_L = FieldVector(B.p, B.n);
        for (std::uint64_t r = 1; r < size; ++r) {
            double m = std::abs(ind[r]) / a.size;
            if (m > a.max_phase + 1e-15) {
                a.max_phase = m;
                a.worst_L = FieldVector::from_index(B.p, B.n, r);
            }
        }
        if (rep.applicable) {
            a.phase_bound = pbound;
            a.phase_ok = a.max_phase <= a.phase_bound + 1e-9;
            a.corrected_bound = (1.0 - 1.0 / B.p) * pbound * pn / a.size;
            a.corrected_ok = a.max_phase <= a.corrected_bound + 1e-9;
        } else {
            a.phase_ok = a.corrected_ok = true;  // no quadratic layer: N/A
        }
        rep.all_phase_ok = rep.all_phase_ok && a.phase_ok;
        if (rep.size_applicable) rep.all_size_ok = rep.all_size_ok && a.size_ok;
        rep.all_corrected_ok = rep.all_corrected_ok && a.corrected_ok;
        rep.per_atom.push_back(std::move(a));
    }
    return rep;
}

namespace {

struct SweepBest {
    double value = -1.0;
    std::uint64_t qidx = 0;
    std::uint64_t ridx = 0;
};

QuadBiasReport bias_sweep(const DensityFunction& f, const Atom& atom, bool balanced,
                          unsigned jobs) {
    require_odd(f.p(), "quadratic_bias");
    std::uint32_t p = f.p(), n = f.n();
    std::uint64_t size = require_budget(p, n, "quadratic_bias");
    std::uint32_t T = n * (n + 1) / 2;
    std::uint64_t qtotal = require_budget(p, T, "quadratic_bias quadratic-part sweep");

    QuadBiasReport rep;
    long double asum = 0.0L;
    for (std::uint64_t x : atom.points) asum += f[x];
    rep.alpha = static_cast<double>(asum / atom.points.size());
    double shift = balanced ? rep.alpha : 0.0;

    // monomial value tables: mono[t][x] = x_i x_j mod p (i <= j row-major)
    std::vector<std::vector<std::uint8_t>> mono(T, std::vector<std::uint8_t>(size));
    {
        std::uint32_t t = 0;
        for (std::uint32_t i = 0; i < n; ++i)
            for (std::uint32_t j = i; j < n; ++j, ++t)
                for (std::uint64_t xi = 0; xi < size; ++xi) {
                    FieldVector x = FieldVector::from_index(p, n, xi);
                    mono[t][xi] = static_cast<std::uint8_t>((x[i] * x[j]) % p);
                }
    }
    std::vector<std::complex<double>> omega(p);
    for (std::uint32_t k = 0; k < p; ++k) omega[k] = char_ep(p, k);

    auto sweep = [&](std::uint64_t lo, std::uint64_t hi, SweepBest& best) {
        std::vector<std::complex<double>> g(size);
        std::vector<std::uint8_t> coeff(T);
        for (std::uint64_t qi = lo; qi < hi; ++qi) {
            std::uint64_t rest = qi;
            for (std::uint32_t t = 0; t < T; ++t) {
                coeff[t] = static_cast<std::uint8_t>(rest % p);
                rest /= p;
            }
            std::fill(g.begin(), g.end(), std::complex<double>{0.0, 0.0});
            for (std::uint64_t x : atom.points) {
                std::uint32_t qv = 0;
                for (std::uint32_t t = 0; t < T; ++t) qv += coeff[t] * mono[t][x];
                g[x] = (f[x] - shift) * omega[qv % p];
            }
            dft_inplace(p, n, g);
            for (std::uint64_t r = 0; r < size; ++r) {
                double m = std::abs(g[r]) / atom.points.size();
                if (m > best.value + 1e-15) {
                    best.value = m;
                    best.qidx = qi;
                    best.ridx = r;
                }
            }
        }
    };

    SweepBest best;
    if (jobs <= 1 || qtotal < 2 * jobs) {
        sweep(0, qtotal, best);
    } else {
        std::vector<SweepBest> parts(jobs);
        std::vector<std::thread> threads;
        std::uint64_t chunk = (qtotal + jobs - 1) / jobs;
        for (unsigned j = 0; j < jobs; ++j) {
            std::uint64_t lo = j * chunk, hi = std::min(qtotal, lo + chunk);
            if (lo >= hi) break;
            threads.emplace_back([&, lo, hi, j] { sweep(lo, hi, parts[j]); });
        }
        for (auto& th : threads) th.join();
        // deterministic merge: larger value, then smaller quadratic part,
        // then smaller frequency (each candidate is computed identically
        // regardless of the thread layout)
        for (const SweepBest& cand : parts) {
            if (cand.value > best.value ||
                (cand.value == best.value &&
                 (cand.qidx < best.qidx ||
                  (cand.qidx == best.qidx && cand.ridx < best.ridx))))
                best = cand;
        }
    }

    rep.value = best.value;
    rep.quad_part.resize(T);
    std::uint64_t rest = best.qidx;
    for (std::uint32_t t = 0; t < T; ++t) {
        rep.quad_part[t] = static_cast<std::uint8_t>(rest % p);
        rest /= p;
    }
    rep.r = FieldVector::from_index(p, n, best.ridx);
    return rep;
}

}  // namespace

QuadBiasReport quadratic_bias(const DensityFunction& f, const Atom& atom, unsigned jobs) {
    return bias_sweep(f, atom, true, jobs);
}

QuadBiasReport u3_small_norm(const DensityFunction& f, const Atom& atom, unsigned jobs) {
    return bias_sweep(f, atom, false, jobs);
}

QrpReport qrp_predicate(const DensityFunction& f, const QuadraticFactor& B,
                        const DensityFunction& f_err, double delta,
                        const std::function<double(std::uint32_t)>& omega,
                        const std::function<double(std::uint32_t)>& R) {
    if (f.p() != B.p || f.n() != B.n || f_err.p() != B.p || f_err.n() != B.n)
        throw DimensionError("qrp_predicate: mismatched domains");
    QrpReport rep;
    rep.delta = delta;
    rep.l2_err = f_err.l2_norm();
    rep.l2_ok = rep.l2_err < delta;

    DensityFunction ef = conditional_expectation(f, factor_partition(B));
    DensityFunction g(f.p(), f.n());
    for (std::uint64_t x = 0; x < f.size(); ++x) g[x] = f[x] - ef[x] - f_err[x];
    rep.u3 = u3_norm(g);
    rep.u3_bound = 1.0 / omega(B.D());
    rep.u3_ok = rep.u3 < rep.u3_bound;

    rep.rank = factor_rank(B);
    rep.rank_bound = R(B.D());
    rep.rank_ok = rep.rank.at_least(rep.rank_bound);
    rep.pass = rep.l2_ok && rep.u3_ok && rep.rank_ok;
    return rep;
}

UnbiasedReport unbiased_atoms_check(const DensityFunction& f, const QuadraticFactor& B,
                                    const DensityFunction& f_err, double delta,
                                    const std::function<double(std::uint32_t)>& omega,
                                    const std::function<double(std::uint32_t)>& R,
                                    unsigned jobs) {
    UnbiasedReport rep;
    QrpReport qrp = qrp_predicate(f, B, f_err, delta, omega, R);
    rep.hypotheses_ok = true;
    if (!qrp.pass) {
        rep.hypotheses_ok = false;
        rep.messages.push_back("factor is not a quadratic regularity partition");
    }
    double d23 = std::pow(delta, -2.0 / 3.0);
    for (std::uint32_t d = 0; d <= B.D(); ++d) {
        if (omega(d) < d23 * std::pow(static_cast<double>(B.p), d) - 1e-9) {
            rep.hypotheses_ok = false;
            rep.messages.push_back("omega(d) < delta^{-2/3} p^d at d=" + std::to_string(d));
            break;
        }
    }
    for (std::uint32_t d = 0; d <= B.D(); ++d) {
        if (R(d) < 2.0 * (d + 1) - 1e-9) {
            rep.hypotheses_ok = false;
            rep.messages.push_back("R(d) < 2(d+1) at d=" + std::to_string(d));
            break;
        }
    }

    rep.threshold = 3.0 * std::pow(delta, 2.0 / 3.0);
    rep.max_fraction = 2.0 * std::pow(delta, 2.0 / 3.0);
    rep.eta = qrp.u3;
    double pn = static_cast<double>(f.size());

    auto as = atoms(B);
    bool all_a1 = true;
    for (const Atom& atom : as) {
        AtomBias ab;
        ab.label = atom.label;
        ab.size = atom.points.size();
        ab.bias = quadratic_bias(f, atom, jobs).value;
        long double esq = 0.0L;
        for (std::uint64_t x : atom.points) esq += f_err[x] * f_err[x];
        double dprime = std::sqrt(static_cast<double>(esq / atom.points.size()));
        ab.a1_limit = dprime + rep.eta * pn / ab.size;
        ab.a1_ok = ab.bias <= ab.a1_limit + 1e-9;
        ab.unbiased = ab.bias <= rep.threshold;
        if (!ab.unbiased) ++rep.failing;
        all_a1 = all_a1 && ab.a1_ok;
        rep.per_atom.push_back(std::move(ab));
    }
    rep.fraction = static_cast<double>(rep.failing) / as.size();
    rep.pass = rep.hypotheses_ok && rep.fraction <= rep.max_fraction + 1e-12 && all_a1;
    return rep;
}

LinearRegReport linear_layer_regularity(const DensityFunction& f,
                                        const QuadraticFactor& B, double delta) {
    if (f.p() != B.p || f.n() != B.n)
        throw DimensionError("linear_layer_regularity: mismatched domains");
    LinearRegReport rep;
    rep.rank = factor_rank(B);
    rep.rank_bound = 2.0 * (B.D() + 1 +
                            std::log(std::cbrt(delta)) / std::log(static_cast<double>(B.p)));
    rep.hypotheses_ok = rep.rank.at_least(rep.rank_bound);
    rep.eps = 7.0 * std::cbrt(delta);
    rep.uniformity = regularity_check(f, B.linear_layer(), rep.eps);
    rep.pass = rep.hypotheses_ok && rep.uniformity.regular;
    return rep;
}

}  // namespace regulab
