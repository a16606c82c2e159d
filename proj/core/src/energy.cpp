#include "regulab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace regulab {

PartitionView PartitionView::from_subspace(const Subspace& H) {
    PartitionView P;
    P.p_ = H.p();
    P.n_ = H.n();
    std::uint64_t size = require_budget(H.p(), H.n(), "PartitionView::from_subspace");
    P.labels_.resize(size);
    std::unordered_map<std::uint64_t, std::uint32_t> rep_id;
    for (std::uint64_t x = 0; x < size; ++x) {
        std::uint64_t rep = H.coset_rep(FieldVector::from_index(H.p(), H.n(), x)).to_index();
        auto [it, fresh] = rep_id.try_emplace(rep, static_cast<std::uint32_t>(rep_id.size()));
        P.labels_[x] = it->second;
    }
    P.cells_ = static_cast<std::uint32_t>(rep_id.size());
    P.subspace_ = H;
    return P;
}

PartitionView PartitionView::from_labels(std::uint32_t p, std::uint32_t n,
                                         std::vector<std::uint32_t> labels) {
    std::uint64_t size = require_budget(p, n, "PartitionView::from_labels");
    if (labels.size() != size)
        throw DimensionError("PartitionView::from_labels: label table size != p^n");
    std::uint32_t cells = 0;
    for (std::uint32_t l : labels) cells = std::max(cells, l + 1);
    std::vector<char> seen(cells, 0);
    for (std::uint32_t l : labels) seen[l] = 1;
    for (std::uint32_t c = 0; c < cells; ++c)
        if (!seen[c]) throw DimensionError("PartitionView::from_labels: empty cell id");
    PartitionView P;
    P.p_ = p;
    P.n_ = n;
    P.cells_ = cells;
    P.labels_ = std::move(labels);
    return P;
}

PartitionView PartitionView::singletons(std::uint32_t p, std::uint32_t n) {
    std::uint64_t size = require_budget(p, n, "PartitionView::singletons");
    std::vector<std::uint32_t> labels(size);
    for (std::uint64_t x = 0; x < size; ++x) labels[x] = static_cast<std::uint32_t>(x);
    return from_labels(p, n, std::move(labels));
}

PartitionView PartitionView::trivial(std::uint32_t p, std::uint32_t n) {
    std::uint64_t size = require_budget(p, n, "PartitionView::trivial");
    return from_labels(p, n, std::vector<std::uint32_t>(size, 0));
}

bool PartitionView::refines(const PartitionView& coarser) const {
    if (p_ != coarser.p_ || n_ != coarser.n_) return false;
    // within each fine cell, the coarse label must be constant
    std::vector<std::int64_t> coarse_of(cells_, -1);
    for (std::uint64_t x = 0; x < labels_.size(); ++x) {
        std::uint32_t fc = labels_[x];
        std::uint32_t cc = coarser.labels_[x];
        if (coarse_of[fc] < 0)
            coarse_of[fc] = cc;
        else if (coarse_of[fc] != cc)
            return false;
    }
    return true;
}

DensityFunction conditional_expectation(const DensityFunction& f, const PartitionView& P) {
    if (f.p() != P.p() || f.n() != P.n())
        throw DimensionError("conditional_expectation: mismatched domains");
    std::vector<long double> sums(P.cell_count(), 0.0L);
    std::vector<std::uint64_t> counts(P.cell_count(), 0);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        sums[P.cell_of(x)] += f[x];
        counts[P.cell_of(x)]++;
    }
    DensityFunction g(f.p(), f.n());
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        std::uint32_t c = P.cell_of(x);
        g[x] = static_cast<double>(sums[c] / counts[c]);
    }
    return g;
}

EnergyReport energy(const DensityFunction& f, const PartitionView& P) {
    if (f.p() != P.p() || f.n() != P.n())
        throw DimensionError("energy: mismatched domains");
    EnergyReport rep;
    std::vector<long double> sums(P.cell_count(), 0.0L);
    rep.cell_sizes.assign(P.cell_count(), 0);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        sums[P.cell_of(x)] += f[x];
        rep.cell_sizes[P.cell_of(x)]++;
    }
    rep.cell_means.resize(P.cell_count());
    long double e = 0.0L;
    for (std::uint32_t c = 0; c < P.cell_count(); ++c) {
        long double mean = sums[c] / rep.cell_sizes[c];
        rep.cell_means[c] = static_cast<double>(mean);
        e += mean * mean * rep.cell_sizes[c];
    }
    rep.energy = static_cast<double>(e / static_cast<long double>(f.size()));
    return rep;
}

double subspace_energy(const Spectrum& spec, const Subspace& W) {
    if (spec.p != W.p() || spec.n != W.n())
        throw DimensionError("subspace_energy: mismatched domains");
    Subspace A = W.annihilator();
    auto rs = A.elements();
    return pairwise_sum_indexed(rs.size(), [&](std::uint64_t i) {
        return std::norm(spec.coeffs[rs[i].to_index()]);
    });
}

PythagorasReport energy_property_suite(const DensityFunction& f, const PartitionView& P,
                                       const PartitionView& Q) {
    if (!Q.refines(P)) throw DimensionError("energy_property_suite: Q does not refine P");
    PythagorasReport rep;
    rep.energy_coarse = energy(f, P).energy;
    rep.energy_fine = energy(f, Q).energy;
    rep.gap = rep.energy_fine - rep.energy_coarse;
    DensityFunction ep = conditional_expectation(f, P);
    DensityFunction eq = conditional_expectation(f, Q);
    rep.l2_diff_sq = pairwise_sum_indexed(f.size(), [&](std::uint64_t x) {
        double d = eq[x] - ep[x];
        return d * d;
    }) / static_cast<double>(f.size());
    double hi = 0.0;
    for (std::uint64_t x = 0; x < f.size(); ++x) hi = std::max(hi, std::abs(f[x]));
    rep.bounds_ok = rep.energy_coarse >= -1e-12 &&
                    rep.energy_coarse <= std::max(1.0, hi * hi) + 1e-12;
    rep.monotone_ok = rep.gap >= -1e-9;
    rep.pythagoras_ok = std::abs(rep.gap - rep.l2_diff_sq) <= 1e-9;
    rep.pass = rep.bounds_ok && rep.monotone_ok && rep.pythagoras_ok;
    return rep;
}

std::vector<double> alpha_decomposition(const Instance& inst, const Subspace& H,
                                        const FieldVector& u) {
    bool in_chain = false;
    for (std::uint32_t k = 0; k <= inst.s; ++k)
        if (H == inst.H(k)) in_chain = true;
    if (!in_chain) throw DimensionError("alpha_decomposition: H not in the instance chain");

    std::vector<long double> acc(inst.s, 0.0L);
    std::uint64_t count = 0;
    auto pts = H.elements();
    for (const auto& h : pts) {
        FieldVector x = u + h;
        for (std::uint32_t j = 1; j <= inst.s; ++j)
            if (inst.in_layer(j, x)) acc[j - 1] += inst.weights[j - 1];
        ++count;
    }
    std::vector<double> alphas(inst.s);
    for (std::uint32_t j = 0; j < inst.s; ++j)
        alphas[j] = static_cast<double>(acc[j] / count);
    return alphas;
}

EnergyGapReport verify_energy_middle(const Instance& inst, std::uint32_t i) {
    if (i < 1 || i > inst.s) throw DimensionError("verify_energy_middle: bad layer");
    EnergyGapReport rep;
    rep.layer = i;
    Spectrum spec = full_spectrum(inst.f);
    rep.energy_prev = subspace_energy(spec, inst.H(i - 1));
    rep.energy_cur = subspace_energy(spec, inst.H(i));
    rep.gap = rep.energy_cur - rep.energy_prev;
    double w = inst.weights[i - 1];
    rep.bound = w * w / (static_cast<double>(inst.p) * inst.p);
    rep.pass = rep.gap >= rep.bound - 1e-9;
    return rep;
}

std::vector<Subspace> adversarial_subspaces(const Instance& inst, std::uint32_t i) {
    std::vector<Subspace> out;
    Subspace Hi = inst.H(i);
    for (std::uint32_t j = 0; j <= i; ++j) {
        Subspace Hj = inst.H(j);
        if (Hj.codim() <= Hi.codim()) out.push_back(Hj);
        for (std::uint32_t layer = 1; layer <= inst.s; ++layer) {
            for (const auto& xi : inst.tuples[layer - 1].vectors) {
                Subspace cut = Hj.intersect(Subspace::span(inst.p, inst.n, {xi}).annihilator());
                if (cut.codim() <= Hi.codim()) out.push_back(cut);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const Subspace& a, const Subspace& b) {
        return a.str() < b.str();
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

EnergyStartReport verify_energy_start(const Instance& inst, std::uint32_t i,
                                      const std::vector<Subspace>& candidates) {
    if (i < 1 || i > inst.s) throw DimensionError("verify_energy_start: bad layer");
    for (std::uint32_t j = i; j < inst.s; ++j)
        if (inst.weights[j] > inst.weights[i - 1] + 1e-12)
            throw DimensionError("verify_energy_start: weights increase beyond i");
    EnergyStartReport rep;
    rep.layer = i;
    Spectrum spec = full_spectrum(inst.f);
    Subspace Hi = inst.H(i);
    rep.energy_Hi = subspace_energy(spec, Hi);
    double w = inst.weights[i - 1];
    rep.bound = 8.0 * w * w;
    double limit = rep.energy_Hi + rep.bound;
    for (const auto& W : candidates) {
        if (W.codim() > Hi.codim())
            throw DimensionError("verify_energy_start: candidate codim too large");
        double e = subspace_energy(spec, W);
        ++rep.checked;
        if (!(e < limit + 1e-9)) rep.violations.push_back({W, e, limit});
    }
    rep.pass = rep.violations.empty();
    return rep;
}

PairCheckReport sarl_pair_check(const DensityFunction& f, const Subspace& W1,
                                const Subspace& W2, double delta,
                                const std::function<double(std::uint32_t)>& eps_fn) {
    if (!W2.subspace_of(W1)) throw DimensionError("sarl_pair_check: W2 must be <= W1");
    PairCheckReport rep;
    rep.epsilon = eps_fn(W1.codim());
    UniformityReport ur = regularity_check(f, W2, rep.epsilon);
    rep.bad_fraction = ur.bad_fraction;
    rep.regular_ok = ur.regular;
    Spectrum spec = full_spectrum(f);
    rep.energy_w1 = subspace_energy(spec, W1);
    rep.energy_w2 = subspace_energy(spec, W2);
    rep.gap = rep.energy_w2 - rep.energy_w1;
    rep.gap_ok = rep.gap <= delta + 1e-9;
    rep.pass = rep.regular_ok && rep.gap_ok;
    return rep;
}

}  // namespace regulab
