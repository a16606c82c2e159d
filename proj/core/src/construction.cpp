#include "regulab/construction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace regulab {

namespace {
std::uint32_t ceil_log2_u64(std::uint64_t k) {
    std::uint32_t b = 0;
    std::uint64_t v = 1;
    while (v < k) {
        v <<= 1;
        ++b;
    }
    return b;
}
}  // namespace

std::vector<std::uint64_t> DimensionSchedule::D_small() const {
    std::vector<std::uint64_t> out;
    for (const auto& v : D) {
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw BudgetError("DimensionSchedule::D_small: D exceeds uint64");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

std::vector<std::uint64_t> DimensionSchedule::d_small() const {
    std::vector<std::uint64_t> out;
    for (const auto& v : d) {
        if (v > std::numeric_limits<std::uint64_t>::max())
            throw BudgetError("DimensionSchedule::d_small: d exceeds uint64");
        out.push_back(static_cast<std::uint64_t>(v));
    }
    return out;
}

DimensionSchedule dimension_schedule(std::uint32_t p, std::uint32_t s) {
    if (s < 1) throw DimensionError("dimension_schedule: s >= 1 required");
    DimensionSchedule sch;
    sch.p = p;
    sch.s = s;
    sch.d.push_back(1);
    sch.D.push_back(1);
    if (s >= 2) {
        sch.d.push_back(2);
        sch.D.push_back(3);
    }
    const BigInt max_exp = BigInt(1) << 22;  // keep numbers materializable
    for (std::uint32_t j = 2; j < s; ++j) {
        BigInt exp = sch.D[j - 1] - 3;
        if (exp * ceil_log2_u64(p) > max_exp)
            throw BudgetError("dimension_schedule: D too large to materialize at i=" +
                              std::to_string(j + 1));
        BigInt dj = 1;
        // p^exp by squaring
        BigInt base = p, e = exp;
        while (e > 0) {
            if ((e & 1) != 0) dj *= base;
            base *= base;
            e >>= 1;
        }
        sch.d.push_back(dj);
        sch.D.push_back(sch.D[j - 1] + dj);
    }
    return sch;
}

TowerInt schedule_D_at(std::uint32_t p, const TowerInt& m) {
    if (auto v = m.eval(); v && *v <= 4096) {
        std::uint64_t idx = static_cast<std::uint64_t>(*v);
        if (idx == 0) return TowerInt::exact(0);
        TowerInt D = TowerInt::exact(1);
        if (idx >= 2) D = TowerInt::exact(3);
        for (std::uint64_t j = 3; j <= idx; ++j)
            D = tower_add(D, tower_pow(p, D.sub(3)));
        return D;
    }
    // D_m >= twr(m - 5) for m >= 5 (the recurrence gains one exponential per
    // step once D_j - 3 >= D_j / 2)
    return TowerInt::interval(TowerExpr::twr(TowerInt(m).sub(5).lo()), std::nullopt);
}

SpanningCheck verify_spanning(const std::vector<FieldVector>& tuple, const Subspace& V) {
    SpanningCheck chk;
    chk.tuple_size = tuple.size();
    if (tuple.empty()) return chk;
    std::uint32_t p = V.p();
    std::uint32_t dim = V.dim();
    if (dim == 0) throw DimensionError("verify_spanning: V must be nonzero");

    // coordinates of each tuple vector in V's RREF basis
    std::vector<FieldVector> coords;
    coords.reserve(tuple.size());
    for (const auto& v : tuple) {
        if (!V.contains(v)) throw DimensionError("verify_spanning: vector outside V");
        FieldVector c(p, dim);
        for (std::uint32_t i = 0; i < dim; ++i) c[i] = v[V.pivots()[i]];
        coords.push_back(std::move(c));
    }

    // hyperplanes of V <-> normals in F_p^dim up to scalar (leading coeff 1)
    std::uint64_t total = checked_pow(p, dim);
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        FieldVector phi = FieldVector::from_index(p, dim, idx);
        std::uint32_t lead = 0;
        while (phi[lead] == 0) ++lead;
        if (phi[lead] != 1) continue;  // one representative per class
        std::uint64_t count = 0;
        for (const auto& c : coords)
            if (phi.dot(c) == 0) ++count;
        chk.max_hyperplane_count = std::max(chk.max_hyperplane_count, count);
    }
    chk.ok = 4 * chk.max_hyperplane_count < 3 * chk.tuple_size;
    return chk;
}

std::vector<FieldVector> sample_spanning_vectors(const Subspace& V, std::uint64_t count,
                                                 CounterRng& rng, std::uint32_t max_retries,
                                                 std::uint32_t* retries_used) {
    std::uint32_t p = V.p();
    std::uint64_t nonzero = checked_pow(p, V.dim()) - 1;
    if (nonzero == 0) throw DimensionError("sample_spanning_vectors: V is zero");
    for (std::uint32_t attempt = 0; attempt <= max_retries; ++attempt) {
        std::vector<FieldVector> tuple;
        tuple.reserve(count);
        for (std::uint64_t k = 0; k < count; ++k) {
            std::uint64_t idx = rng.below(nonzero) + 1;
            FieldVector digits = FieldVector::from_index(p, V.dim(), idx);
            FieldVector v(p, V.n());
            for (std::uint32_t i = 0; i < V.dim(); ++i)
                if (digits[i]) v = v + V.basis()[i] * digits[i];
            tuple.push_back(std::move(v));
        }
        if (verify_spanning(tuple, V).ok) {
            if (retries_used) *retries_used = attempt;
            return tuple;
        }
    }
    throw InvariantError("sample_spanning_vectors: retries exhausted");
}

SpanningTuple sample_spanning_tuple(std::uint32_t p, std::uint32_t i,
                                    const std::vector<std::uint64_t>& D,
                                    std::uint32_t ambient_n, std::uint64_t seed) {
    if (i < 1 || i > D.size()) throw DimensionError("sample_spanning_tuple: bad layer");
    SpanningTuple t;
    t.layer = i;
    if (i == 1) {
        t.vectors.push_back(FieldVector::unit(p, ambient_n, 0));
        return t;
    }
    if (i == 2) {
        for (std::uint32_t m = 0; m < p; ++m) {
            FieldVector v = FieldVector::unit(p, ambient_n, 1) +
                            FieldVector::unit(p, ambient_n, 2) * m;
            t.vectors.push_back(std::move(v));
        }
        return t;
    }
    std::uint64_t prev_D = D[i - 2];
    std::uint64_t cur_D = D[i - 1];
    Subspace V = Subspace::coordinate_window(p, ambient_n,
                                             static_cast<std::uint32_t>(prev_D),
                                             static_cast<std::uint32_t>(cur_D - prev_D));
    std::uint64_t count = require_budget(p, static_cast<std::uint32_t>(prev_D),
                                         "sample_spanning_tuple");
    CounterRng rng(seed, i);
    t.vectors = sample_spanning_vectors(V, count, rng);
    return t;
}

Subspace Instance::H(std::uint32_t i) const {
    if (i == 0) return Subspace::full(p, n);
    if (i > s) throw DimensionError("Instance::H: layer out of range");
    std::uint32_t Di = static_cast<std::uint32_t>(D[i - 1]);
    return Subspace::coordinate_window(p, n, Di, n - Di);
}

Subspace Instance::U(std::uint32_t i) const {
    if (i == 0) return Subspace(p, n);
    if (i > s) throw DimensionError("Instance::U: layer out of range");
    return Subspace::coordinate_window(p, n, 0, static_cast<std::uint32_t>(D[i - 1]));
}

const FieldVector& Instance::xi(std::uint32_t i, std::uint64_t u_label) const {
    return tuples.at(i - 1).vectors.at(u_label);
}

bool Instance::in_layer(std::uint32_t i, const FieldVector& x) const {
    std::uint64_t prev_size = i >= 2 ? checked_pow(p, static_cast<std::uint32_t>(D[i - 2])) : 1;
    std::uint64_t u_label = x.to_index() % prev_size;
    return xi(i, u_label).dot(x) == 0;
}

Instance build_instance(std::uint32_t p, std::uint32_t n, std::vector<double> weights,
                        std::uint64_t seed) {
    Instance inst;
    inst.p = p;
    inst.n = n;
    inst.s = static_cast<std::uint32_t>(weights.size());
    inst.weights = std::move(weights);
    inst.seed = seed;
    std::uint64_t size = require_budget(p, n, "build_instance");

    double wsum = 0.0;
    for (double w : inst.weights) {
        if (w < 0.0) throw DimensionError("build_instance: negative weight");
        wsum += w;
    }
    if (wsum > 1.0 + 1e-12) throw DimensionError("build_instance: weights sum > 1");

    if (inst.s == 0) {
        inst.f = DensityFunction(p, n);
        return inst;
    }

    DimensionSchedule sch = dimension_schedule(p, inst.s);
    inst.D = sch.D_small();
    inst.d = sch.d_small();
    if (inst.D.back() > n) throw DimensionError("build_instance: n < D_s");

    for (std::uint32_t i = 1; i <= inst.s; ++i)
        inst.tuples.push_back(sample_spanning_tuple(p, i, inst.D, n, seed));

    // A_i as H_i-coset labels: label v (index over first D_i coords) is in
    // A_i iff xi^{(i)}_{v mod p^{D_{i-1}}} . v = 0
    std::vector<std::vector<char>> member(inst.s);
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        std::uint32_t Di = static_cast<std::uint32_t>(inst.D[i - 1]);
        std::uint64_t label_count = checked_pow(p, Di);
        std::uint64_t prev_size = i >= 2 ? checked_pow(p, static_cast<std::uint32_t>(inst.D[i - 2])) : 1;
        member[i - 1].assign(label_count, 0);
        std::vector<std::uint64_t> labels;
        for (std::uint64_t v = 0; v < label_count; ++v) {
            const FieldVector& xi = inst.tuples[i - 1].vectors[v % prev_size];
            // dot over the first D_i coordinates (xi vanishes beyond D_i anyway)
            std::uint32_t acc = 0;
            std::uint64_t rest = v;
            for (std::uint32_t k = 0; k < Di; ++k) {
                acc += xi[k] * static_cast<std::uint32_t>(rest % p);
                rest /= p;
            }
            if (acc % p == 0) {
                member[i - 1][v] = 1;
                labels.push_back(v);
            }
        }
        if (labels.size() * p != label_count)
            throw InvariantError("build_instance: layer density != 1/p at i=" +
                                 std::to_string(i));
        inst.layer_labels.push_back(std::move(labels));
    }

    DensityFunction f(p, n);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        double v = 0.0;
        for (std::uint32_t i = 1; i <= inst.s; ++i) {
            std::uint64_t label_count = member[i - 1].size();
            if (member[i - 1][idx % label_count]) v += inst.weights[i - 1];
        }
        f[idx] = v;
    }
    inst.f = std::move(f);
    return inst;
}

std::vector<double> hlms_weights(std::uint32_t p, double eps) {
    if (eps <= 0.0) throw DimensionError("hlms_weights: eps must be positive");
    auto s = static_cast<std::uint64_t>(std::floor(1.0 / eps / (8.0 * p) + 1e-9));
    if (s < 1) throw DimensionError("hlms_weights: eps too large (s = 0)");
    return std::vector<double>(s, 8.0 * p * eps);
}

LargeBiasReport verify_large_bias(const Instance& inst, const Subspace& W) {
    LargeBiasReport rep;
    std::uint32_t k = 0;
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        if (W.subspace_of(inst.H(i)))
            k = i;
        else
            break;
    }
    if (k == inst.s) {
        rep.fully_regular = true;
        return rep;
    }
    std::uint32_t i = k + 1;
    rep.layer = i;
    double w = inst.weights[i - 1];
    rep.bias_threshold = w / (2.0 * inst.p);
    rep.fraction_threshold = w / (8.0 * inst.p);
    auto reps = W.coset_reps();
    rep.total = reps.size();
    for (const auto& c : reps) {
        BiasResult b = max_bias_on_coset(inst.f, W, c);
        if (b.value >= rep.bias_threshold - 1e-9) ++rep.bad;
    }
    rep.fraction = static_cast<double>(rep.bad) / static_cast<double>(rep.total);
    rep.pass = rep.fraction >= rep.fraction_threshold - 1e-12;
    return rep;
}

ClaimReport claim_mean_check(const Instance& inst, std::uint32_t i, const FieldVector& u) {
    return claim_mean_check(inst, i, u, inst.H(i - 1));
}

ClaimReport claim_mean_check(const Instance& inst, std::uint32_t i, const FieldVector& u,
                             const Subspace& W) {
    if (i < 1 || i > inst.s) throw DimensionError("claim_mean_check: bad layer");
    std::uint64_t prev_size =
        i >= 2 ? checked_pow(inst.p, static_cast<std::uint32_t>(inst.D[i - 2])) : 1;
    std::uint64_t u_label = u.to_index();
    if (u_label >= prev_size) throw DimensionError("claim_mean_check: u outside U_{i-1}");
    const FieldVector& xi = inst.xi(i, u_label);

    ClaimReport rep;
    rep.expected = inst.weights[i - 1] / inst.p;
    for (const auto& b : W.basis())
        if (xi.dot(b) != 0) rep.admissible = true;
    if (!rep.admissible) return rep;

    // transversal of W inside H_{i-1}: greedily extend W's basis by H_{i-1}'s
    Subspace Hprev = inst.H(i - 1);
    if (!W.subspace_of(Hprev)) throw DimensionError("claim_mean_check: W not<= H_{i-1}");
    Subspace span = W;
    std::vector<FieldVector> tbasis;
    for (const auto& b : Hprev.basis()) {
        if (!span.contains(b)) {
            tbasis.push_back(b);
            std::vector<FieldVector> gens = span.basis();
            gens.push_back(b);
            span = Subspace::span(inst.p, inst.n, gens);
        }
    }
    std::uint64_t tcount = require_budget(inst.p, static_cast<std::uint32_t>(tbasis.size()),
                                          "claim_mean_check");
    std::complex<double> acc = pairwise_csum_indexed(tcount, [&](std::uint64_t t) {
        FieldVector digits = FieldVector::from_index(inst.p, static_cast<std::uint32_t>(tbasis.size()), t);
        FieldVector c = u;
        for (std::uint32_t j = 0; j < tbasis.size(); ++j)
            if (digits[j]) c = c + tbasis[j] * digits[j];
        return coset_fourier(inst.f, W, c, xi, /*balanced=*/false);
    });
    rep.value = acc / static_cast<double>(tcount);
    return rep;
}

SarlSchedule sarl_schedule(std::uint32_t p, double delta, std::uint64_t c) {
    SarlSchedule sch;
    sch.p = p;
    sch.delta = delta;
    sch.c = c;
    sch.valid = true;
    if (!(delta > 0.0 && delta <= 1.0 / (20.0 * p))) {
        sch.messages.push_back("delta outside (0, 1/20p]");
        sch.valid = false;
    }
    if (c < 80ull * p * p) {
        sch.messages.push_back("c < 80 p^2 (eps(0) > sqrt(delta)/80p^2)");
        sch.valid = false;
    }
    if (!sch.valid) return sch;

    double sqrt_delta = std::sqrt(delta);
    sch.t = static_cast<std::uint32_t>(std::floor(std::sqrt(1.0 / delta) / (10.0 * p) + 1e-9));
    if (sch.t == 0) {
        sch.degenerate = true;
        sch.valid = false;
        sch.messages.push_back("degenerate schedule: t = 0");
        return sch;
    }

    sch.h_ok = true;
    TowerInt ten_p = TowerInt::exact(10ull * p);
    TowerInt sum_h = TowerInt::exact(0);
    TowerInt D_prev = TowerInt::exact(0);  // eps_1 = eps(0)
    for (std::uint32_t i = 1; i <= sch.t; ++i) {
        TowerInt h = D_prev.add(1).scale_up(c, 8ull * p);  // floor(c (D+1) / 8p)
        sch.h.push_back(h);
        sch.eps.push_back("sqrt(delta)/(" + std::to_string(c) + "*(1+" + D_prev.str() + "))");
        TowerCmp cmp = compare(h, ten_p);
        if (cmp != TowerCmp::Greater && cmp != TowerCmp::Equal) sch.h_ok = false;
        sum_h = tower_add(sum_h, h);
        if (i < sch.t) {
            TowerInt phi = sum_h.sub(9ull * p);
            sch.phi.push_back(phi);
            D_prev = schedule_D_at(p, phi);
            sch.D_at_phi.push_back(D_prev);
        }
    }
    // sum of weights <= sum_i [8p eps_i h_i + 9p sqrt(delta)] <= t (1 + 9p) sqrt(delta)
    sch.weight_sum_bound = sch.t * (1.0 + 9.0 * p) * sqrt_delta;
    sch.weight_sum_ok = sch.weight_sum_bound <= 1.0 + 1e-12;
    if (!sch.weight_sum_ok) sch.messages.push_back("weight sum certificate exceeds 1");
    if (!sch.h_ok) sch.messages.push_back("h_i >= 10p not verifiable");
    sch.valid = sch.h_ok && sch.weight_sum_ok;
    return sch;
}

const char* tower_cmp_name(TowerCmp c) {
    switch (c) {
        case TowerCmp::Less: return "less";
        case TowerCmp::Equal: return "equal";
        case TowerCmp::Greater: return "greater";
        case TowerCmp::Incomparable: return "incomparable";
    }
    return "?";
}

TowerReport tower_lower_bound(std::uint32_t p, double delta, std::uint64_t c) {
    TowerReport rep;
    rep.t = static_cast<std::uint32_t>(std::floor(std::sqrt(1.0 / delta) / (10.0 * p) + 1e-9));
    if (rep.t < 2) {
        rep.all_verified = false;
        return rep;
    }
    rep.F.push_back(TowerInt::exact(0));
    for (std::uint32_t i = 0; i + 1 < rep.t; ++i) {
        // F(i+1) = twr(floor(c (F(i)+1) / 8p))  [= twr(floor(sqrt(delta)/8p eps(F(i))))]
        TowerInt next = tower_twr(rep.F[i].add(1).scale_up(c, 8ull * p));
        rep.F.push_back(next);
    }

    bool ok = true;
    auto record = [&](std::string what, const TowerInt& lhs, const TowerInt& rhs) {
        TowerVerdict v;
        v.what = std::move(what);
        v.cmp = compare(lhs, rhs);
        v.ok = v.cmp == TowerCmp::Greater || v.cmp == TowerCmp::Equal;
        v.lhs = lhs.str();
        v.rhs = rhs.str();
        ok = ok && v.ok;
        rep.steps.push_back(std::move(v));
    };

    record("F(1) >= twr(10p)", rep.F[1], twr_of(10ull * p));
    for (std::uint32_t i = 0; i + 2 <= rep.t; ++i)
        record("F(" + std::to_string(i + 1) + ") >= wwz(" + std::to_string(i + 2) + ")",
               rep.F[i + 1], wwz_of(i + 2));

    rep.final_verdict = compare(rep.F[rep.t - 1], wwz_of(rep.t));
    rep.all_verified = ok && rep.final_verdict == TowerCmp::Greater;
    return rep;
}

}  // namespace regulab
