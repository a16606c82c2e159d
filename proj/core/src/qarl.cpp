#include "regulab/qarl.hpp"

#include <cmath>
#include <limits>

namespace regulab {

namespace {

Atom full_space_atom(std::uint32_t p, std::uint32_t n) {
    Atom a;
    std::uint64_t size = require_budget(p, n, "inverse_oracle");
    a.points.resize(size);
    for (std::uint64_t x = 0; x < size; ++x) a.points[x] = x;
    return a;
}

double factor_energy(const DensityFunction& f, const QuadraticFactor& B) {
    return energy(f, factor_partition(B)).energy;
}

}  // namespace

InverseResult inverse_oracle(const BalancedFunction& g, double theta, unsigned jobs) {
    InverseResult res;
    QuadBiasReport sweep = u3_small_norm(g, full_space_atom(g.p(), g.n()), jobs);
    res.correlation = sweep.value;
    if (sweep.value < theta) return res;
    res.found = true;
    res.poly = QuadPoly::from_upper_triangle(g.p(), g.n(), sweep.quad_part, sweep.r, 0);
    return res;
}

StepResult energy_increment_step(const DensityFunction& f, const QuadraticFactor& B,
                                 double eta, unsigned jobs) {
    if (f.p() != B.p || f.n() != B.n)
        throw DimensionError("energy_increment_step: mismatched domains");
    StepResult st;
    PartitionView P = factor_partition(B);
    DensityFunction ef = conditional_expectation(f, P);
    BalancedFunction g(f.p(), f.n());
    for (std::uint64_t x = 0; x < f.size(); ++x) g[x] = f[x] - ef[x];
    st.u3 = u3_norm(g);
    st.energy_before = energy(f, P).energy;
    if (st.u3 <= eta) {
        st.done = true;
        return st;
    }
    InverseResult inv = inverse_oracle(g, 0.0, jobs);
    if (!inv.found || inv.correlation <= 0.0)
        throw InvariantError("energy_increment_step: exhaustive oracle found nothing "
                             "despite a nonzero U3 residual");
    st.poly = inv.poly;
    st.correlation = inv.correlation;
    st.refined = B;
    if (st.poly.quad_part_zero())
        st.refined.linear_polys.push_back(st.poly);
    else
        st.refined.quad_polys.push_back(st.poly);
    st.energy_after = factor_energy(f, st.refined);
    if (st.energy_after < st.energy_before + inv.correlation * inv.correlation - 1e-9)
        throw InvariantError("energy_increment_step: energy gain below the "
                             "squared correlation");
    return st;
}

QuadraticFactor rank_refine(const QuadraticFactor& B,
                            const std::function<double(std::uint32_t)>& R) {
    QuadraticFactor cur = B;
    cur.validate();
    for (;;) {
        RankReport rr = factor_rank(cur);
        double target = R(cur.D());
        if (rr.at_least(target)) return cur;

        // witness lambda with rank(M_lambda) < R(D): trade the k-th quadratic
        // for the linear forms spanning M_lambda's row space plus the
        // lambda-combination of the linear parts
        const std::vector<std::uint8_t>& lambda = rr.witness;
        std::uint32_t k = 0;
        while (lambda[k] == 0) ++k;

        std::uint32_t p = cur.p, n = cur.n;
        std::vector<std::vector<std::uint8_t>> M(n, std::vector<std::uint8_t>(n, 0));
        FieldVector blin(p, n);
        std::uint32_t clin = 0;
        for (std::uint32_t i = 0; i < lambda.size(); ++i) {
            if (lambda[i] == 0) continue;
            const QuadPoly& Q = cur.quad_polys[i];
            for (std::uint32_t r = 0; r < n; ++r)
                for (std::uint32_t s = 0; s < n; ++s)
                    M[r][s] = static_cast<std::uint8_t>((M[r][s] + lambda[i] * Q.M[r][s]) % p);
            blin = blin + Q.b * lambda[i];
            clin += lambda[i] * Q.c;
        }
        std::vector<FieldVector> rows;
        for (std::uint32_t r = 0; r < n; ++r) rows.emplace_back(p, std::vector<std::uint8_t>(M[r]));
        Subspace rowspace = Subspace::span(p, n, rows);

        QuadraticFactor next;
        next.p = p;
        next.n = n;
        next.linear_polys = cur.linear_polys;
        for (const auto& b : rowspace.basis()) next.linear_polys.push_back(QuadPoly::linear(b));
        next.linear_polys.push_back(QuadPoly::linear(blin, static_cast<std::uint8_t>(clin % p)));
        for (std::uint32_t i = 0; i < cur.quad_polys.size(); ++i)
            if (i != k) next.quad_polys.push_back(cur.quad_polys[i]);

        if (next.D() > cur.D() + target + 1e-9)
            throw InvariantError("rank_refine: complexity grew beyond D + R(D)");

        // audit: the new factor refines the old one point by point
        std::uint64_t size = require_budget(p, n, "rank_refine audit");
        PartitionView oldP = factor_partition(cur);
        PartitionView newP = factor_partition(next);
        if (!newP.refines(oldP) || size != newP.size())
            throw InvariantError("rank_refine: substitution did not refine the factor");

        cur = std::move(next);
    }
}

TowerInt phi_R_bound(std::uint64_t D,
                     const std::function<std::uint64_t(std::uint64_t)>& R) {
    if (D < 1) throw DimensionError("phi_R_bound: D >= 1 required");
    BigInt x = D;
    for (std::uint64_t i = 0; i + 1 < D; ++i) {
        if (x > std::numeric_limits<std::uint64_t>::max())
            throw BudgetError("phi_R_bound: intermediate exceeds uint64");
        x = BigInt(D) * R(static_cast<std::uint64_t>(x));
    }
    return TowerInt::exact(x);
}

QarlResult run_qarl(const DensityFunction& f, const QarlConfig& cfg) {
    if (!cfg.omega || !cfg.R) throw DimensionError("run_qarl: omega and R required");
    QarlResult res;
    std::uint32_t p = f.p(), n = f.n();
    require_budget(p, 2 * n, "run_qarl U3 norms");
    std::uint32_t max_outer =
        cfg.max_outer ? cfg.max_outer
                      : static_cast<std::uint32_t>(std::ceil(1.0 / (cfg.delta * cfg.delta)));

    QuadraticFactor B;
    B.p = p;
    B.n = n;
    res.f_err = DensityFunction(p, n);
    std::uint32_t step = 0;

    auto record = [&](const char* kind, const QuadraticFactor& F, double e, double u3,
                      double corr, const std::optional<QuadPoly>& poly) {
        QarlTraceEntry t;
        t.step = step++;
        t.kind = kind;
        t.D = F.D();
        RankReport rr = factor_rank(F);
        t.rank_infinite = rr.infinite;
        t.rank = rr.rank;
        t.energy = e;
        t.u3_residual = u3;
        t.correlation = corr;
        t.poly = poly;
        res.trace.push_back(std::move(t));
    };

    double prev_outer_energy = factor_energy(f, B);
    record("start", B, prev_outer_energy, 0.0, 0.0, std::nullopt);
    for (std::uint32_t outer = 0; outer < max_outer; ++outer) {
        double eta = 1.0 / cfg.omega(B.D());

        QuadraticFactor I = B;
        double u3 = 0.0;
        bool inner_ok = false;
        for (std::uint32_t inner = 0; inner < cfg.max_inner; ++inner) {
            StepResult st = energy_increment_step(f, I, eta, cfg.jobs);
            if (st.done) {
                u3 = st.u3;
                inner_ok = true;
                break;
            }
            I = st.refined;
            record("inverse-step", I, st.energy_after, st.u3, st.correlation, st.poly);
        }
        if (!inner_ok) {
            res.factor = I;
            res.outer_steps = outer + 1;
            return res;  // inner budget exhausted, failure flag stays false
        }

        DensityFunction efI = conditional_expectation(f, factor_partition(I));
        DensityFunction efB = conditional_expectation(f, factor_partition(B));
        DensityFunction ferr(p, n);
        for (std::uint64_t x = 0; x < f.size(); ++x) ferr[x] = efI[x] - efB[x];

        if (ferr.l2_norm() < cfg.delta) {
            res.factor = B;
            res.f_err = std::move(ferr);
            res.outer_steps = outer;
            res.success = true;
            record("done", B, factor_energy(f, B), u3, 0.0, std::nullopt);
            res.recheck = qrp_predicate(f, res.factor, res.f_err, cfg.delta, cfg.omega, cfg.R);
            return res;
        }

        QuadraticFactor next = rank_refine(I, cfg.R);
        double e_next = factor_energy(f, next);
        if (e_next < prev_outer_energy + cfg.delta * cfg.delta - 1e-9)
            throw InvariantError("run_qarl: outer step gained less than delta^2");
        record("rank-refine", next, e_next, u3, 0.0, std::nullopt);
        record("outer-restart", next, e_next, 0.0, 0.0, std::nullopt);
        prev_outer_energy = e_next;
        B = std::move(next);
    }
    res.factor = B;
    res.outer_steps = max_outer;
    return res;
}

}  // namespace regulab
