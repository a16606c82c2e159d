// regulab command line: build instances, inspect spectra, run the verifier
// suite and the quadratic regularity decomposition, persist every artifact.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "regulab/construction.hpp"
#include "regulab/energy.hpp"
#include "regulab/io.hpp"
#include "regulab/qarl.hpp"
#include "regulab/quadratic.hpp"

using namespace regulab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 3;

constexpr const char* kVersion = "0.1.0";

// {0}^k x F_p^(n-k), the chain's coordinate subspace of codimension k
Subspace chain_subspace(std::uint32_t p, std::uint32_t n, std::uint32_t codim) {
    if (codim > n) throw DimensionError("codim exceeds n");
    return Subspace::coordinate_window(p, n, codim, n - codim);
}

std::string fmt(double v) { return to_hexfloat(v); }

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void emit_manifest(const std::string& path, const std::string& command,
                   std::uint64_t seed,
                   std::vector<std::pair<std::string, std::string>> params,
                   std::vector<std::string> inputs, std::vector<std::string> outputs,
                   const Timer& timer) {
    RunManifest m;
    m.command = command;
    m.seed = seed;
    m.params = std::move(params);
    m.inputs = std::move(inputs);
    m.outputs = std::move(outputs);
    m.outputs.push_back(path);
    m.version = kVersion;
    m.wall_clock_s = timer.seconds();
    save_manifest(m, path);
}

// ---- construct ----------------------------------------------------------

struct ConstructArgs {
    std::uint32_t p = 2;
    std::uint32_t n = 6;
    std::uint64_t seed = 0;
    std::vector<double> weights;
    std::string preset;
    double eps = 0.0;
    std::string out = "instance";
};

int cmd_construct(const ConstructArgs& a) {
    Timer timer;
    std::vector<double> weights = a.weights;
    if (!a.preset.empty()) {
        if (a.preset != "hlms") throw DimensionError("unknown preset: " + a.preset);
        if (a.eps <= 0.0) throw DimensionError("--preset hlms needs --eps > 0");
        weights = hlms_weights(a.p, a.eps);
    }
    if (weights.empty()) throw DimensionError("give --weights or --preset hlms --eps");

    Instance inst = build_instance(a.p, a.n, weights, a.seed);
    std::string json_path = a.out + ".json";
    std::string bin_path = a.out + ".fpfn";
    save_instance(inst, json_path, bin_path);

    std::printf("p=%u n=%u s=%u seed=%llu\n", inst.p, inst.n, inst.s,
                static_cast<unsigned long long>(inst.seed));
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        double density = static_cast<double>(inst.layer_labels[i - 1].size()) /
                         static_cast<double>(checked_pow(inst.p, static_cast<std::uint32_t>(inst.D[i - 1])));
        std::printf("  layer %u: d=%llu D=%llu |A|/p^D=%s weight=%s\n", i,
                    static_cast<unsigned long long>(inst.d[i - 1]),
                    static_cast<unsigned long long>(inst.D[i - 1]), fmt(density).c_str(),
                    fmt(inst.weights[i - 1]).c_str());
    }
    std::printf("digest %s\n", density_digest(inst.f).c_str());

    std::vector<std::pair<std::string, std::string>> params = {
        {"p", std::to_string(a.p)}, {"n", std::to_string(a.n)}};
    for (double w : weights) params.emplace_back("weight", fmt(w));
    emit_manifest(a.out + ".manifest.json", "construct", a.seed, std::move(params), {},
                  {json_path, bin_path}, timer);
    return kExitPass;
}

// ---- spectrum -----------------------------------------------------------

struct SpectrumArgs {
    std::string in;
    std::size_t top = 10;
    std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
    DensityFunction f = load_density(a.in);
    Spectrum sp = full_spectrum(f);
    std::vector<std::uint64_t> order(f.size());
    for (std::uint64_t r = 0; r < f.size(); ++r) order[r] = r;
    std::stable_sort(order.begin(), order.end(), [&](std::uint64_t x, std::uint64_t y) {
        return std::abs(sp.coeffs[x]) > std::abs(sp.coeffs[y]);
    });

    Report rep;
    rep.proposition = "spectrum";
    rep.instance_digest = density_digest(f);
    rep.pass = true;
    std::size_t top = std::min<std::size_t>(a.top, order.size());
    for (std::size_t k = 0; k < top; ++k) {
        std::uint64_t r = order[k];
        double mag = std::abs(sp.coeffs[r]);
        std::printf("r=%s |f_hat|=%s\n",
                    FieldVector::from_index(f.p(), f.n(), r).str().c_str(),
                    fmt(mag).c_str());
        rep.witnesses.emplace_back("r=" + std::to_string(r), fmt(mag));
    }
    if (!a.out.empty()) save_report(rep, a.out);
    return kExitPass;
}

// ---- regularity ---------------------------------------------------------

struct RegularityArgs {
    std::string in;
    std::uint32_t codim = 0;
    double eps = 0.1;
    std::string out;
};

int cmd_regularity(const RegularityArgs& a) {
    DensityFunction f = load_density(a.in);
    Subspace H = chain_subspace(f.p(), f.n(), a.codim);
    UniformityReport rep = regularity_check(f, H, a.eps);
    std::printf("codim=%u eps=%s bad=%zu/%llu fraction=%s regular=%s\n", a.codim,
                fmt(a.eps).c_str(), rep.bad_cosets.size(),
                static_cast<unsigned long long>(rep.total_cosets),
                fmt(rep.bad_fraction).c_str(), rep.regular ? "yes" : "no");
    if (!a.out.empty()) {
        Report r;
        r.proposition = "coset-regularity";
        r.instance_digest = density_digest(f);
        r.witnesses = {{"codim", std::to_string(a.codim)},
                       {"eps", fmt(a.eps)},
                       {"bad_fraction", fmt(rep.bad_fraction)}};
        for (const auto& b : rep.bad_cosets)
            r.witnesses.emplace_back("bad_coset " + b.rep.str(), fmt(b.bias));
        r.pass = rep.regular;
        save_report(r, a.out);
    }
    return rep.regular ? kExitPass : kExitFail;
}

// ---- energy -------------------------------------------------------------

struct EnergyArgs {
    std::string in;
    std::uint32_t codim = 0;
    std::optional<std::uint32_t> codim2;
    std::string out;
};

int cmd_energy(const EnergyArgs& a) {
    DensityFunction f = load_density(a.in);
    PartitionView P = PartitionView::from_subspace(chain_subspace(f.p(), f.n(), a.codim));
    double e1 = energy(f, P).energy;
    std::printf("E(codim %u) = %s\n", a.codim, fmt(e1).c_str());
    Report r;
    r.proposition = "partition-energy";
    r.instance_digest = density_digest(f);
    r.witnesses = {{"energy_codim_" + std::to_string(a.codim), fmt(e1)}};
    r.pass = true;
    if (a.codim2) {
        if (*a.codim2 < a.codim) throw DimensionError("--codim2 must refine --codim");
        PartitionView Q = PartitionView::from_subspace(chain_subspace(f.p(), f.n(), *a.codim2));
        PythagorasReport py = energy_property_suite(f, P, Q);
        std::printf("E(codim %u) = %s gap = %s (pythagoras residual %s)\n", *a.codim2,
                    fmt(py.energy_fine).c_str(), fmt(py.gap).c_str(),
                    fmt(py.gap - py.l2_diff_sq).c_str());
        r.witnesses.emplace_back("energy_codim_" + std::to_string(*a.codim2),
                                 fmt(py.energy_fine));
        r.witnesses.emplace_back("gap", fmt(py.gap));
        r.pass = py.pass;
    }
    if (!a.out.empty()) save_report(r, a.out);
    return r.pass ? kExitPass : kExitFail;
}

// ---- verify -------------------------------------------------------------

struct VerifyArgs {
    std::string instance;
    std::string which;
    std::uint32_t p = 2;  // for which=schedule without an instance
    double delta = 0.25;
    std::uint64_t c = 320;
    std::string out;
};

int verify_prop_bias(const Instance& inst, Report& rep) {
    bool pass = true;
    for (std::uint32_t i = 0; i < inst.s; ++i) {
        LargeBiasReport b = verify_large_bias(inst, inst.H(i));
        std::printf("W=H_%u layer=%u bad=%llu/%llu threshold=%s pass=%s\n", i, b.layer,
                    static_cast<unsigned long long>(b.bad),
                    static_cast<unsigned long long>(b.total),
                    fmt(b.fraction_threshold).c_str(), b.pass ? "yes" : "no");
        rep.witnesses.emplace_back("H_" + std::to_string(i) + " bad_fraction",
                                   fmt(b.fraction));
        pass = pass && b.pass;
    }
    for (std::uint32_t i = 1; i <= inst.s; ++i)
        for (const Subspace& W : adversarial_subspaces(inst, i)) {
            LargeBiasReport b = verify_large_bias(inst, W);
            if (b.fully_regular) continue;
            rep.witnesses.emplace_back("adversarial codim " + std::to_string(W.codim()) +
                                           " layer " + std::to_string(b.layer),
                                       fmt(b.fraction));
            pass = pass && b.pass;
        }
    return pass ? kExitPass : kExitFail;
}

int verify_claim(const Instance& inst, Report& rep) {
    bool pass = true;
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        std::uint64_t labels = i >= 2
            ? checked_pow(inst.p, static_cast<std::uint32_t>(inst.D[i - 2]))
            : 1;
        double worst = 0.0;
        for (std::uint64_t u = 0; u < labels; ++u) {
            std::uint32_t Dprev = i >= 2 ? static_cast<std::uint32_t>(inst.D[i - 2]) : 0;
            FieldVector uvec = FieldVector::from_index(inst.p, inst.n, 0);
            {
                FieldVector coords = FieldVector::from_index(inst.p, Dprev, u);
                std::vector<std::uint8_t> full(inst.n, 0);
                for (std::uint32_t k = 0; k < Dprev; ++k) full[k] = coords[k];
                uvec = FieldVector(inst.p, std::move(full));
            }
            ClaimReport c = claim_mean_check(inst, i, uvec);
            if (!c.admissible) {
                pass = false;
                continue;
            }
            worst = std::max(worst, std::abs(c.value - std::complex<double>(c.expected, 0)));
        }
        std::printf("layer %u: max |mean - w_i/p| = %s over %llu labels\n", i,
                    fmt(worst).c_str(), static_cast<unsigned long long>(labels));
        rep.witnesses.emplace_back("layer " + std::to_string(i) + " max_dev", fmt(worst));
        pass = pass && worst <= 1e-9;
    }
    return pass ? kExitPass : kExitFail;
}

int verify_energy_mid(const Instance& inst, Report& rep) {
    bool pass = true;
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        EnergyGapReport g = verify_energy_middle(inst, i);
        std::printf("layer %u: gap=%s bound=%s pass=%s\n", i, fmt(g.gap).c_str(),
                    fmt(g.bound).c_str(), g.pass ? "yes" : "no");
        rep.witnesses.emplace_back("layer " + std::to_string(i) + " gap", fmt(g.gap));
        pass = pass && g.pass;
    }
    return pass ? kExitPass : kExitFail;
}

int verify_energy_first(const Instance& inst, Report& rep) {
    bool pass = true;
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        EnergyStartReport r = verify_energy_start(inst, i, adversarial_subspaces(inst, i));
        std::printf("layer %u: E(H_i)=%s bound=+%s candidates=%llu pass=%s\n", i,
                    fmt(r.energy_Hi).c_str(), fmt(r.bound).c_str(),
                    static_cast<unsigned long long>(r.checked), r.pass ? "yes" : "no");
        rep.witnesses.emplace_back("layer " + std::to_string(i) + " candidates",
                                   std::to_string(r.checked));
        if (!r.pass && !r.violations.empty())
            rep.witnesses.emplace_back("layer " + std::to_string(i) + " violation energy",
                                       fmt(r.violations.front().energy));
        pass = pass && r.pass;
    }
    return pass ? kExitPass : kExitFail;
}

int verify_pairs(const Instance& inst, double delta, std::uint64_t c, Report& rep) {
    auto eps_fn = [delta, c](std::uint32_t d) {
        return std::sqrt(delta) / (static_cast<double>(c) * (d + 1));
    };
    bool pass = true;
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        PairCheckReport r = sarl_pair_check(inst.f, inst.H(i - 1), inst.H(i), delta, eps_fn);
        std::printf("pair (H_%u, H_%u): eps=%s regular=%s gap=%s gap_ok=%s\n", i - 1, i,
                    fmt(r.epsilon).c_str(), r.regular_ok ? "yes" : "no", fmt(r.gap).c_str(),
                    r.gap_ok ? "yes" : "no");
        rep.witnesses.emplace_back("pair " + std::to_string(i) + " gap", fmt(r.gap));
        pass = pass && r.pass;
    }
    return pass ? kExitPass : kExitFail;
}

int verify_schedule(std::uint32_t p, double delta, std::uint64_t c, Report& rep) {
    SarlSchedule s = sarl_schedule(p, delta, c);
    std::printf("p=%u delta=%s c=%llu t=%u%s\n", p, fmt(delta).c_str(),
                static_cast<unsigned long long>(c), s.t,
                s.degenerate ? " (degenerate)" : "");
    for (std::size_t i = 0; i < s.h.size(); ++i)
        std::printf("  h_%zu = %s\n", i + 1, s.h[i].str().c_str());
    std::printf("  weight bound %s (<= 1: %s)\n", fmt(s.weight_sum_bound).c_str(),
                s.weight_sum_ok ? "yes" : "no");
    rep.witnesses.emplace_back("t", std::to_string(s.t));
    if (!s.h.empty()) rep.witnesses.emplace_back("h_1", s.h.front().str());
    rep.witnesses.emplace_back("weight_sum_bound", fmt(s.weight_sum_bound));

    TowerReport t = tower_lower_bound(p, delta, c);
    for (const auto& step : t.steps)
        std::printf("  %s: %s\n", step.what.c_str(), tower_cmp_name(step.cmp));
    std::printf("verdict: F(%zu) vs wwz(%u): %s\n", t.F.size() - 1, t.t,
                tower_cmp_name(t.final_verdict));
    rep.witnesses.emplace_back("tower_verdict", tower_cmp_name(t.final_verdict));
    return (s.valid && t.all_verified) ? kExitPass : kExitFail;
}

int cmd_verify(const VerifyArgs& a) {
    Report rep;
    rep.proposition = "verify-" + a.which;
    int rc;
    if (a.which == "schedule") {
        std::uint32_t p = a.p;
        if (!a.instance.empty()) p = load_instance(a.instance).p;
        rc = verify_schedule(p, a.delta, a.c, rep);
    } else {
        if (a.instance.empty()) throw DimensionError("--instance required for " + a.which);
        Instance inst = load_instance(a.instance);
        rep.instance_digest = density_digest(inst.f);
        if (a.which == "prop24")
            rc = verify_prop_bias(inst, rep);
        else if (a.which == "claim")
            rc = verify_claim(inst, rep);
        else if (a.which == "energy-middle")
            rc = verify_energy_mid(inst, rep);
        else if (a.which == "energy-start")
            rc = verify_energy_first(inst, rep);
        else if (a.which == "sarl-pair")
            rc = verify_pairs(inst, a.delta, a.c, rep);
        else
            throw DimensionError("unknown check: " + a.which);
    }
    rep.pass = rc == kExitPass;
    if (!a.out.empty()) save_report(rep, a.out);
    std::printf("%s: %s\n", a.which.c_str(), rep.pass ? "PASS" : "FAIL");
    return rc;
}

// ---- qarl ---------------------------------------------------------------

struct QarlArgs {
    std::string in;
    double delta = 0.3;
    std::string preset = "paper-min";
    double omega_scale = 1.0;
    double rank_scale = 1.0;
    std::uint32_t max_inner = 1000;
    std::uint32_t max_outer = 0;
    unsigned jobs = 1;
    bool check_linear_layer = false;
    std::string out = "qarl";
};

int cmd_qarl(const QarlArgs& a) {
    Timer timer;
    if (a.preset != "paper-min") throw DimensionError("unknown preset: " + a.preset);
    DensityFunction f = load_density(a.in);
    std::uint32_t p = f.p();
    double delta = a.delta;

    QarlConfig cfg;
    cfg.delta = delta;
    cfg.omega = [p, delta, scale = a.omega_scale](std::uint32_t d) {
        return scale * std::pow(delta, -2.0 / 3.0) * std::pow(double(p), double(d));
    };
    cfg.R = [p, delta, scale = a.rank_scale](std::uint32_t d) {
        double shift = std::ceil(std::log(std::cbrt(delta)) / std::log(double(p)));
        return std::max(2.0 * (d + 1), scale * 2.0 * (d + 1 + shift));
    };
    cfg.max_inner = a.max_inner;
    cfg.max_outer = a.max_outer;
    cfg.jobs = a.jobs;

    QarlResult res = run_qarl(f, cfg);
    std::string factor_path = a.out + ".factor.json";
    std::string err_path = a.out + ".ferr.fpfn";
    std::string trace_path = a.out + ".trace.jsonl";
    save_factor(res.factor, factor_path);
    save_density(err_path, res.f_err);
    save_trace(res.trace, trace_path);

    Report rep;
    rep.proposition = "qarl";
    rep.instance_digest = density_digest(f);
    rep.witnesses = {{"success", res.success ? "true" : "false"},
                     {"outer_steps", std::to_string(res.outer_steps)},
                     {"D", std::to_string(res.factor.D())},
                     {"l2_err", fmt(res.recheck.l2_err)},
                     {"u3_residual", fmt(res.recheck.u3)},
                     {"recheck", res.recheck.pass ? "pass" : "fail"}};
    rep.pass = res.success && res.recheck.pass;

    std::printf("success=%s outer=%u D=%u l2_err=%s recheck=%s\n",
                res.success ? "yes" : "no", res.outer_steps, res.factor.D(),
                fmt(res.recheck.l2_err).c_str(), res.recheck.pass ? "pass" : "fail");

    if (a.check_linear_layer && res.success) {
        LinearRegReport lr = linear_layer_regularity(f, res.factor, delta);
        std::printf("linear layer: hypotheses=%s eps=%s regular=%s\n",
                    lr.hypotheses_ok ? "yes" : "no", fmt(lr.eps).c_str(),
                    lr.pass ? "yes" : "no");
        rep.witnesses.emplace_back("linear_layer_eps", fmt(lr.eps));
        rep.witnesses.emplace_back("linear_layer", lr.pass ? "pass" : "fail");
        if (lr.hypotheses_ok) rep.pass = rep.pass && lr.pass;
    }

    std::string report_path = a.out + ".report.json";
    save_report(rep, report_path);
    emit_manifest(a.out + ".manifest.json", "qarl", 0,
                  {{"delta", fmt(delta)},
                   {"preset", a.preset},
                   {"omega_scale", fmt(a.omega_scale)},
                   {"rank_scale", fmt(a.rank_scale)},
                   {"jobs", std::to_string(a.jobs)}},
                  {a.in}, {factor_path, err_path, trace_path, report_path}, timer);

    if (!res.success) return kExitResource;  // iteration budget exhausted
    return rep.pass ? kExitPass : kExitFail;
}

// ---- schedule -----------------------------------------------------------

struct ScheduleArgs {
    std::uint32_t p = 2;
    std::uint32_t s = 4;
};

int cmd_schedule(const ScheduleArgs& a) {
    try {
        DimensionSchedule sch = dimension_schedule(a.p, a.s);
        for (std::uint32_t i = 1; i <= a.s; ++i) {
            std::ostringstream os;
            os << sch.D[i - 1];
            std::printf("D_%u = %s\n", i, os.str().c_str());
        }
    } catch (const BudgetError&) {
        // too large to write out exactly; report the symbolic bound instead
        for (std::uint32_t i = 1; i <= a.s; ++i) {
            TowerInt D = schedule_D_at(a.p, TowerInt::exact(BigInt(i)));
            std::printf("D_%u = %s\n", i, D.str().c_str());
        }
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact additive-combinatorics lab over F_p^n"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "build a layered hyperplane instance");
    construct->add_option("--p", ca.p, "field characteristic")->required();
    construct->add_option("--n", ca.n, "ambient dimension")->required();
    construct->add_option("--seed", ca.seed, "sampler seed");
    construct->add_option("--weights", ca.weights, "layer weights w_1..w_s");
    construct->add_option("--preset", ca.preset, "weight preset (hlms)");
    construct->add_option("--eps", ca.eps, "regularity parameter for --preset hlms");
    construct->add_option("--out", ca.out, "output path prefix");

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "largest Fourier coefficients");
    spectrum->add_option("--in", sa.in, "density table (.fpfn)")->required();
    spectrum->add_option("--top", sa.top, "how many to print");
    spectrum->add_option("--out", sa.out, "report JSON path");

    RegularityArgs ra;
    auto* regularity = app.add_subcommand("regularity", "coset uniformity check");
    regularity->add_option("--in", ra.in, "density table (.fpfn)")->required();
    regularity->add_option("--codim", ra.codim, "codimension of the coordinate subspace")->required();
    regularity->add_option("--eps", ra.eps, "uniformity threshold");
    regularity->add_option("--out", ra.out, "report JSON path");

    EnergyArgs ea;
    auto* energy_cmd = app.add_subcommand("energy", "partition energy and refinement gap");
    energy_cmd->add_option("--in", ea.in, "density table (.fpfn)")->required();
    energy_cmd->add_option("--codim", ea.codim, "coarse codimension")->required();
    energy_cmd->add_option("--codim2", ea.codim2, "fine codimension (optional)");
    energy_cmd->add_option("--out", ea.out, "report JSON path");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run a verifier on a stored instance");
    verify->add_option("--instance", va.instance, "instance manifest (.json)");
    verify->add_option("--which", va.which,
                       "prop24|claim|energy-middle|energy-start|sarl-pair|schedule")
        ->required();
    verify->add_option("--p", va.p, "characteristic (which=schedule without instance)");
    verify->add_option("--delta", va.delta, "energy-gap budget");
    verify->add_option("--c", va.c, "epsilon-schedule constant (>= 80 p^2)");
    verify->add_option("--out", va.out, "report JSON path");

    QarlArgs qa;
    auto* qarl = app.add_subcommand("qarl", "quadratic arithmetic regularity decomposition");
    qarl->add_option("--in", qa.in, "density table (.fpfn)")->required();
    qarl->add_option("--delta", qa.delta, "target L2 error");
    qarl->add_option("--preset", qa.preset, "growth-function preset (paper-min)");
    qarl->add_option("--omega-scale", qa.omega_scale, "scale the uniformity growth function");
    qarl->add_option("--rank-scale", qa.rank_scale, "scale the rank requirement");
    qarl->add_option("--max-inner", qa.max_inner, "inner iteration budget");
    qarl->add_option("--max-outer", qa.max_outer, "outer iteration budget (0: ceil(delta^-2))");
    qarl->add_option("--jobs", qa.jobs, "worker threads for the bias sweeps");
    qarl->add_flag("--check-linear-layer", qa.check_linear_layer,
                   "also check the linear layer's coset regularity");
    qarl->add_option("--out", qa.out, "output path prefix");

    ScheduleArgs sca;
    auto* schedule = app.add_subcommand("schedule", "print the dimension schedule");
    schedule->add_option("--p", sca.p, "field characteristic")->required();
    schedule->add_option("--s", sca.s, "number of layers")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*construct) return cmd_construct(ca);
        if (*spectrum) return cmd_spectrum(sa);
        if (*regularity) return cmd_regularity(ra);
        if (*energy_cmd) return cmd_energy(ea);
        if (*verify) return cmd_verify(va);
        if (*qarl) return cmd_qarl(qa);
        if (*schedule) return cmd_schedule(sca);
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return kExitResource;
    } catch (const InvariantError& e) {
        std::fprintf(stderr, "assertion failed: %s\n", e.what());
        return kExitFail;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
