#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "regulab/quadratic.hpp"
#include "regulab/tower.hpp"

namespace regulab {

struct QarlConfig {
    double delta = 0.3;
    std::function<double(std::uint32_t)> omega;  // eta_D = 1/omega(D)
    std::function<double(std::uint32_t)> R;
    std::uint32_t max_inner = 1000;
    std::uint32_t max_outer = 0;  // 0: ceil(delta^-2)
    unsigned jobs = 1;
};

struct InverseResult {
    bool found = false;
    QuadPoly poly;
    double correlation = 0.0;  // |E_x g(x) e_p(poly(x))|, the exhaustive max
};

// Exhaustive degree-<=2 correlation maximizer: quadratic parts swept,
// linear parts maximized spectrally, lexicographic tie-breaks.  Returns the
// maximizer when its correlation >= theta.
InverseResult inverse_oracle(const BalancedFunction& g, double theta, unsigned jobs = 1);

struct StepResult {
    bool done = false;           // ||f - E(f|B)||_{U3} <= eta
    double u3 = 0.0;
    QuadraticFactor refined;     // B with the found polynomial appended
    QuadPoly poly;
    double correlation = 0.0;
    double energy_before = 0.0;
    double energy_after = 0.0;   // >= energy_before + correlation^2 - 1e-9
};

StepResult energy_increment_step(const DensityFunction& f, const QuadraticFactor& B,
                                 double eta, unsigned jobs = 1);

// Repeatedly trades one low-rank quadratic for linear polynomials until
// rank(B) >= R(D(B)); each step is audited to refine the previous factor
// and obeys D' <= D + R(D).
QuadraticFactor rank_refine(const QuadraticFactor& B,
                            const std::function<double(std::uint32_t)>& R);

// (DR)(x) = D*R(x) iterated D-1 times, applied to D; the worst-case
// complexity of rank_refine's fixpoint.
TowerInt phi_R_bound(std::uint64_t D,
                     const std::function<std::uint64_t(std::uint64_t)>& R);

struct QarlTraceEntry {
    std::uint32_t step = 0;
    std::string kind;  // start | inverse-step | rank-refine | outer-restart | done
    std::uint32_t D = 0;
    bool rank_infinite = false;
    std::uint32_t rank = 0;
    double energy = 0.0;
    double u3_residual = 0.0;
    double correlation = 0.0;
    std::optional<QuadPoly> poly;
};

struct QarlResult {
    bool success = false;
    QuadraticFactor factor;
    DensityFunction f_err;
    std::vector<QarlTraceEntry> trace;
    std::uint32_t outer_steps = 0;
    QrpReport recheck;  // independent Def-4.2 re-check on the output
};

QarlResult run_qarl(const DensityFunction& f, const QarlConfig& cfg);

}  // namespace regulab
