#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "regulab/construction.hpp"
#include "regulab/field_space.hpp"
#include "regulab/fourier.hpp"

namespace regulab {

// Partition of F_p^n: either the coset partition of a subspace or an
// explicit assignment of points to cells.
class PartitionView {
  public:
    static PartitionView from_subspace(const Subspace& H);
    // labels[x] = cell id of point x; ids must be 0..k-1, all nonempty
    static PartitionView from_labels(std::uint32_t p, std::uint32_t n,
                                     std::vector<std::uint32_t> labels);
    static PartitionView singletons(std::uint32_t p, std::uint32_t n);
    static PartitionView trivial(std::uint32_t p, std::uint32_t n);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint64_t size() const { return labels_.size(); }
    std::uint32_t cell_count() const { return cells_; }
    std::uint32_t cell_of(std::uint64_t x) const { return labels_[x]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }
    const std::optional<Subspace>& subspace() const { return subspace_; }

    // every cell of *this is contained in a cell of coarser
    bool refines(const PartitionView& coarser) const;

  private:
    PartitionView() = default;
    std::uint32_t p_ = 2;
    std::uint32_t n_ = 0;
    std::uint32_t cells_ = 0;
    std::vector<std::uint32_t> labels_;
    std::optional<Subspace> subspace_;
};

struct EnergyReport {
    double energy = 0.0;
    std::vector<double> cell_means;
    std::vector<std::uint64_t> cell_sizes;
    std::optional<double> gap;  // against a second partition, when requested
};

// E(f|P)(x) = mean of f over the cell of x
DensityFunction conditional_expectation(const DensityFunction& f, const PartitionView& P);

// E(P) = E_x [E(f|P)(x)]^2
EnergyReport energy(const DensityFunction& f, const PartitionView& P);

// E(P(W)) = sum_{r in W^perp} |f_hat(r)|^2; cheap once the spectrum is known
double subspace_energy(const Spectrum& spec, const Subspace& W);

struct PythagorasReport {
    double energy_coarse = 0.0;
    double energy_fine = 0.0;
    double gap = 0.0;           // energy_fine - energy_coarse
    double l2_diff_sq = 0.0;    // ||E(f|Q) - E(f|P)||_{L2}^2
    bool bounds_ok = false;     // 0 <= E <= max(f)^2-ish sanity: 0 <= E(P) <= 1
    bool monotone_ok = false;   // E(Q) >= E(P)
    bool pythagoras_ok = false; // gap == l2_diff_sq to 1e-9
    bool pass = false;
};

// Q must refine P.
PythagorasReport energy_property_suite(const DensityFunction& f, const PartitionView& P,
                                       const PartitionView& Q);

// Per-layer contributions alpha_{H+u}(j) = w_j * density(A_j on H+u);
// their sum is the density of f on the coset H+u.
std::vector<double> alpha_decomposition(const Instance& inst, const Subspace& H,
                                        const FieldVector& u);

struct EnergyGapReport {
    std::uint32_t layer = 0;
    double energy_prev = 0.0;
    double energy_cur = 0.0;
    double gap = 0.0;
    double bound = 0.0;  // w_i^2 / p^2
    bool pass = false;
};

// E(H_i) - E(H_{i-1}) >= w_i^2/p^2
EnergyGapReport verify_energy_middle(const Instance& inst, std::uint32_t i);

struct EnergyStartWitness {
    Subspace W;
    double energy = 0.0;
    double limit = 0.0;
};

struct EnergyStartReport {
    std::uint32_t layer = 0;
    double energy_Hi = 0.0;
    double bound = 0.0;  // 8 w_i^2
    std::uint64_t checked = 0;
    std::vector<EnergyStartWitness> violations;
    bool pass = false;
};

// The structures the energy-start proof identifies as extremal: all
// intersections of chain subspaces H_j (j <= i) with spanning-vector
// orthocomplements, plus the H_j themselves.
std::vector<Subspace> adversarial_subspaces(const Instance& inst, std::uint32_t i);

// E(W) < E(H_i) + 8 w_i^2 for every candidate W with codim W <= codim H_i.
// Requires weights non-increasing from position i on.
EnergyStartReport verify_energy_start(const Instance& inst, std::uint32_t i,
                                      const std::vector<Subspace>& candidates);

struct PairCheckReport {
    double epsilon = 0.0;       // eps(codim W1)
    double bad_fraction = 0.0;  // of W2-cosets with larger bias
    bool regular_ok = false;    // condition (i)
    double energy_w1 = 0.0;
    double energy_w2 = 0.0;
    double gap = 0.0;
    bool gap_ok = false;        // condition (ii): gap <= delta
    bool pass = false;
};

// Regular/low-gap pair conditions: (i) the coset partition of W2 is
// eps(codim W1)-regular for f, (ii) E(W2) - E(W1) <= delta.  W2 <= W1.
PairCheckReport sarl_pair_check(const DensityFunction& f, const Subspace& W1,
                                const Subspace& W2, double delta,
                                const std::function<double(std::uint32_t)>& eps_fn);

}  // namespace regulab
