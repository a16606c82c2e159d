#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regulab/common.hpp"

namespace regulab {

// Vector in F_p^n, coordinates stored as reduced residues (0 <= c < p).
class FieldVector {
  public:
    FieldVector() : p_(2) {}
    FieldVector(std::uint32_t p, std::uint32_t n);
    FieldVector(std::uint32_t p, std::vector<std::uint8_t> coords);

    static FieldVector unit(std::uint32_t p, std::uint32_t n, std::uint32_t k);
    // Little-endian base-p decoding: coords[k] = (index / p^k) % p.
    static FieldVector from_index(std::uint32_t p, std::uint32_t n, std::uint64_t index);
    std::uint64_t to_index() const;

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return static_cast<std::uint32_t>(coords_.size()); }
    std::uint8_t operator[](std::uint32_t k) const { return coords_[k]; }
    std::uint8_t& operator[](std::uint32_t k) { return coords_[k]; }
    const std::vector<std::uint8_t>& coords() const { return coords_; }

    bool is_zero() const;
    FieldVector operator+(const FieldVector& o) const;
    FieldVector operator-(const FieldVector& o) const;
    FieldVector operator-() const;
    FieldVector operator*(std::uint32_t scalar) const;
    // <x,y> = sum x_k y_k mod p
    std::uint8_t dot(const FieldVector& o) const;

    bool operator==(const FieldVector& o) const = default;
    std::string str() const;

  private:
    std::uint32_t p_;
    std::vector<std::uint8_t> coords_;
};

// Subspace of F_p^n held in reduced row echelon form, which makes the basis
// canonical: two Subspace values are equal iff they are the same subspace.
class Subspace {
  public:
    // The zero subspace.
    Subspace(std::uint32_t p, std::uint32_t n);
    // Span of arbitrary vectors.
    static Subspace span(std::uint32_t p, std::uint32_t n,
                         const std::vector<FieldVector>& vectors);
    static Subspace full(std::uint32_t p, std::uint32_t n);
    // Coordinate subspace spanned by unit vectors e_k, k in [start, start+len).
    static Subspace coordinate_window(std::uint32_t p, std::uint32_t n,
                                      std::uint32_t start, std::uint32_t len);
    // Uniformly random subspace of the given dimension.
    static Subspace random(std::uint32_t p, std::uint32_t n, std::uint32_t dim,
                           CounterRng& rng);

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t dim() const { return static_cast<std::uint32_t>(basis_.size()); }
    std::uint32_t codim() const { return n_ - dim(); }
    const std::vector<FieldVector>& basis() const { return basis_; }
    const std::vector<std::uint32_t>& pivots() const { return pivots_; }

    bool contains(const FieldVector& v) const;
    // subset test: *this <= other
    bool subspace_of(const Subspace& other) const;

    // {r : <r,h> = 0 for all h in *this}; dim = codim(*this).
    Subspace annihilator() const;
    Subspace intersect(const Subspace& other) const;
    Subspace sum(const Subspace& other) const;
    // Coordinate complement: span of unit vectors on non-pivot columns.
    // Complementary (direct sum gives F_p^n) and canonical for fixed basis.
    Subspace coordinate_complement() const;

    // Canonical representative of x + *this: the unique element of the coset
    // vanishing on all pivot columns.
    FieldVector coset_rep(const FieldVector& x) const;

    // All p^dim elements (budget-checked).
    std::vector<FieldVector> elements() const;
    // Canonical representatives of all p^codim cosets (budget-checked).
    std::vector<FieldVector> coset_reps() const;

    bool operator==(const Subspace& o) const = default;
    std::string str() const;

  private:
    std::uint32_t p_;
    std::uint32_t n_;
    std::vector<FieldVector> basis_;     // RREF rows
    std::vector<std::uint32_t> pivots_;  // pivot column of each row
};

// Coset H + rep with rep canonicalized through H.coset_rep.
struct Coset {
    Subspace subspace;
    FieldVector rep;

    Coset(Subspace H, const FieldVector& x);
    bool contains(const FieldVector& v) const;
    bool operator==(const Coset& o) const = default;
};

// a^(-1) mod p for 0 < a < p (p prime).
std::uint8_t mod_inverse(std::uint32_t p, std::uint8_t a);

}  // namespace regulab
