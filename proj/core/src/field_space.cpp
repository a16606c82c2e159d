#include "regulab/field_space.hpp"

#include <algorithm>
#include <sstream>

namespace regulab {

namespace {
void check_same_space(const FieldVector& a, const FieldVector& b) {
    if (a.p() != b.p() || a.n() != b.n())
        throw DimensionError("FieldVector: mismatched p or n");
}
}  // namespace

FieldVector::FieldVector(std::uint32_t p, std::uint32_t n) : p_(p), coords_(n, 0) {}

FieldVector::FieldVector(std::uint32_t p, std::vector<std::uint8_t> coords)
    : p_(p), coords_(std::move(coords)) {
    for (auto& c : coords_) c = static_cast<std::uint8_t>(c % p_);
}

FieldVector FieldVector::unit(std::uint32_t p, std::uint32_t n, std::uint32_t k) {
    if (k >= n) throw DimensionError("FieldVector::unit: index out of range");
    FieldVector v(p, n);
    v.coords_[k] = 1;
    return v;
}

FieldVector FieldVector::from_index(std::uint32_t p, std::uint32_t n, std::uint64_t index) {
    FieldVector v(p, n);
    for (std::uint32_t k = 0; k < n; ++k) {
        v.coords_[k] = static_cast<std::uint8_t>(index % p);
        index /= p;
    }
    if (index != 0) throw DimensionError("FieldVector::from_index: index out of range");
    return v;
}

std::uint64_t FieldVector::to_index() const {
    std::uint64_t idx = 0;
    for (std::uint32_t k = n(); k-- > 0;) idx = idx * p_ + coords_[k];
    return idx;
}

bool FieldVector::is_zero() const {
    return std::all_of(coords_.begin(), coords_.end(), [](std::uint8_t c) { return c == 0; });
}

FieldVector FieldVector::operator+(const FieldVector& o) const {
    check_same_space(*this, o);
    FieldVector r(p_, n());
    for (std::uint32_t k = 0; k < n(); ++k)
        r.coords_[k] = static_cast<std::uint8_t>((coords_[k] + o.coords_[k]) % p_);
    return r;
}

FieldVector FieldVector::operator-(const FieldVector& o) const {
    check_same_space(*this, o);
    FieldVector r(p_, n());
    for (std::uint32_t k = 0; k < n(); ++k)
        r.coords_[k] = static_cast<std::uint8_t>((coords_[k] + p_ - o.coords_[k]) % p_);
    return r;
}

FieldVector FieldVector::operator-() const {
    FieldVector r(p_, n());
    for (std::uint32_t k = 0; k < n(); ++k)
        r.coords_[k] = static_cast<std::uint8_t>((p_ - coords_[k]) % p_);
    return r;
}

FieldVector FieldVector::operator*(std::uint32_t scalar) const {
    scalar %= p_;
    FieldVector r(p_, n());
    for (std::uint32_t k = 0; k < n(); ++k)
        r.coords_[k] = static_cast<std::uint8_t>((coords_[k] * scalar) % p_);
    return r;
}

std::uint8_t FieldVector::dot(const FieldVector& o) const {
    check_same_space(*this, o);
    std::uint32_t acc = 0;
    for (std::uint32_t k = 0; k < n(); ++k) acc += coords_[k] * o.coords_[k];
    return static_cast<std::uint8_t>(acc % p_);
}

std::string FieldVector::str() const {
    std::ostringstream os;
    os << '(';
    for (std::uint32_t k = 0; k < n(); ++k) {
        if (k) os << ',';
        os << static_cast<int>(coords_[k]);
    }
    os << ')';
    return os.str();
}

std::uint8_t mod_inverse(std::uint32_t p, std::uint8_t a) {
    if (a % p == 0) throw InvariantError("mod_inverse: zero has no inverse");
    // p is small and prime; Fermat
    std::uint32_t r = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<std::uint8_t>(r);
}

Subspace::Subspace(std::uint32_t p, std::uint32_t n) : p_(p), n_(n) {}

Subspace Subspace::span(std::uint32_t p, std::uint32_t n,
                        const std::vector<FieldVector>& vectors) {
    Subspace s(p, n);
    for (const auto& v : vectors) {
        if (v.p() != p || v.n() != n) throw DimensionError("Subspace::span: mismatched vector");
        // reduce v by existing rows, then insert keeping echelon order
        FieldVector w = v;
        for (std::size_t i = 0; i < s.basis_.size(); ++i) {
            std::uint8_t c = w[s.pivots_[i]];
            if (c) w = w - s.basis_[i] * c;
        }
        std::uint32_t piv = n;
        for (std::uint32_t k = 0; k < n; ++k)
            if (w[k]) { piv = k; break; }
        if (piv == n) continue;  // dependent
        w = w * mod_inverse(p, w[piv]);
        // clear this column from rows above
        for (std::size_t i = 0; i < s.basis_.size(); ++i) {
            std::uint8_t c = s.basis_[i][piv];
            if (c) s.basis_[i] = s.basis_[i] - w * c;
        }
        auto pos = std::lower_bound(s.pivots_.begin(), s.pivots_.end(), piv);
        std::size_t idx = static_cast<std::size_t>(pos - s.pivots_.begin());
        s.pivots_.insert(pos, piv);
        s.basis_.insert(s.basis_.begin() + static_cast<std::ptrdiff_t>(idx), w);
    }
    return s;
}

Subspace Subspace::full(std::uint32_t p, std::uint32_t n) {
    std::vector<FieldVector> units;
    for (std::uint32_t k = 0; k < n; ++k) units.push_back(FieldVector::unit(p, n, k));
    return span(p, n, units);
}

Subspace Subspace::coordinate_window(std::uint32_t p, std::uint32_t n,
                                     std::uint32_t start, std::uint32_t len) {
    if (start + len > n) throw DimensionError("coordinate_window: out of range");
    std::vector<FieldVector> units;
    for (std::uint32_t k = start; k < start + len; ++k)
        units.push_back(FieldVector::unit(p, n, k));
    return span(p, n, units);
}

Subspace Subspace::random(std::uint32_t p, std::uint32_t n, std::uint32_t dim,
                          CounterRng& rng) {
    if (dim > n) throw DimensionError("Subspace::random: dim > n");
    Subspace s(p, n);
    std::vector<FieldVector> acc;
    while (s.dim() < dim) {
        FieldVector v(p, n);
        for (std::uint32_t k = 0; k < n; ++k)
            v[k] = static_cast<std::uint8_t>(rng.below(p));
        acc.push_back(v);
        s = span(p, n, acc);
    }
    return s;
}

bool Subspace::contains(const FieldVector& v) const {
    if (v.p() != p_ || v.n() != n_) throw DimensionError("Subspace::contains: mismatch");
    FieldVector w = v;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        std::uint8_t c = w[pivots_[i]];
        if (c) w = w - basis_[i] * c;
    }
    return w.is_zero();
}

bool Subspace::subspace_of(const Subspace& other) const {
    for (const auto& b : basis_)
        if (!other.contains(b)) return false;
    return true;
}

Subspace Subspace::annihilator() const {
    // null space of the basis matrix, read off the RREF: one generator per
    // free column j, with entry 1 at j and -R[i][j] at pivot column i
    std::vector<bool> is_pivot(n_, false);
    for (auto piv : pivots_) is_pivot[piv] = true;
    std::vector<FieldVector> gens;
    for (std::uint32_t j = 0; j < n_; ++j) {
        if (is_pivot[j]) continue;
        FieldVector v(p_, n_);
        v[j] = 1;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            v[pivots_[i]] = static_cast<std::uint8_t>((p_ - basis_[i][j]) % p_);
        gens.push_back(v);
    }
    return span(p_, n_, gens);
}

Subspace Subspace::intersect(const Subspace& other) const {
    if (other.p() != p_ || other.n() != n_) throw DimensionError("intersect: mismatch");
    // (A cap B) = (A^perp + B^perp)^perp
    return annihilator().sum(other.annihilator()).annihilator();
}

Subspace Subspace::sum(const Subspace& other) const {
    if (other.p() != p_ || other.n() != n_) throw DimensionError("sum: mismatch");
    std::vector<FieldVector> gens = basis_;
    gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
    return span(p_, n_, gens);
}

Subspace Subspace::coordinate_complement() const {
    std::vector<bool> is_pivot(n_, false);
    for (auto piv : pivots_) is_pivot[piv] = true;
    std::vector<FieldVector> gens;
    for (std::uint32_t k = 0; k < n_; ++k)
        if (!is_pivot[k]) gens.push_back(FieldVector::unit(p_, n_, k));
    return span(p_, n_, gens);
}

FieldVector Subspace::coset_rep(const FieldVector& x) const {
    if (x.p() != p_ || x.n() != n_) throw DimensionError("coset_rep: mismatch");
    FieldVector w = x;
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        std::uint8_t c = w[pivots_[i]];
        if (c) w = w - basis_[i] * c;
    }
    return w;
}

std::vector<FieldVector> Subspace::elements() const {
    std::uint64_t count = require_budget(p_, dim(), "Subspace::elements");
    std::vector<FieldVector> out;
    out.reserve(count);
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        FieldVector coeffs = FieldVector::from_index(p_, dim(), idx);
        FieldVector v(p_, n_);
        for (std::uint32_t i = 0; i < dim(); ++i)
            if (coeffs[i]) v = v + basis_[i] * coeffs[i];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<FieldVector> Subspace::coset_reps() const {
    // reps are exactly the elements of the coordinate complement
    return coordinate_complement().elements();
}

std::string Subspace::str() const {
    std::ostringstream os;
    os << "span{";
    for (std::size_t i = 0; i < basis_.size(); ++i) {
        if (i) os << ", ";
        os << basis_[i].str();
    }
    os << "} in F_" << p_ << "^" << n_;
    return os.str();
}

Coset::Coset(Subspace H, const FieldVector& x)
    : subspace(std::move(H)), rep(subspace.coset_rep(x)) {}

bool Coset::contains(const FieldVector& v) const {
    return subspace.contains(v - rep);
}

}  // namespace regulab
