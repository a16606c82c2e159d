#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "regulab/common.hpp"

namespace regulab {

using BigInt = boost::multiprecision::cpp_int;

// Expression tree for nonnegative integers that may be far beyond anything
// materializable: exact big integers, 2^e, and twr(e) (tower of e twos).
// Trees are immutable and shared.
class TowerExpr {
  public:
    enum class Kind { Exact, Pow2, Twr };

    static TowerExpr exact(BigInt v);
    static TowerExpr pow2(TowerExpr e);  // 2^e, folded to Exact when small
    static TowerExpr twr(TowerExpr e);   // twr(e), folded to Exact when small

    Kind kind() const { return kind_; }
    const BigInt& value() const { return value_; }         // Exact only
    const TowerExpr& arg() const { return *arg_; }         // Pow2/Twr only

    // Exact evaluation capped at 2^65536 (so twr(5) and below materialize).
    std::optional<BigInt> eval() const;
    // Sound lower bound; saturates at 2^65536.
    BigInt lower_bound() const;
    // Sound upper bound when one can be materialized.
    std::optional<BigInt> upper_bound() const;

    bool same_tree(const TowerExpr& o) const;
    std::string str() const;

  private:
    TowerExpr() = default;
    Kind kind_ = Kind::Exact;
    BigInt value_;
    std::shared_ptr<const TowerExpr> arg_;
};

// Three-way comparison of the represented numbers; nullopt when the
// structural rules cannot decide.
std::optional<int> compare_expr(const TowerExpr& a, const TowerExpr& b);

enum class TowerCmp { Less, Equal, Greater, Incomparable };

// Interval [lo, hi] of TowerExprs (hi absent = no usable upper bound).
// A TowerInt is exact when lo and hi are the same tree; arithmetic keeps
// soundness of both bounds but may widen.
class TowerInt {
  public:
    TowerInt() : lo_(TowerExpr::exact(0)), hi_(TowerExpr::exact(0)) {}
    static TowerInt exact(BigInt v);
    static TowerInt exact_expr(TowerExpr e);  // lo = hi = e
    static TowerInt interval(TowerExpr lo, std::optional<TowerExpr> hi);

    const TowerExpr& lo() const { return lo_; }
    const std::optional<TowerExpr>& hi() const { return hi_; }
    bool is_exact() const;
    // The exact value when representable below the cap.
    std::optional<BigInt> eval() const;

    TowerInt add(std::uint64_t c) const;
    TowerInt mul(std::uint64_t k) const;  // k >= 1
    // max(x - c, 0); lower bound via 2^a - c >= 2^(a-1), twr(a) - c >= twr(a-1)
    TowerInt sub(std::uint64_t c) const;
    // floor(x * num / den) for num >= den >= 1 (only scaling up is supported,
    // keeping the lower bound sound without division machinery)
    TowerInt scale_up(std::uint64_t num, std::uint64_t den) const;

    std::string str() const;

  private:
    TowerExpr lo_;
    std::optional<TowerExpr> hi_;
};

// Sound interval sum (exact only when both operands are exact machine values).
TowerInt tower_add(const TowerInt& a, const TowerInt& b);

TowerInt tower_pow2(const TowerInt& e);
// p^e bounded by 2^e <= p^e <= 2^(bits(p) * e)
TowerInt tower_pow(std::uint32_t p, const TowerInt& e);
TowerInt tower_twr(const TowerInt& e);

TowerCmp compare(const TowerInt& a, const TowerInt& b);

// twr(k) and wwz(k) as exact TowerInts (wwz(1) = 2, wwz(i+1) = twr(wwz(i))).
TowerInt twr_of(std::uint64_t k);
TowerInt twr_of(const TowerInt& k);
TowerInt wwz_of(std::uint32_t i);

}  // namespace regulab
