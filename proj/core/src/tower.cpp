#include "regulab/tower.hpp"

#include <sstream>

namespace regulab {

namespace {
const BigInt kExactCap = BigInt(1) << 64;       // fold-to-exact threshold
const BigInt kEvalCap = BigInt(1) << 16;        // exponent cap: materialize up to 2^65536

BigInt big_pow2(const BigInt& e) { return BigInt(1) << static_cast<std::uint64_t>(e); }

// twr(k) for k <= 5 (twr(5) = 2^65536 is an 8 KiB number, still fine)
BigInt small_twr(std::uint64_t k) {
    BigInt v = 1;
    for (std::uint64_t i = 0; i < k; ++i) v = big_pow2(v);
    return v;
}
}  // namespace

TowerExpr TowerExpr::exact(BigInt v) {
    if (v < 0) throw InvariantError("TowerExpr: negative value");
    TowerExpr e;
    e.kind_ = Kind::Exact;
    e.value_ = std::move(v);
    return e;
}

TowerExpr TowerExpr::pow2(TowerExpr a) {
    if (a.kind_ == Kind::Exact && a.value_ <= 64) return exact(big_pow2(a.value_));
    TowerExpr e;
    e.kind_ = Kind::Pow2;
    e.arg_ = std::make_shared<const TowerExpr>(std::move(a));
    return e;
}

TowerExpr TowerExpr::twr(TowerExpr a) {
    if (a.kind_ == Kind::Exact && a.value_ <= 4)
        return exact(small_twr(static_cast<std::uint64_t>(a.value_)));
    TowerExpr e;
    e.kind_ = Kind::Twr;
    e.arg_ = std::make_shared<const TowerExpr>(std::move(a));
    return e;
}

std::optional<BigInt> TowerExpr::eval() const {
    switch (kind_) {
        case Kind::Exact:
            return value_;
        case Kind::Pow2: {
            auto ea = arg_->eval();
            if (ea && *ea <= kEvalCap) return big_pow2(*ea);
            return std::nullopt;
        }
        case Kind::Twr: {
            auto ea = arg_->eval();
            if (ea && *ea <= 5) return small_twr(static_cast<std::uint64_t>(*ea));
            return std::nullopt;
        }
    }
    return std::nullopt;
}

BigInt TowerExpr::lower_bound() const {
    static const BigInt sat = big_pow2(kEvalCap);  // 2^65536 saturation point
    switch (kind_) {
        case Kind::Exact:
            return value_;
        case Kind::Pow2: {
            BigInt la = arg_->lower_bound();
            return la >= kEvalCap ? sat : big_pow2(la);
        }
        case Kind::Twr: {
            BigInt la = arg_->lower_bound();
            return la >= 5 ? sat : small_twr(static_cast<std::uint64_t>(la));
        }
    }
    return 0;
}

std::optional<BigInt> TowerExpr::upper_bound() const {
    switch (kind_) {
        case Kind::Exact:
            return value_;
        case Kind::Pow2: {
            auto ua = arg_->upper_bound();
            if (ua && *ua <= kEvalCap) return big_pow2(*ua);
            return std::nullopt;
        }
        case Kind::Twr: {
            auto ua = arg_->upper_bound();
            if (ua && *ua <= 5) return small_twr(static_cast<std::uint64_t>(*ua));
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool TowerExpr::same_tree(const TowerExpr& o) const {
    if (kind_ != o.kind_) return false;
    if (kind_ == Kind::Exact) return value_ == o.value_;
    return arg_->same_tree(*o.arg_);
}

std::string TowerExpr::str() const {
    switch (kind_) {
        case Kind::Exact:
            return value_.str();
        case Kind::Pow2:
            return "2^(" + arg_->str() + ")";
        case Kind::Twr:
            return "twr(" + arg_->str() + ")";
    }
    return "?";
}

std::optional<int> compare_expr(const TowerExpr& a, const TowerExpr& b) {
    if (a.same_tree(b)) return 0;
    auto ea = a.eval();
    auto eb = b.eval();
    if (ea && eb) return *ea < *eb ? -1 : (*ea > *eb ? 1 : 0);
    // both 2^x or both twr(x): strictly monotone, compare arguments
    if (a.kind() == b.kind() && a.kind() != TowerExpr::Kind::Exact)
        return compare_expr(a.arg(), b.arg());
    auto ub_b = b.upper_bound();
    if (ub_b && a.lower_bound() > *ub_b) return 1;
    auto ub_a = a.upper_bound();
    if (ub_a && b.lower_bound() > *ub_a) return -1;
    return std::nullopt;
}

TowerInt TowerInt::exact(BigInt v) { return exact_expr(TowerExpr::exact(std::move(v))); }

TowerInt TowerInt::exact_expr(TowerExpr e) {
    TowerInt t;
    t.lo_ = e;
    t.hi_ = std::move(e);
    return t;
}

TowerInt TowerInt::interval(TowerExpr lo, std::optional<TowerExpr> hi) {
    TowerInt t;
    t.lo_ = std::move(lo);
    t.hi_ = std::move(hi);
    return t;
}

bool TowerInt::is_exact() const { return hi_ && lo_.same_tree(*hi_); }

std::optional<BigInt> TowerInt::eval() const {
    if (!is_exact()) return std::nullopt;
    return lo_.eval();
}

namespace {
std::uint32_t ceil_log2(std::uint64_t k) {
    std::uint32_t b = 0;
    std::uint64_t v = 1;
    while (v < k) {
        v <<= 1;
        ++b;
    }
    return b;
}

// sound upper bound for e + c
TowerExpr add_expr_ub(const TowerExpr& e, std::uint64_t c) {
    if (c == 0) return e;
    switch (e.kind()) {
        case TowerExpr::Kind::Exact:
            return TowerExpr::exact(e.value() + c);
        case TowerExpr::Kind::Pow2:
            // 2^a + c <= 2^(a+c)
            return TowerExpr::pow2(add_expr_ub(e.arg(), c));
        case TowerExpr::Kind::Twr:
            // twr(a) + c <= twr(a+1)   (a >= 5 for unfolded nodes)
            return TowerExpr::twr(add_expr_ub(e.arg(), 1));
    }
    return e;
}

// sound upper bound for e * k
TowerExpr mul_expr_ub(const TowerExpr& e, std::uint64_t k) {
    if (k <= 1) return e;
    switch (e.kind()) {
        case TowerExpr::Kind::Exact:
            return TowerExpr::exact(e.value() * k);
        case TowerExpr::Kind::Pow2:
            return TowerExpr::pow2(add_expr_ub(e.arg(), ceil_log2(k)));
        case TowerExpr::Kind::Twr:
            return TowerExpr::twr(add_expr_ub(e.arg(), 1));
    }
    return e;
}

// sound lower bound for max(e - c, 0)
TowerExpr sub_expr_lb(const TowerExpr& e, std::uint64_t c) {
    if (c == 0) return e;
    switch (e.kind()) {
        case TowerExpr::Kind::Exact:
            return TowerExpr::exact(e.value() >= c ? BigInt(e.value() - c) : BigInt(0));
        case TowerExpr::Kind::Pow2:
            // 2^a - c >= 2^(a-1) whenever 2^(a-1) >= c
            if (e.arg().lower_bound() >= ceil_log2(c) + 1)
                return TowerExpr::pow2(sub_expr_lb(e.arg(), 1));
            return TowerExpr::exact(0);
        case TowerExpr::Kind::Twr:
            // twr(a) - c >= twr(a-1) for unfolded nodes (a >= 5)
            return TowerExpr::twr(sub_expr_lb(e.arg(), 1));
    }
    return e;
}
}  // namespace

TowerInt TowerInt::add(std::uint64_t c) const {
    if (is_exact() && lo_.kind() == TowerExpr::Kind::Exact)
        return exact(lo_.value() + c);
    TowerExpr lo = lo_.kind() == TowerExpr::Kind::Exact
                       ? TowerExpr::exact(lo_.value() + c)
                       : lo_;  // x + c >= x
    std::optional<TowerExpr> hi;
    if (hi_) {
        if (hi_->kind() == TowerExpr::Kind::Exact)
            hi = TowerExpr::exact(hi_->value() + c);
        else if (hi_->lower_bound() >= c)
            hi = mul_expr_ub(*hi_, 2);  // x + c <= 2x when x >= c
    }
    return interval(std::move(lo), std::move(hi));
}

TowerInt TowerInt::mul(std::uint64_t k) const {
    if (k == 0) return exact(0);
    if (is_exact() && lo_.kind() == TowerExpr::Kind::Exact)
        return exact(lo_.value() * k);
    TowerExpr lo = lo_.kind() == TowerExpr::Kind::Exact
                       ? TowerExpr::exact(lo_.value() * k)
                       : lo_;  // kx >= x
    std::optional<TowerExpr> hi;
    if (hi_) hi = mul_expr_ub(*hi_, k);
    return interval(std::move(lo), std::move(hi));
}

TowerInt TowerInt::sub(std::uint64_t c) const {
    if (is_exact() && lo_.kind() == TowerExpr::Kind::Exact)
        return exact(lo_.value() >= c ? BigInt(lo_.value() - c) : BigInt(0));
    return interval(sub_expr_lb(lo_, c), hi_);  // x - c <= x
}

TowerInt TowerInt::scale_up(std::uint64_t num, std::uint64_t den) const {
    if (den == 0 || num < den) throw InvariantError("scale_up: need num >= den >= 1");
    if (is_exact() && lo_.kind() == TowerExpr::Kind::Exact)
        return exact(lo_.value() * num / den);
    // floor(x*num/den) >= x for integer x when num >= den
    TowerExpr lo = lo_.kind() == TowerExpr::Kind::Exact
                       ? TowerExpr::exact(lo_.value() * num / den)
                       : lo_;
    std::optional<TowerExpr> hi;
    if (hi_) hi = mul_expr_ub(*hi_, (num + den - 1) / den);
    return interval(std::move(lo), std::move(hi));
}

std::string TowerInt::str() const {
    if (is_exact()) return lo_.str();
    return "[" + lo_.str() + ", " + (hi_ ? hi_->str() : "?") + "]";
}

TowerInt tower_add(const TowerInt& a, const TowerInt& b) {
    bool a_num = a.is_exact() && a.lo().kind() == TowerExpr::Kind::Exact;
    bool b_num = b.is_exact() && b.lo().kind() == TowerExpr::Kind::Exact;
    if (a_num && b_num) return TowerInt::exact(a.lo().value() + b.lo().value());
    // x + y >= max(lo_a, lo_b)
    auto c = compare_expr(a.lo(), b.lo());
    TowerExpr lo = (c && *c < 0) ? b.lo() : a.lo();
    std::optional<TowerExpr> hi;
    if (a.hi() && b.hi()) {
        if (a.hi()->kind() == TowerExpr::Kind::Exact &&
            b.hi()->kind() == TowerExpr::Kind::Exact) {
            hi = TowerExpr::exact(a.hi()->value() + b.hi()->value());
        } else {
            auto ch = compare_expr(*a.hi(), *b.hi());
            if (ch) {  // x + y <= 2 max(hi_a, hi_b)
                const TowerExpr& m = *ch < 0 ? *b.hi() : *a.hi();
                hi = mul_expr_ub(m, 2);
            }
        }
    }
    return TowerInt::interval(std::move(lo), std::move(hi));
}

TowerInt tower_pow2(const TowerInt& e) {
    std::optional<TowerExpr> hi;
    if (e.hi()) hi = TowerExpr::pow2(*e.hi());
    return TowerInt::interval(TowerExpr::pow2(e.lo()), std::move(hi));
}

TowerInt tower_pow(std::uint32_t p, const TowerInt& e) {
    if (p == 2) return tower_pow2(e);
    if (auto v = e.eval()) {
        // fold when p^v stays under the exact cap (result <= kEvalCap bits)
        if (*v * ceil_log2(p) <= kEvalCap) {
            BigInt r = 1;
            for (BigInt i = 0; i < *v; ++i) r *= p;
            return TowerInt::exact(r);
        }
    }
    std::uint32_t bits = ceil_log2(p);  // p^e <= 2^(bits*e)
    std::optional<TowerExpr> hi;
    if (e.hi()) hi = TowerExpr::pow2(mul_expr_ub(*e.hi(), bits));
    return TowerInt::interval(TowerExpr::pow2(e.lo()), std::move(hi));
}

TowerInt tower_twr(const TowerInt& e) {
    std::optional<TowerExpr> hi;
    if (e.hi()) hi = TowerExpr::twr(*e.hi());
    return TowerInt::interval(TowerExpr::twr(e.lo()), std::move(hi));
}

TowerCmp compare(const TowerInt& a, const TowerInt& b) {
    if (a.is_exact() && b.is_exact()) {
        auto c = compare_expr(a.lo(), b.lo());
        if (c) return *c < 0 ? TowerCmp::Less : (*c > 0 ? TowerCmp::Greater : TowerCmp::Equal);
        return TowerCmp::Incomparable;
    }
    if (b.hi()) {
        auto c = compare_expr(a.lo(), *b.hi());
        if (c && *c > 0) return TowerCmp::Greater;
    }
    if (a.hi()) {
        auto c = compare_expr(*a.hi(), b.lo());
        if (c && *c < 0) return TowerCmp::Less;
    }
    return TowerCmp::Incomparable;
}

TowerInt twr_of(std::uint64_t k) {
    return TowerInt::exact_expr(TowerExpr::twr(TowerExpr::exact(k)));
}

TowerInt twr_of(const TowerInt& k) { return tower_twr(k); }

TowerInt wwz_of(std::uint32_t i) {
    if (i == 0) throw InvariantError("wwz_of: defined for i >= 1");
    TowerInt w = TowerInt::exact(2);
    for (std::uint32_t k = 1; k < i; ++k) w = tower_twr(w);
    return w;
}

}  // namespace regulab
