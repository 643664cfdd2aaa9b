#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "clpz/ints.hpp"

namespace clpz {

// Extended integer: an endpoint in Z plus -infinity ("inf") / +infinity ("sup").
struct Ext {
    enum class Kind { NegInf, Fin, PosInf };
    Kind kind = Kind::Fin;
    Int value = 0;

    static Ext neg_inf() { return {Kind::NegInf, 0}; }
    static Ext pos_inf() { return {Kind::PosInf, 0}; }
    static Ext fin(Int v) { return {Kind::Fin, std::move(v)}; }

    bool is_fin() const { return kind == Kind::Fin; }
    bool is_neg_inf() const { return kind == Kind::NegInf; }
    bool is_pos_inf() const { return kind == Kind::PosInf; }

    std::string str() const;
};

bool operator==(const Ext& a, const Ext& b);
bool operator<(const Ext& a, const Ext& b);
inline bool operator<=(const Ext& a, const Ext& b) { return a < b || a == b; }

// Ext arithmetic; infinities absorb, 0 * +-inf = 0 (interval corner convention).
Ext ext_add(const Ext& a, const Ext& b);
Ext ext_sub(const Ext& a, const Ext& b);
Ext ext_mul(const Ext& a, const Ext& b);
Ext ext_neg(const Ext& a);
Ext ext_add_int(const Ext& a, const Int& k);

// A set of integers as an ordered list of disjoint, non-adjacent intervals.
// An empty interval list is the empty (inconsistent) domain.
class Domain {
public:
    struct Interval {
        Ext lo, hi;
    };

    Domain() = default;  // empty

    static Domain empty() { return Domain(); }
    static Domain full() { return range(Ext::neg_inf(), Ext::pos_inf()); }
    static Domain singleton(Int v);
    static Domain range(Ext lo, Ext hi);
    // Normalizes: drops empty intervals, sorts, merges overlap/adjacency.
    static Domain from_intervals(std::vector<Interval> ivs);
    static Domain from_values(std::vector<Int> vs);

    bool is_empty() const { return ivs_.empty(); }
    bool is_finite() const;
    std::optional<Int> singleton_value() const;
    // Exact member count when finite, nullopt when infinite.
    std::optional<Int> count() const;
    // Bounds; domain must be non-empty.
    Ext lo() const { return ivs_.front().lo; }
    Ext hi() const { return ivs_.back().hi; }

    bool contains(const Int& v) const;
    bool subset_of(const Domain& other) const;

    Domain intersect(const Domain& other) const;
    Domain unite(const Domain& other) const;
    Domain remove(const Int& v) const;
    Domain negate() const;
    Domain shift(const Int& k) const;

    // Finite domains only.
    std::vector<Int> values() const;
    void for_each(const std::function<void(const Int&)>& fn) const;

    bool operator==(const Domain& other) const;
    bool operator!=(const Domain& other) const { return !(*this == other); }

    const std::vector<Interval>& intervals() const { return ivs_; }

    // Answer-printing form: `L..H`, unions joined by `\/`, endpoints
    // `inf`/`sup`, singleton interval printed as the bare integer.
    std::string str() const;

private:
    std::vector<Interval> ivs_;
};

enum class ArithOp { Add, Sub, Mul, DivT, Pow };

// Superset of {x op y | x in a, y in b}. Exact when both inputs are small
// finite sets; interval-hull arithmetic otherwise. DivT truncates toward
// zero and ignores zero divisors; Pow ignores negative exponents.
Domain image(ArithOp op, const Domain& a, const Domain& b);
Domain image_abs(const Domain& a);

// Hull of {x : exists y in b\{0}, z in hull(c) with x*y = z}; used as the
// multiplication inverse when supports cannot be enumerated.
Domain quotient_hull(const Domain& c, const Domain& b);

// Hull of {x : exists y in b\{0}, z in hull(c) with trunc(x/y) = z}.
Domain divT_preimage_hull(const Domain& c, const Domain& b);

}  // namespace clpz
