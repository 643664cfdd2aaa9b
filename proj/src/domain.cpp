#include "clpz/domain.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace clpz {

std::string Ext::str() const {
    switch (kind) {
    case Kind::NegInf: return "inf";
    case Kind::PosInf: return "sup";
    case Kind::Fin: return value.get_str();
    }
    return "?";
}

bool operator==(const Ext& a, const Ext& b) {
    if (a.kind != b.kind) return false;
    return a.kind != Ext::Kind::Fin || a.value == b.value;
}

bool operator<(const Ext& a, const Ext& b) {
    if (a.is_neg_inf()) return !b.is_neg_inf();
    if (a.is_pos_inf()) return false;
    if (b.is_neg_inf()) return false;
    if (b.is_pos_inf()) return true;
    return a.value < b.value;
}

Ext ext_add(const Ext& a, const Ext& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return Ext::neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return Ext::pos_inf();
    return Ext::fin(a.value + b.value);
}

Ext ext_sub(const Ext& a, const Ext& b) { return ext_add(a, ext_neg(b)); }

Ext ext_neg(const Ext& a) {
    if (a.is_neg_inf()) return Ext::pos_inf();
    if (a.is_pos_inf()) return Ext::neg_inf();
    return Ext::fin(-a.value);
}

Ext ext_add_int(const Ext& a, const Int& k) {
    if (!a.is_fin()) return a;
    return Ext::fin(a.value + k);
}

Ext ext_mul(const Ext& a, const Ext& b) {
    int sa = a.is_neg_inf() ? -1 : a.is_pos_inf() ? 1 : sgn(a.value);
    int sb = b.is_neg_inf() ? -1 : b.is_pos_inf() ? 1 : sgn(b.value);
    if (a.is_fin() && b.is_fin()) return Ext::fin(a.value * b.value);
    if (sa == 0 || sb == 0) return Ext::fin(0);
    return sa * sb > 0 ? Ext::pos_inf() : Ext::neg_inf();
}

namespace {

Ext ext_min(const Ext& a, const Ext& b) { return a < b ? a : b; }
Ext ext_max(const Ext& a, const Ext& b) { return a < b ? b : a; }

// hi + 1 >= lo, i.e. intervals [..,hi] and [lo,..] touch or overlap.
bool adjacent_or_overlap(const Ext& hi, const Ext& lo) {
    if (hi.is_pos_inf() || lo.is_neg_inf()) return true;
    if (hi.is_neg_inf() || lo.is_pos_inf()) return false;
    return hi.value + 1 >= lo.value;
}

}  // namespace

Domain Domain::singleton(Int v) {
    Ext lo = Ext::fin(v);
    return range(std::move(lo), Ext::fin(std::move(v)));
}

Domain Domain::range(Ext lo, Ext hi) {
    Domain d;
    if (lo.is_pos_inf() || hi.is_neg_inf() || hi < lo) return d;
    d.ivs_.push_back({std::move(lo), std::move(hi)});
    return d;
}

Domain Domain::from_intervals(std::vector<Interval> ivs) {
    std::vector<Interval> ok;
    for (auto& iv : ivs) {
        if (iv.lo.is_pos_inf() || iv.hi.is_neg_inf() || iv.hi < iv.lo) continue;
        ok.push_back(std::move(iv));
    }
    std::sort(ok.begin(), ok.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    Domain d;
    for (auto& iv : ok) {
        if (!d.ivs_.empty() && adjacent_or_overlap(d.ivs_.back().hi, iv.lo))
            d.ivs_.back().hi = ext_max(d.ivs_.back().hi, iv.hi);
        else
            d.ivs_.push_back(std::move(iv));
    }
    return d;
}

Domain Domain::from_values(std::vector<Int> vs) {
    std::sort(vs.begin(), vs.end());
    std::vector<Interval> ivs;
    for (auto& v : vs) ivs.push_back({Ext::fin(v), Ext::fin(v)});
    return from_intervals(std::move(ivs));
}

bool Domain::is_finite() const {
    if (ivs_.empty()) return true;
    return ivs_.front().lo.is_fin() && ivs_.back().hi.is_fin();
}

std::optional<Int> Domain::singleton_value() const {
    if (ivs_.size() == 1 && ivs_[0].lo.is_fin() && ivs_[0].lo == ivs_[0].hi)
        return ivs_[0].lo.value;
    return std::nullopt;
}

std::optional<Int> Domain::count() const {
    if (!is_finite()) return std::nullopt;
    Int n = 0;
    for (const auto& iv : ivs_) n += iv.hi.value - iv.lo.value + 1;
    return n;
}

bool Domain::contains(const Int& v) const {
    Ext e = Ext::fin(v);
    for (const auto& iv : ivs_)
        if (iv.lo <= e && e <= iv.hi) return true;
    return false;
}

bool Domain::subset_of(const Domain& other) const {
    return intersect(other) == *this;
}

Domain Domain::intersect(const Domain& other) const {
    std::vector<Interval> out;
    size_t i = 0, j = 0;
    while (i < ivs_.size() && j < other.ivs_.size()) {
        const Interval& a = ivs_[i];
        const Interval& b = other.ivs_[j];
        Ext lo = ext_max(a.lo, b.lo);
        Ext hi = ext_min(a.hi, b.hi);
        if (lo <= hi) out.push_back({lo, hi});
        if (a.hi < b.hi)
            ++i;
        else
            ++j;
    }
    return from_intervals(std::move(out));
}

Domain Domain::unite(const Domain& other) const {
    std::vector<Interval> out = ivs_;
    out.insert(out.end(), other.ivs_.begin(), other.ivs_.end());
    return from_intervals(std::move(out));
}

Domain Domain::remove(const Int& v) const {
    if (!contains(v)) return *this;
    std::vector<Interval> out;
    Ext e = Ext::fin(v);
    for (const auto& iv : ivs_) {
        if (iv.lo <= e && e <= iv.hi) {
            out.push_back({iv.lo, Ext::fin(v - 1)});
            out.push_back({Ext::fin(v + 1), iv.hi});
        } else {
            out.push_back(iv);
        }
    }
    return from_intervals(std::move(out));
}

Domain Domain::negate() const {
    std::vector<Interval> out;
    for (const auto& iv : ivs_) out.push_back({ext_neg(iv.hi), ext_neg(iv.lo)});
    return from_intervals(std::move(out));
}

Domain Domain::shift(const Int& k) const {
    std::vector<Interval> out;
    for (const auto& iv : ivs_)
        out.push_back({ext_add_int(iv.lo, k), ext_add_int(iv.hi, k)});
    return from_intervals(std::move(out));
}

std::vector<Int> Domain::values() const {
    std::vector<Int> vs;
    for_each([&](const Int& v) { vs.push_back(v); });
    return vs;
}

void Domain::for_each(const std::function<void(const Int&)>& fn) const {
    for (const auto& iv : ivs_)
        for (Int v = iv.lo.value; v <= iv.hi.value; ++v) fn(v);
}

bool Domain::operator==(const Domain& other) const {
    if (ivs_.size() != other.ivs_.size()) return false;
    for (size_t i = 0; i < ivs_.size(); ++i)
        if (!(ivs_[i].lo == other.ivs_[i].lo && ivs_[i].hi == other.ivs_[i].hi))
            return false;
    return true;
}

std::string Domain::str() const {
    if (ivs_.empty()) return "empty";
    std::ostringstream os;
    bool first = true;
    for (const auto& iv : ivs_) {
        if (!first) os << "\\/";
        std::string lo = iv.lo.str();
        if (!first && lo[0] == '-') os << ' ';
        if (iv.lo == iv.hi) {
            os << lo;
        } else {
            std::string hi = iv.hi.str();
            os << lo << "..";
            if (hi[0] == '-') os << ' ';
            os << hi;
        }
        first = false;
    }
    return os.str();
}

namespace {

constexpr long kEnumCap = 4096;  // max |a| * |b| for exact enumeration

bool small_product(const Domain& a, const Domain& b, long cap = kEnumCap) {
    auto ca = a.count(), cb = b.count();
    if (!ca || !cb) return false;
    if (!ca->fits_slong_p() || !cb->fits_slong_p()) return false;
    long la = ca->get_si(), lb = cb->get_si();
    return la > 0 && lb > 0 && la <= cap && lb <= cap && la * lb <= cap;
}

std::optional<Int> eval_op(ArithOp op, const Int& x, const Int& y) {
    switch (op) {
    case ArithOp::Add: return x + y;
    case ArithOp::Sub: return x - y;
    case ArithOp::Mul: return x * y;
    case ArithOp::DivT:
        if (y == 0) return std::nullopt;
        return div_trunc(x, y);
    case ArithOp::Pow:
        if (y < 0) return std::nullopt;
        return pow_nonneg(x, y);
    }
    return std::nullopt;
}

Domain enumerate_image(ArithOp op, const Domain& a, const Domain& b) {
    std::set<Int> vals;
    a.for_each([&](const Int& x) {
        b.for_each([&](const Int& y) {
            if (auto r = eval_op(op, x, y)) vals.insert(*r);
        });
    });
    return Domain::from_values({vals.begin(), vals.end()});
}

void hull_pair_add(std::vector<Domain::Interval>& out, const Domain::Interval& a,
                   const Domain::Interval& b) {
    out.push_back({ext_add(a.lo, b.lo), ext_add(a.hi, b.hi)});
}

void hull_pair_sub(std::vector<Domain::Interval>& out, const Domain::Interval& a,
                   const Domain::Interval& b) {
    out.push_back({ext_sub(a.lo, b.hi), ext_sub(a.hi, b.lo)});
}

void hull_pair_mul(std::vector<Domain::Interval>& out, const Domain::Interval& a,
                   const Domain::Interval& b) {
    Ext c1 = ext_mul(a.lo, b.lo), c2 = ext_mul(a.lo, b.hi);
    Ext c3 = ext_mul(a.hi, b.lo), c4 = ext_mul(a.hi, b.hi);
    Ext lo = ext_min(ext_min(c1, c2), ext_min(c3, c4));
    Ext hi = ext_max(ext_max(c1, c2), ext_max(c3, c4));
    out.push_back({lo, hi});
}

// Truncating division of extended corners; b is sign-definite and nonzero.
Ext ext_divT(const Ext& a, const Ext& b) {
    if (a.is_fin() && b.is_fin()) return Ext::fin(div_trunc(a.value, b.value));
    if (!a.is_fin() && b.is_fin()) {
        bool pos = a.is_pos_inf() == (b.value > 0);
        return pos ? Ext::pos_inf() : Ext::neg_inf();
    }
    if (a.is_fin()) return Ext::fin(0);  // finite / +-inf truncates to 0
    // inf corner over inf corner: unbounded quotient, widen by sign.
    bool pos = a.is_pos_inf() == b.is_pos_inf();
    return pos ? Ext::pos_inf() : Ext::neg_inf();
}

void hull_pair_divT(std::vector<Domain::Interval>& out, const Domain::Interval& a,
                    const Domain::Interval& bpart) {
    Ext c1 = ext_divT(a.lo, bpart.lo), c2 = ext_divT(a.lo, bpart.hi);
    Ext c3 = ext_divT(a.hi, bpart.lo), c4 = ext_divT(a.hi, bpart.hi);
    Ext lo = ext_min(ext_min(c1, c2), ext_min(c3, c4));
    Ext hi = ext_max(ext_max(c1, c2), ext_max(c3, c4));
    out.push_back({lo, hi});
}

// Sign-definite pieces of d with zero excluded.
std::vector<Domain::Interval> nonzero_pieces(const Domain& d) {
    Domain nz = d.remove(0);
    return nz.intervals();
}

Domain pow_hull(const Domain& a, const Domain& b0) {
    Domain b = b0.intersect(Domain::range(Ext::fin(0), Ext::pos_inf()));
    if (a.is_empty() || b.is_empty()) return Domain::empty();
    std::vector<Int> exps;
    bool exp_unbounded = !b.hi().is_fin();
    {
        Int elo = b.lo().value;
        exps.push_back(elo);
        exps.push_back(elo + 1);
        if (!exp_unbounded) {
            exps.push_back(b.hi().value);
            if (b.hi().value > 0) exps.push_back(b.hi().value - 1);
        }
    }
    std::vector<Int> bases;
    bool base_lo_inf = a.lo().is_neg_inf();
    bool base_hi_inf = a.hi().is_pos_inf();
    if (!base_lo_inf) bases.push_back(a.lo().value);
    if (!base_hi_inf) bases.push_back(a.hi().value);
    for (Int s : {Int(-1), Int(0), Int(1), Int(2), Int(-2)})
        if (a.contains(s)) bases.push_back(s);

    bool lo_inf = false, hi_inf = false;
    std::vector<Int> candidates;
    if (b.contains(0)) candidates.push_back(1);
    for (const Int& x : bases)
        for (const Int& e : exps) {
            if (e < 0) continue;
            if (!b.contains(e)) continue;
            auto r = pow_nonneg(x, e);
            if (!r) {  // |x| > 1 with a huge exponent
                if (x > 0)
                    hi_inf = true;
                else if (mpz_odd_p(e.get_mpz_t()))
                    lo_inf = true;
                else
                    hi_inf = true;
                continue;
            }
            candidates.push_back(*r);
        }
    bool has_pos_exp = b.hi().is_pos_inf() || b.hi().value >= 1;
    if (base_hi_inf && has_pos_exp) hi_inf = true;
    if (base_lo_inf && has_pos_exp) {
        lo_inf = true;
        hi_inf = true;  // even exponents send large negatives up
    }
    if (exp_unbounded) {
        if (base_hi_inf || (a.hi().is_fin() && a.hi().value >= 2)) hi_inf = true;
        bool deep_neg = base_lo_inf || (a.lo().is_fin() && a.lo().value <= -2);
        if (deep_neg) {
            lo_inf = true;
            hi_inf = true;
        }
    }
    if (candidates.empty() && !lo_inf && !hi_inf) return Domain::empty();
    Ext lo = lo_inf ? Ext::neg_inf()
                    : Ext::fin(*std::min_element(candidates.begin(), candidates.end()));
    Ext hi = hi_inf ? Ext::pos_inf()
                    : Ext::fin(*std::max_element(candidates.begin(), candidates.end()));
    if (candidates.empty()) {
        // unbounded on one side only: anchor the other side loosely
        if (!lo_inf) lo = Ext::neg_inf();
        if (!hi_inf) hi = Ext::pos_inf();
    }
    return Domain::range(lo, hi);
}

}  // namespace

Domain image(ArithOp op, const Domain& a, const Domain& b) {
    if (a.is_empty() || b.is_empty()) return Domain::empty();
    if (small_product(a, b)) return enumerate_image(op, a, b);

    std::vector<Domain::Interval> out;
    const auto& as = a.intervals();
    bool pairwise = as.size() * b.intervals().size() <= 64;
    auto a_ivs = pairwise ? as : std::vector<Domain::Interval>{{a.lo(), a.hi()}};
    auto b_ivs = pairwise ? b.intervals()
                          : std::vector<Domain::Interval>{{b.lo(), b.hi()}};
    switch (op) {
    case ArithOp::Add:
        for (const auto& x : a_ivs)
            for (const auto& y : b_ivs) hull_pair_add(out, x, y);
        break;
    case ArithOp::Sub:
        for (const auto& x : a_ivs)
            for (const auto& y : b_ivs) hull_pair_sub(out, x, y);
        break;
    case ArithOp::Mul:
        for (const auto& x : a_ivs)
            for (const auto& y : b_ivs) hull_pair_mul(out, x, y);
        break;
    case ArithOp::DivT: {
        auto parts = nonzero_pieces(b);
        for (const auto& x : a_ivs)
            for (const auto& y : parts) hull_pair_divT(out, x, y);
        break;
    }
    case ArithOp::Pow:
        return pow_hull(a, b);
    }
    return Domain::from_intervals(std::move(out));
}

Domain image_abs(const Domain& a) {
    std::vector<Domain::Interval> out;
    Ext zero = Ext::fin(0);
    for (const auto& iv : a.intervals()) {
        if (zero <= iv.lo) {
            out.push_back(iv);
        } else if (iv.hi <= zero) {
            out.push_back({ext_neg(iv.hi), ext_neg(iv.lo)});
        } else {
            out.push_back({zero, ext_max(ext_neg(iv.lo), iv.hi)});
        }
    }
    return Domain::from_intervals(std::move(out));
}

namespace {

// Exact rational corner with infinities, for quotient hulls.
struct QExt {
    enum class Kind { NegInf, Fin, PosInf } kind;
    mpq_class q;
    static QExt neg_inf() { return {Kind::NegInf, 0}; }
    static QExt pos_inf() { return {Kind::PosInf, 0}; }
    static QExt fin(mpq_class v) { return {Kind::Fin, std::move(v)}; }
};

bool qext_less(const QExt& a, const QExt& b) {
    if (a.kind == QExt::Kind::NegInf) return b.kind != QExt::Kind::NegInf;
    if (a.kind == QExt::Kind::PosInf) return false;
    if (b.kind == QExt::Kind::NegInf) return false;
    if (b.kind == QExt::Kind::PosInf) return true;
    return a.q < b.q;
}

// z / y with y a sign-definite nonzero corner; widens on inf/inf.
QExt qext_div(const Ext& z, const Ext& y, bool widen_down) {
    if (z.is_fin() && y.is_fin()) {
        mpq_class q(z.value, y.value);
        q.canonicalize();
        return QExt::fin(q);
    }
    if (z.is_fin()) return QExt::fin(0);  // finite / inf
    if (y.is_fin()) {
        bool pos = z.is_pos_inf() == (y.value > 0);
        return pos ? QExt::pos_inf() : QExt::neg_inf();
    }
    return widen_down ? QExt::neg_inf() : QExt::pos_inf();
}

Ext qext_ceil(const QExt& v) {
    if (v.kind == QExt::Kind::NegInf) return Ext::neg_inf();
    if (v.kind == QExt::Kind::PosInf) return Ext::pos_inf();
    return Ext::fin(ceil_div(v.q.get_num(), v.q.get_den()));
}

Ext qext_floor(const QExt& v) {
    if (v.kind == QExt::Kind::NegInf) return Ext::neg_inf();
    if (v.kind == QExt::Kind::PosInf) return Ext::pos_inf();
    return Ext::fin(floor_div(v.q.get_num(), v.q.get_den()));
}

}  // namespace

Domain quotient_hull(const Domain& c, const Domain& b) {
    if (c.is_empty()) return Domain::empty();
    bool zero_in_c = c.contains(0);
    if (zero_in_c && b.contains(0)) return Domain::full();
    auto parts = nonzero_pieces(b);
    if (parts.empty()) return zero_in_c ? Domain::full() : Domain::empty();
    Ext zl = c.lo(), zh = c.hi();
    std::vector<Domain::Interval> out;
    for (const auto& y : parts) {
        QExt corners[4] = {
            qext_div(zl, y.lo, true), qext_div(zl, y.hi, true),
            qext_div(zh, y.lo, false), qext_div(zh, y.hi, false)};
        QExt mn = corners[0], mx = corners[0];
        for (int i = 1; i < 4; ++i) {
            if (qext_less(corners[i], mn)) mn = corners[i];
            if (qext_less(mx, corners[i])) mx = corners[i];
        }
        out.push_back({qext_ceil(mn), qext_floor(mx)});
    }
    Domain d = Domain::from_intervals(std::move(out));
    if (!zero_in_c) d = d.remove(0);
    return d;
}

Domain divT_preimage_hull(const Domain& c, const Domain& b) {
    if (c.is_empty()) return Domain::empty();
    auto parts = nonzero_pieces(b);
    if (parts.empty()) return Domain::empty();
    Ext zl = c.lo(), zh = c.hi();
    std::vector<Domain::Interval> out;
    for (const auto& y : parts) {
        // |y| is maximal at the endpoint farther from zero.
        Ext mag = ext_max(image_abs(Domain::range(y.lo, y.hi)).hi(), Ext::fin(1));
        Ext slack = mag.is_fin() ? Ext::fin(mag.value - 1) : Ext::pos_inf();
        Ext c1 = ext_mul(zl, y.lo), c2 = ext_mul(zl, y.hi);
        Ext c3 = ext_mul(zh, y.lo), c4 = ext_mul(zh, y.hi);
        Ext lo = ext_min(ext_min(c1, c2), ext_min(c3, c4));
        Ext hi = ext_max(ext_max(c1, c2), ext_max(c3, c4));
        out.push_back({ext_sub(lo, slack), ext_add(hi, slack)});
    }
    return Domain::from_intervals(std::move(out));
}

}  // namespace clpz
