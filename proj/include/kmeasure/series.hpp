#ifndef KMEASURE_SERIES_HPP
#define KMEASURE_SERIES_HPP

// Truncated trivariate formal power series in q with polynomial coefficients
// in y and z over exact rationals.
//
// Storage is dense by q-layer: layer j holds the sparse (y, z) polynomial
// multiplying q^j, sorted by (y-exponent, z-exponent), with no stored zeros.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kmeasure {

using Coefficient = mpq_class;

/// Maximum retained z-exponent; std::nullopt means unbounded.
using ZCap = std::optional<int>;
inline constexpr ZCap unbounded = std::nullopt;

struct Caps {
    int q = 0;
    ZCap z = unbounded;
};

inline bool within_zcap(int ez, ZCap zcap) { return !zcap || ez <= *zcap; }

inline ZCap tighter(ZCap a, ZCap b)
{
    if (!a) return b;
    if (!b) return a;
    return std::min(*a, *b);
}

/// coeff * q^eq y^ey z^ez. A zero coefficient is allowed and stands for the
/// zero monomial (useful as a degenerate Pochhammer argument).
struct Monomial {
    Coefficient coeff{1};
    int eq = 0;
    int ey = 0;
    int ez = 0;

    Monomial() = default;
    Monomial(Coefficient c, int q_exp, int y_exp, int z_exp)
        : coeff(std::move(c)), eq(q_exp), ey(y_exp), ez(z_exp)
    {
        coeff.canonicalize();
        if (eq < 0 || ey < 0 || ez < 0)
            throw std::invalid_argument("monomial exponents must be nonnegative");
    }

    bool is_zero() const { return sgn(coeff) == 0; }
    bool is_constant() const { return eq == 0 && ey == 0 && ez == 0; }

    friend bool operator==(const Monomial& a, const Monomial& b)
    {
        return a.coeff == b.coeff && a.eq == b.eq && a.ey == b.ey && a.ez == b.ez;
    }
};

inline Monomial operator*(const Monomial& a, const Monomial& b)
{
    return Monomial(a.coeff * b.coeff, a.eq + b.eq, a.ey + b.ey, a.ez + b.ez);
}

/// a * q^s
inline Monomial shift_q(const Monomial& a, int s) { return Monomial(a.coeff, a.eq + s, a.ey, a.ez); }

inline Monomial power(const Monomial& a, int n)
{
    Monomial r(1, 0, 0, 0);
    for (int i = 0; i < n; ++i) r = r * a;
    return r;
}

/// num / den as a monomial, or nullopt when the quotient would need a
/// negative exponent or den is zero.
inline std::optional<Monomial> quotient(const Monomial& num, const Monomial& den)
{
    if (den.is_zero()) return std::nullopt;
    if (num.eq < den.eq || num.ey < den.ey || num.ez < den.ez) return std::nullopt;
    return Monomial(num.coeff / den.coeff, num.eq - den.eq, num.ey - den.ey, num.ez - den.ez);
}

/// Human-readable monomial, e.g. "q", "-yq^2", "1/2zq", "-1".
inline std::string format_monomial(const Monomial& m)
{
    std::string body;
    auto var = [&body](char v, int e) {
        if (e == 0) return;
        body += v;
        if (e > 1) body += "^" + std::to_string(e);
    };
    var('y', m.ey);
    var('z', m.ez);
    var('q', m.eq);
    if (body.empty()) return m.coeff.get_str();
    if (m.coeff == 1) return body;
    if (m.coeff == -1) return "-" + body;
    return m.coeff.get_str() + body;
}

struct Term {
    int ey;
    int ez;
    Coefficient c;
};

using Layer = std::vector<Term>;

namespace detail {

inline bool key_less(const Term& a, const Term& b)
{
    return a.ey != b.ey ? a.ey < b.ey : a.ez < b.ez;
}

// Merge two sorted layers computing a + sign*b, dropping zeros and terms
// beyond zcap.
inline Layer merge_layers(const Layer& a, const Layer& b, int sign, ZCap zcap)
{
    Layer out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, k = 0;
    auto push = [&](int ey, int ez, Coefficient c) {
        if (sgn(c) != 0 && within_zcap(ez, zcap)) out.push_back(Term{ey, ez, std::move(c)});
    };
    while (i < a.size() || k < b.size()) {
        if (k == b.size() || (i < a.size() && key_less(a[i], b[k]))) {
            push(a[i].ey, a[i].ez, a[i].c);
            ++i;
        } else if (i == a.size() || key_less(b[k], a[i])) {
            push(b[k].ey, b[k].ez, sign > 0 ? Coefficient(b[k].c) : Coefficient(-b[k].c));
            ++k;
        } else {
            push(a[i].ey, a[i].ez, sign > 0 ? Coefficient(a[i].c + b[k].c) : Coefficient(a[i].c - b[k].c));
            ++i;
            ++k;
        }
    }
    return out;
}

// Accumulates sums of products of layers into a dense (y, z) grid sized from
// the factors' exponent extents.
class ProductAccumulator {
public:
    explicit ProductAccumulator(ZCap zcap) : zcap_(zcap) {}

    void add_pair(const Layer& a, const Layer& b)
    {
        if (!a.empty() && !b.empty()) pairs_.emplace_back(&a, &b);
    }

    Layer finish()
    {
        if (pairs_.empty()) return {};
        int ymax = 0, zmax = 0;
        for (auto [a, b] : pairs_) {
            auto [ay, az] = extent(*a);
            auto [by, bz] = extent(*b);
            ymax = std::max(ymax, ay + by);
            zmax = std::max(zmax, az + bz);
        }
        if (zcap_) zmax = std::min(zmax, *zcap_);
        const int width = zmax + 1;
        std::vector<Coefficient> grid(static_cast<std::size_t>(ymax + 1) * width);
        std::vector<char> touched(grid.size(), 0);
        Coefficient tmp;
        for (auto [a, b] : pairs_) {
            for (const Term& x : *a) {
                for (const Term& y : *b) {
                    const int ez = x.ez + y.ez;
                    if (ez > zmax) continue;
                    const std::size_t idx = static_cast<std::size_t>(x.ey + y.ey) * width + ez;
                    mpq_mul(tmp.get_mpq_t(), x.c.get_mpq_t(), y.c.get_mpq_t());
                    mpq_add(grid[idx].get_mpq_t(), grid[idx].get_mpq_t(), tmp.get_mpq_t());
                    touched[idx] = 1;
                }
            }
        }
        pairs_.clear();
        Layer out;
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            if (touched[idx] && sgn(grid[idx]) != 0)
                out.push_back(Term{static_cast<int>(idx / width), static_cast<int>(idx % width), std::move(grid[idx])});
        }
        return out;
    }

private:
    static std::pair<int, int> extent(const Layer& l)
    {
        int ymax = 0, zmax = 0;
        for (const Term& t : l) {
            ymax = std::max(ymax, t.ey);
            zmax = std::max(zmax, t.ez);
        }
        return {ymax, zmax};
    }

    ZCap zcap_;
    std::vector<std::pair<const Layer*, const Layer*>> pairs_;
};

inline Layer layer_mul(const Layer& a, const Layer& b, ZCap zcap)
{
    ProductAccumulator acc(zcap);
    acc.add_pair(a, b);
    return acc.finish();
}

} // namespace detail

class TriSeries {
public:
    TriSeries() : TriSeries(0, unbounded) {}

    /// The zero series with the given caps.
    TriSeries(int qcap, ZCap zcap) : qcap_(qcap), zcap_(zcap)
    {
        if (qcap < 0) throw std::invalid_argument("qcap must be nonnegative");
        if (zcap && *zcap < 0) throw std::invalid_argument("zcap must be nonnegative");
        layers_.resize(static_cast<std::size_t>(qcap) + 1);
    }

    explicit TriSeries(Caps caps) : TriSeries(caps.q, caps.z) {}

    static TriSeries one(Caps caps)
    {
        TriSeries s(caps);
        s.layers_[0].push_back(Term{0, 0, Coefficient(1)});
        s.nterms_ = 1;
        return s;
    }

    /// Builds a series from arbitrary (possibly unsorted, duplicated or
    /// out-of-range) layer contents; normalizes to the class invariants.
    static TriSeries from_layers(Caps caps, std::vector<Layer> layers)
    {
        TriSeries s(caps);
        const std::size_t n = std::min(layers.size(), s.layers_.size());
        for (std::size_t j = 0; j < n; ++j) {
            Layer& in = layers[j];
            std::stable_sort(in.begin(), in.end(), detail::key_less);
            Layer& out = s.layers_[j];
            for (Term& t : in) {
                if (t.ey < 0 || t.ez < 0) throw std::invalid_argument("negative exponent");
                if (!within_zcap(t.ez, caps.z)) continue;
                t.c.canonicalize(); // mpq_class(num, den) leaves it reduced only by luck
                if (!out.empty() && out.back().ey == t.ey && out.back().ez == t.ez)
                    out.back().c += t.c;
                else
                    out.push_back(std::move(t));
            }
            std::erase_if(out, [](const Term& t) { return sgn(t.c) == 0; });
        }
        s.recount();
        return s;
    }

    int qcap() const { return qcap_; }
    ZCap zcap() const { return zcap_; }
    Caps caps() const { return Caps{qcap_, zcap_}; }
    const Layer& layer(int j) const { return layers_.at(static_cast<std::size_t>(j)); }
    std::size_t term_count() const { return nterms_; }
    bool is_zero() const { return nterms_ == 0; }

    Coefficient coefficient(int j, int ey, int ez) const
    {
        if (j < 0 || j > qcap_) throw std::out_of_range("beyond truncation");
        const Layer& l = layers_[static_cast<std::size_t>(j)];
        Term key{ey, ez, {}};
        auto it = std::lower_bound(l.begin(), l.end(), key, detail::key_less);
        if (it != l.end() && it->ey == ey && it->ez == ez) return it->c;
        return Coefficient(0);
    }

    friend bool operator==(const TriSeries& a, const TriSeries& b)
    {
        if (a.qcap_ != b.qcap_ || a.zcap_ != b.zcap_ || a.nterms_ != b.nterms_) return false;
        for (std::size_t j = 0; j < a.layers_.size(); ++j) {
            const Layer& x = a.layers_[j];
            const Layer& y = b.layers_[j];
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i].ey != y[i].ey || x[i].ez != y[i].ez || x[i].c != y[i].c) return false;
        }
        return true;
    }

    /// Visits every stored term in ascending (q, y, z) order.
    template <typename F>
    void for_each_term(F&& f) const
    {
        for (std::size_t j = 0; j < layers_.size(); ++j)
            for (const Term& t : layers_[j]) f(static_cast<int>(j), t.ey, t.ez, t.c);
    }

private:
    friend TriSeries add(const TriSeries&, const TriSeries&);
    friend TriSeries sub(const TriSeries&, const TriSeries&);
    friend TriSeries mul(const TriSeries&, const TriSeries&);
    friend TriSeries invert(const TriSeries&);
    friend TriSeries mul_monomial(const TriSeries&, const Monomial&);
    friend TriSeries divide_one_minus(const TriSeries&, const Monomial&);
    friend TriSeries scale_y(const TriSeries&, int);
    friend TriSeries truncate(const TriSeries&, Caps);
    friend TriSeries combine(const TriSeries&, const TriSeries&, int);

    void recount()
    {
        nterms_ = 0;
        for (const Layer& l : layers_) nterms_ += l.size();
    }

    int qcap_;
    ZCap zcap_;
    std::vector<Layer> layers_;
    std::size_t nterms_ = 0;
};

inline TriSeries combine(const TriSeries& a, const TriSeries& b, int sign)
{
    if (a.qcap_ != b.qcap_) throw std::invalid_argument("mismatched qcap");
    TriSeries r(a.qcap_, tighter(a.zcap_, b.zcap_));
    for (std::size_t j = 0; j < r.layers_.size(); ++j)
        r.layers_[j] = detail::merge_layers(a.layers_[j], b.layers_[j], sign, r.zcap_);
    r.recount();
    return r;
}

inline TriSeries add(const TriSeries& a, const TriSeries& b) { return combine(a, b, +1); }
inline TriSeries sub(const TriSeries& a, const TriSeries& b) { return combine(a, b, -1); }

inline TriSeries mul(const TriSeries& a, const TriSeries& b)
{
    if (a.qcap_ != b.qcap_) throw std::invalid_argument("mismatched qcap");
    TriSeries r(a.qcap_, tighter(a.zcap_, b.zcap_));
    for (int j = 0; j <= r.qcap_; ++j) {
        detail::ProductAccumulator acc(r.zcap_);
        for (int i = 0; i <= j; ++i) acc.add_pair(a.layers_[i], b.layers_[j - i]);
        r.layers_[j] = acc.finish();
    }
    r.recount();
    return r;
}

inline TriSeries operator+(const TriSeries& a, const TriSeries& b) { return add(a, b); }
inline TriSeries operator-(const TriSeries& a, const TriSeries& b) { return sub(a, b); }
inline TriSeries operator*(const TriSeries& a, const TriSeries& b) { return mul(a, b); }

/// Series consisting of the single monomial m, truncated to the caps.
inline TriSeries make_monomial_series(const Monomial& m, int qcap, ZCap zcap)
{
    TriSeries s(qcap, zcap);
    if (m.is_zero() || m.eq > qcap || !within_zcap(m.ez, zcap)) return s;
    std::vector<Layer> layers(static_cast<std::size_t>(qcap) + 1);
    layers[m.eq].push_back(Term{m.ey, m.ez, m.coeff});
    return TriSeries::from_layers(Caps{qcap, zcap}, std::move(layers));
}

inline TriSeries make_monomial_series(const Monomial& m, Caps caps) { return make_monomial_series(m, caps.q, caps.z); }

/// s * m
inline TriSeries mul_monomial(const TriSeries& s, const Monomial& m)
{
    TriSeries r(s.caps());
    if (m.is_zero()) return r;
    for (int j = 0; j + m.eq <= s.qcap_; ++j) {
        Layer& out = r.layers_[j + m.eq];
        for (const Term& t : s.layers_[j]) {
            if (!within_zcap(t.ez + m.ez, s.zcap_)) continue;
            out.push_back(Term{t.ey + m.ey, t.ez + m.ez, t.c * m.coeff});
        }
    }
    r.recount();
    return r;
}

/// s * (1 - m)
inline TriSeries mul_one_minus(const TriSeries& s, const Monomial& m) { return sub(s, mul_monomial(s, m)); }

/// s / (1 - m). With m.eq >= 1 this is the recurrence T_j = S_j + m T_{j - m.eq};
/// a q-constant m goes through the general inverse.
inline TriSeries invert(const TriSeries& a);

inline TriSeries divide_one_minus(const TriSeries& s, const Monomial& m)
{
    if (m.is_zero()) return s;
    if (m.eq == 0) {
        TriSeries unit = mul_one_minus(TriSeries::one(s.caps()), m);
        return mul(s, invert(unit));
    }
    TriSeries r(s.caps());
    for (int j = 0; j <= s.qcap_; ++j) {
        if (j < m.eq) {
            r.layers_[j] = s.layers_[j];
            continue;
        }
        Layer shifted;
        const Layer& prev = r.layers_[j - m.eq];
        shifted.reserve(prev.size());
        for (const Term& t : prev) {
            if (!within_zcap(t.ez + m.ez, s.zcap_)) continue;
            shifted.push_back(Term{t.ey + m.ey, t.ez + m.ez, t.c * m.coeff});
        }
        r.layers_[j] = detail::merge_layers(s.layers_[j], shifted, +1, s.zcap_);
    }
    r.recount();
    return r;
}

/// Multiplicative inverse. The q^0 layer must be 1, or 1 plus terms that all
/// carry a positive z-exponent when zcap is bounded (the inverse of that layer
/// is then a finite geometric sum).
inline TriSeries invert(const TriSeries& a)
{
    const Layer& a0 = a.layers_[0];
    bool unit_constant = false;
    bool rest_in_z = true;
    for (const Term& t : a0) {
        if (t.ey == 0 && t.ez == 0)
            unit_constant = (t.c == 1);
        else if (t.ez == 0)
            rest_in_z = false;
    }
    if (!unit_constant || !rest_in_z || (a0.size() > 1 && !a.zcap_))
        throw std::domain_error("not a formal unit under these caps");

    // inv0 = sum_{m <= zcap} r^m with r = 1 - a0; r^m has z-degree >= m.
    Layer inv0{Term{0, 0, Coefficient(1)}};
    if (a0.size() > 1) {
        Layer r;
        for (const Term& t : a0)
            if (t.ey != 0 || t.ez != 0) r.push_back(Term{t.ey, t.ez, -t.c});
        Layer power = inv0;
        for (int m = 1; m <= *a.zcap_; ++m) {
            power = detail::layer_mul(power, r, a.zcap_);
            if (power.empty()) break;
            inv0 = detail::merge_layers(inv0, power, +1, a.zcap_);
        }
    }
    const bool trivial0 = inv0.size() == 1;

    TriSeries b(a.caps());
    b.layers_[0] = inv0;
    for (int j = 1; j <= a.qcap_; ++j) {
        detail::ProductAccumulator acc(a.zcap_);
        for (int i = 1; i <= j; ++i) acc.add_pair(a.layers_[i], b.layers_[j - i]);
        Layer sum = acc.finish();
        if (!trivial0) sum = detail::layer_mul(inv0, sum, a.zcap_);
        for (Term& t : sum) t.c = -t.c;
        b.layers_[j] = std::move(sum);
    }
    b.recount();
    return b;
}

/// prod_{i=0}^{n-1} (1 - A q^{h i}); h = 0 gives (1 - A)^n.
inline TriSeries pochhammer_finite(const Monomial& A, int h, int n, Caps caps)
{
    if (h < 0 || n < 0) throw std::invalid_argument("pochhammer step and length must be nonnegative");
    TriSeries r = TriSeries::one(caps);
    if (A.is_zero()) return r;
    for (int i = 0; i < n; ++i) {
        const Monomial factor = shift_q(A, h * i);
        // Every later factor is at least as deep in q; all are 1 under the caps.
        if (factor.eq > caps.q) break;
        if (!within_zcap(factor.ez, caps.z)) break;
        r = mul_one_minus(r, factor);
    }
    return r;
}

/// prod_{i>=0} (1 - A q^{h i}); only factors with A.eq + h i <= qcap matter.
inline TriSeries pochhammer_infinite(const Monomial& A, int h, Caps caps)
{
    if (h <= 0) throw std::domain_error("divergent infinite product");
    if (!A.is_zero() && A.is_constant()) throw std::domain_error("infinite product with constant base");
    if (A.is_zero()) return TriSeries::one(caps);
    const int n = A.eq > caps.q ? 0 : (caps.q - A.eq) / h + 1;
    return pochhammer_finite(A, h, n, caps);
}

/// 1 / prod_{i=0}^{n-1} (1 - A q^{h i}), each factor divided out in turn.
inline TriSeries pochhammer_finite_inverse(const Monomial& A, int h, int n, Caps caps)
{
    TriSeries r = TriSeries::one(caps);
    if (A.is_zero()) return r;
    for (int i = 0; i < n; ++i) {
        const Monomial factor = shift_q(A, h * i);
        if (factor.eq > caps.q || !within_zcap(factor.ez, caps.z)) break;
        r = divide_one_minus(r, factor);
    }
    return r;
}

inline TriSeries pochhammer_infinite_inverse(const Monomial& A, int h, Caps caps)
{
    if (h <= 0) throw std::domain_error("divergent infinite product");
    if (!A.is_zero() && A.is_constant()) throw std::domain_error("infinite product with constant base");
    if (A.is_zero()) return TriSeries::one(caps);
    const int n = A.eq > caps.q ? 0 : (caps.q - A.eq) / h + 1;
    return pochhammer_finite_inverse(A, h, n, caps);
}

/// Substitutes y -> y q^j.
inline TriSeries scale_y(const TriSeries& s, int j)
{
    if (j < 0) throw std::invalid_argument("scale_y shift must be nonnegative");
    if (j == 0) return s;
    std::vector<Layer> layers(static_cast<std::size_t>(s.qcap_) + 1);
    for (int q = 0; q <= s.qcap_; ++q)
        for (const Term& t : s.layers_[q]) {
            const long target = q + static_cast<long>(j) * t.ey;
            if (target <= s.qcap_) layers[target].push_back(t);
        }
    return TriSeries::from_layers(s.caps(), std::move(layers));
}

/// Re-truncates to caps no larger than the current ones.
inline TriSeries truncate(const TriSeries& s, Caps caps)
{
    if (caps.q > s.qcap_) throw std::invalid_argument("cannot widen qcap");
    if (s.zcap_ && (!caps.z || *caps.z > *s.zcap_)) throw std::invalid_argument("cannot widen zcap");
    TriSeries r(caps);
    for (int j = 0; j <= caps.q; ++j)
        for (const Term& t : s.layers_[j])
            if (within_zcap(t.ez, caps.z)) r.layers_[j].push_back(t);
    r.recount();
    return r;
}

inline TriSeries negate(const TriSeries& s) { return sub(TriSeries(s.caps()), s); }

inline TriSeries scale(const TriSeries& s, const Coefficient& c) { return mul_monomial(s, Monomial(c, 0, 0, 0)); }

/// Largest |c| over stored coefficients; 0 for the zero series.
inline Coefficient max_abs_residual(const TriSeries& s)
{
    Coefficient best(0);
    s.for_each_term([&](int, int, int, const Coefficient& c) {
        if (abs(c) > best) best = abs(c);
    });
    return best;
}

inline bool has_integer_coefficients(const TriSeries& s)
{
    bool ok = true;
    s.for_each_term([&](int, int, int, const Coefficient& c) {
        if (c.get_den() != 1) ok = false;
    });
    return ok;
}

inline bool has_nonnegative_coefficients(const TriSeries& s)
{
    bool ok = true;
    s.for_each_term([&](int, int, int, const Coefficient& c) {
        if (sgn(c) < 0) ok = false;
    });
    return ok;
}

/// Evaluates y and z at rational values, leaving the q-coefficients.
inline std::vector<Coefficient> specialize_yz(const TriSeries& s, const Coefficient& y, const Coefficient& z)
{
    std::vector<Coefficient> out(static_cast<std::size_t>(s.qcap()) + 1);
    auto pw = [](const Coefficient& base, int e) {
        Coefficient r(1);
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    };
    s.for_each_term([&](int j, int ey, int ez, const Coefficient& c) { out[j] += c * pw(y, ey) * pw(z, ez); });
    return out;
}

/// Evaluates y = 1, keeping (q, z).
inline TriSeries specialize_y_one(const TriSeries& s)
{
    std::vector<Layer> layers(static_cast<std::size_t>(s.qcap()) + 1);
    s.for_each_term([&](int j, int, int ez, const Coefficient& c) { layers[j].push_back(Term{0, ez, c}); });
    return TriSeries::from_layers(s.caps(), std::move(layers));
}

/// Evaluates z = 1, keeping (q, y). The result has no z-cap.
inline TriSeries specialize_z_one(const TriSeries& s)
{
    std::vector<Layer> layers(static_cast<std::size_t>(s.qcap()) + 1);
    s.for_each_term([&](int j, int ey, int, const Coefficient& c) { layers[j].push_back(Term{ey, 0, c}); });
    return TriSeries::from_layers(Caps{s.qcap(), unbounded}, std::move(layers));
}

inline std::string to_string(const Coefficient& c) { return c.get_str(); }

/// One "c * q^j y^e z^f" line per stored term in ascending (j, e, f) order.
inline std::string render(const TriSeries& s)
{
    std::ostringstream os;
    s.for_each_term([&](int j, int ey, int ez, const Coefficient& c) {
        os << c.get_str() << " * q^" << j << " y^" << ey << " z^" << ez << '\n';
    });
    return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const TriSeries& s) { return os << render(s); }

} // namespace kmeasure

#endif // KMEASURE_SERIES_HPP
