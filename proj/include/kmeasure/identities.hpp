#ifndef KMEASURE_IDENTITIES_HPP
#define KMEASURE_IDENTITIES_HPP

// Closed-form sides of the k-measure generating-function identities and the
// classical q-series identities they rest on, plus coefficient-exact checks.
//
// Every infinite sum below is cut off at the first index whose summand has
// minimum q-order (or z-order) beyond the caps; the bound is stated at each
// builder.

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "partitions.hpp"
#include "series.hpp"

namespace kmeasure {

struct FirstFailure {
    int q = 0;
    int y = 0;
    int z = 0;
    Coefficient lhs;
    Coefficient rhs;
};

/// Outcome of a single verification.
///
/// Histogram-style checks (Sylvester, Corollary-type counts) report the failing
/// n in `q`, the statistic value in `z`, and leave `y` at 0.
struct IdentityReport {
    std::string name;
    std::string params; // parameter label for building-block checks, else empty
    std::optional<int> k;
    int qcap = 0;
    ZCap zcap = unbounded;
    bool passed = false;
    std::optional<FirstFailure> first_failure;
    double elapsed_ms = 0.0;
};

namespace detail {

inline Monomial mono(long c, int eq, int ey, int ez) { return Monomial(Coefficient(c), eq, ey, ez); }

class Stopwatch {
public:
    double elapsed_ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

} // namespace detail

/// Compares two series under their common caps. The first failure is the
/// smallest (q, y, z) where the residual is nonzero.
inline IdentityReport compare_series(std::string name, std::optional<int> k, const TriSeries& lhs, const TriSeries& rhs)
{
    IdentityReport r;
    r.name = std::move(name);
    r.k = k;
    const TriSeries residual = sub(lhs, rhs);
    r.qcap = residual.qcap();
    r.zcap = residual.zcap();
    r.passed = residual.is_zero();
    if (!r.passed) {
        bool first = true;
        residual.for_each_term([&](int j, int ey, int ez, const Coefficient&) {
            if (!first) return;
            first = false;
            r.first_failure = FirstFailure{j, ey, ez, lhs.coefficient(j, ey, ez), rhs.coefficient(j, ey, ez)};
        });
    }
    return r;
}

// ---------------------------------------------------------------------------
// Partition generating functions in closed form
// ---------------------------------------------------------------------------

/// 1/(yq;q)_inf * sum_n (-1)^n y^n q^{n(n+1)/2} (z;q^h)_n / (q;q)_n.
/// With h = k-1 this is the length/k-measure series of all partitions; with
/// h = k it is the first series of the nonnegativity corollary.
/// Summand n has q-order >= n(n+1)/2.
inline TriSeries p_type_sum(int h, int qcap)
{
    if (h < 0) throw std::invalid_argument("base step must be nonnegative");
    const Caps caps{qcap, unbounded};
    TriSeries sum = TriSeries::one(caps);
    TriSeries zpoch = TriSeries::one(caps);       // (z;q^h)_n
    TriSeries qpoch_inv = TriSeries::one(caps);   // 1/(q;q)_n
    for (int n = 1; n * (n + 1) / 2 <= qcap; ++n) {
        zpoch = mul_one_minus(zpoch, detail::mono(1, h * (n - 1), 0, 1));
        qpoch_inv = divide_one_minus(qpoch_inv, detail::mono(1, n, 0, 0));
        const Monomial lead = detail::mono(n % 2 ? -1 : 1, n * (n + 1) / 2, n, 0);
        sum = add(sum, mul_monomial(mul(zpoch, qpoch_inv), lead));
    }
    return mul(sum, pochhammer_infinite_inverse(detail::mono(1, 1, 1, 0), 1, caps));
}

inline TriSeries rhs_theorem_P_sum(int k, int qcap)
{
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    return p_type_sum(k - 1, qcap);
}

/// (z;q^{k-1})_inf * sum_{n=0}^{zcap} z^n / ((q^{k-1};q^{k-1})_n (yq;q)_{(k-1)n}).
/// Summand n has z-degree exactly n.
inline TriSeries rhs_theorem_P_product(int k, int qcap, ZCap zcap)
{
    if (k == 1) throw std::domain_error("degenerate base q^0");
    if (k < 1) throw std::invalid_argument("k must be >= 2");
    if (!zcap) throw std::invalid_argument("product form needs a bounded zcap");
    const Caps caps{qcap, zcap};
    const int h = k - 1;
    TriSeries term = TriSeries::one(caps);
    TriSeries sum = term;
    for (int n = 1; n <= *zcap; ++n) {
        term = mul_monomial(term, detail::mono(1, 0, 0, 1));
        term = divide_one_minus(term, detail::mono(1, h * n, 0, 0));
        for (int i = h * (n - 1) + 1; i <= h * n && i <= qcap; ++i)
            term = divide_one_minus(term, detail::mono(1, i, 1, 0));
        sum = add(sum, term);
    }
    return mul(pochhammer_infinite(detail::mono(1, 0, 0, 1), h, caps), sum);
}

/// (-yq;q)_inf * sum_n (-1)^n y^n q^n (z;q^k)_n / (q;q)_n. Summand n has
/// q-order >= n.
inline TriSeries rhs_theorem_D_sum(int k, int qcap)
{
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    const Caps caps{qcap, unbounded};
    TriSeries sum = TriSeries::one(caps);
    TriSeries zpoch = TriSeries::one(caps);
    TriSeries qpoch_inv = TriSeries::one(caps);
    for (int n = 1; n <= qcap; ++n) {
        zpoch = mul_one_minus(zpoch, detail::mono(1, k * (n - 1), 0, 1));
        qpoch_inv = divide_one_minus(qpoch_inv, detail::mono(1, n, 0, 0));
        const Monomial lead = detail::mono(n % 2 ? -1 : 1, n, n, 0);
        sum = add(sum, mul_monomial(mul(zpoch, qpoch_inv), lead));
    }
    return mul(pochhammer_infinite(detail::mono(-1, 1, 1, 0), 1, caps), sum);
}

/// (z;q^k)_inf * sum_{n=0}^{zcap} (-yq;q)_{kn} z^n / (q^k;q^k)_n. Summand n has
/// z-degree exactly n.
inline TriSeries rhs_theorem_D_product(int k, int qcap, ZCap zcap)
{
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!zcap) throw std::invalid_argument("product form needs a bounded zcap");
    const Caps caps{qcap, zcap};
    TriSeries term = TriSeries::one(caps);
    TriSeries sum = term;
    for (int n = 1; n <= *zcap; ++n) {
        term = mul_monomial(term, detail::mono(1, 0, 0, 1));
        term = divide_one_minus(term, detail::mono(1, k * n, 0, 0));
        for (int i = k * (n - 1) + 1; i <= k * n && i <= qcap; ++i)
            term = mul_one_minus(term, detail::mono(-1, i, 1, 0));
        sum = add(sum, term);
    }
    return mul(pochhammer_infinite(detail::mono(1, 0, 0, 1), k, caps), sum);
}

/// sum_n y^n z^n q^{n^2} / ((yq;q)_n (q;q)_n), n^2 <= qcap.
inline TriSeries durfee_closed_form(int qcap)
{
    const Caps caps{qcap, unbounded};
    TriSeries sum = TriSeries::one(caps);
    for (int n = 1; n * n <= qcap; ++n) {
        const TriSeries denom = mul(pochhammer_finite(detail::mono(1, 1, 1, 0), 1, n, caps),
                                    pochhammer_finite(detail::mono(1, 1, 0, 0), 1, n, caps));
        sum = add(sum, mul_monomial(invert(denom), detail::mono(1, n * n, n, n)));
    }
    return sum;
}

// ---------------------------------------------------------------------------
// q-difference equations
// ---------------------------------------------------------------------------

/// F(y) - F(yq) - yzq/(yq;q)_k F(yq^k) with F the enumerated series.
inline TriSeries qdiff_residual_F(int k, int qcap)
{
    const TriSeries F = gf_enumerated(qcap, k, Family::all);
    const Caps caps = F.caps();
    const TriSeries factor =
        mul_monomial(invert(pochhammer_finite(detail::mono(1, 1, 1, 0), 1, k, caps)), detail::mono(1, 1, 1, 1));
    return sub(sub(F, scale_y(F, 1)), mul(factor, scale_y(F, k)));
}

/// G(y) - G(yq) - yzq (-yq^2;q)_{k-1} G(yq^k) with G the enumerated series.
inline TriSeries qdiff_residual_G(int k, int qcap)
{
    const TriSeries G = gf_enumerated(qcap, k, Family::distinct);
    const Caps caps = G.caps();
    const TriSeries factor =
        mul_monomial(pochhammer_finite(detail::mono(-1, 2, 1, 0), 1, k - 1, caps), detail::mono(1, 1, 1, 1));
    return sub(sub(G, scale_y(G, 1)), mul(factor, scale_y(G, k)));
}

// ---------------------------------------------------------------------------
// Classical building blocks, specialized at monomial parameters
// ---------------------------------------------------------------------------

namespace detail {

// Largest m such that a summand carrying t^m still fits under the caps, given
// extra q-order `extra(m)` from the summand. Used only for termination.
inline bool power_fits(const Monomial& t, int m, int extra, Caps caps)
{
    const long qorder = static_cast<long>(t.eq) * m + extra;
    if (qorder > caps.q) return false;
    if (caps.z && static_cast<long>(t.ez) * m > *caps.z) return false;
    return true;
}

} // namespace detail

using SeriesPair = std::pair<TriSeries, TriSeries>;

/// sum_m t^m/(q;q)_m = 1/(t;q)_inf.
/// Summand m has q-order m*t.eq and z-degree m*t.ez.
inline SeriesPair euler_first_sides(const Monomial& t, int qcap, ZCap zcap)
{
    if (t.is_constant()) throw std::invalid_argument("euler_first needs a non-constant parameter");
    if (t.eq == 0 && !(zcap && t.ez >= 1))
        throw std::invalid_argument("euler_first with a q-free parameter needs a z-exponent and a bounded zcap");
    const Caps caps{qcap, zcap};
    TriSeries lhs = TriSeries::one(caps);
    TriSeries term = lhs;
    for (int m = 1; detail::power_fits(t, m, 0, caps); ++m) {
        term = divide_one_minus(mul_monomial(term, t), detail::mono(1, m, 0, 0));
        lhs = add(lhs, term);
    }
    return {std::move(lhs), invert(pochhammer_infinite(t, 1, caps))};
}

/// sum_m (-t)^m q^{m(m-1)/2}/(q;q)_m = (t;q)_inf.
/// Summand m has q-order m*t.eq + m(m-1)/2.
inline SeriesPair euler_second_sides(const Monomial& t, int qcap, ZCap zcap)
{
    if (t.is_constant()) throw std::invalid_argument("euler_second needs a non-constant parameter");
    const Caps caps{qcap, zcap};
    TriSeries lhs = TriSeries::one(caps);
    TriSeries term = lhs;
    const Monomial neg_t(-t.coeff, t.eq, t.ey, t.ez);
    for (int m = 1; static_cast<long>(m) * (m - 1) / 2 <= qcap && detail::power_fits(t, m, m * (m - 1) / 2, caps); ++m) {
        term = divide_one_minus(mul_monomial(term, shift_q(neg_t, m - 1)), detail::mono(1, m, 0, 0));
        lhs = add(lhs, term);
    }
    return {std::move(lhs), pochhammer_infinite(t, 1, caps)};
}

/// sum_n (a;q)_n q^{n(n+1)/2}/(q;q)_n = (-q;q)_inf (aq;q^2)_inf.
/// Summand n has q-order >= n(n+1)/2.
inline SeriesPair bailey_daum_sides(const Monomial& a, int qcap)
{
    const Caps caps{qcap, unbounded};
    TriSeries lhs = TriSeries::one(caps);
    TriSeries apoch = TriSeries::one(caps);
    TriSeries qpoch_inv = TriSeries::one(caps);
    for (int n = 1; n * (n + 1) / 2 <= qcap; ++n) {
        apoch = mul_one_minus(apoch, shift_q(a, n - 1));
        qpoch_inv = divide_one_minus(qpoch_inv, detail::mono(1, n, 0, 0));
        lhs = add(lhs, mul_monomial(mul(apoch, qpoch_inv), detail::mono(1, n * (n + 1) / 2, 0, 0)));
    }
    TriSeries rhs =
        mul(pochhammer_infinite(detail::mono(-1, 1, 0, 0), 1, caps), pochhammer_infinite(shift_q(a, 1), 2, caps));
    return {std::move(lhs), std::move(rhs)};
}

/// (z;q)_inf sum_n z^n/((q;q)_n (yq;q)_n) against the Durfee-square sum.
/// Left summand n has z-degree n.
inline SeriesPair heine_limit_sides(int qcap, ZCap zcap)
{
    if (!zcap) throw std::invalid_argument("heine_limit_identity needs a bounded zcap");
    const Caps caps{qcap, zcap};
    TriSeries term = TriSeries::one(caps);
    TriSeries sum = term;
    for (int n = 1; n <= *zcap; ++n) {
        term = mul_monomial(term, detail::mono(1, 0, 0, 1));
        term = divide_one_minus(term, detail::mono(1, n, 0, 0));
        term = divide_one_minus(term, detail::mono(1, n, 1, 0));
        sum = add(sum, term);
    }
    return {mul(pochhammer_infinite(detail::mono(1, 0, 0, 1), 1, caps), sum), durfee_closed_form(qcap)};
}

namespace detail {

inline IdentityReport timed_compare(std::string name, std::string params, const std::function<SeriesPair()>& sides)
{
    Stopwatch clock;
    auto [lhs, rhs] = sides();
    IdentityReport r = compare_series(std::move(name), std::nullopt, lhs, rhs);
    r.params = std::move(params);
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

} // namespace detail

inline IdentityReport euler_first(const Monomial& t, int qcap, ZCap zcap)
{
    return detail::timed_compare("euler_first", "t=" + format_monomial(t), [&] { return euler_first_sides(t, qcap, zcap); });
}

inline IdentityReport euler_second(const Monomial& t, int qcap, ZCap zcap)
{
    return detail::timed_compare("euler_second", "t=" + format_monomial(t), [&] { return euler_second_sides(t, qcap, zcap); });
}

inline IdentityReport bailey_daum_special(const Monomial& a, int qcap)
{
    return detail::timed_compare("bailey_daum", "a=" + format_monomial(a), [&] { return bailey_daum_sides(a, qcap); });
}

inline IdentityReport heine_limit_identity(int qcap, ZCap zcap)
{
    return detail::timed_compare("heine_limit", "", [&] { return heine_limit_sides(qcap, zcap); });
}

struct HeineParameters {
    Monomial a;
    Monomial b;
    Monomial c;
    Monomial t;
    int h = 1;
};

/// Both sides of the generalized Heine transformation
///   sum (a;q^h)_n (b;q)_{hn} t^n / ((q^h;q^h)_n (c;q)_{hn})
///     = (b;q)_inf (at;q^h)_inf / ((c;q)_inf (t;q^h)_inf)
///       * sum (c/b;q)_n (t;q^h)_n b^n / ((q;q)_n (at;q^h)_n).
inline SeriesPair generalized_heine_sides(const HeineParameters& p, int qcap, ZCap zcap)
{
    const auto& [a, b, c, t, h] = p;
    if (h < 1) throw std::invalid_argument("parameter specialization unsupported");
    if (t.eq < 1 || c.eq < 1) throw std::invalid_argument("parameter specialization unsupported");
    if (b.is_zero() || (b.eq < 1 && !(zcap && b.ez >= 1))) throw std::invalid_argument("parameter specialization unsupported");
    const std::optional<Monomial> c_over_b = quotient(c, b);
    if (!c_over_b) throw std::invalid_argument("parameter specialization unsupported");

    const Caps caps{qcap, zcap};
    const Monomial at = a * t;

    // Left summand n carries t^n: q-order >= n*t.eq.
    TriSeries lhs = TriSeries::one(caps);
    for (int n = 1; detail::power_fits(t, n, 0, caps); ++n) {
        TriSeries num = mul(pochhammer_finite(a, h, n, caps), pochhammer_finite(b, 1, h * n, caps));
        TriSeries den = mul(pochhammer_finite(detail::mono(1, h, 0, 0), h, n, caps), pochhammer_finite(c, 1, h * n, caps));
        lhs = add(lhs, mul_monomial(mul(num, invert(den)), power(t, n)));
    }

    // Right summand n carries b^n.
    TriSeries sum = TriSeries::one(caps);
    for (int n = 1; detail::power_fits(b, n, 0, caps); ++n) {
        TriSeries num = mul(pochhammer_finite(*c_over_b, 1, n, caps), pochhammer_finite(t, h, n, caps));
        TriSeries den = mul(pochhammer_finite(detail::mono(1, 1, 0, 0), 1, n, caps), pochhammer_finite(at, h, n, caps));
        sum = add(sum, mul_monomial(mul(num, invert(den)), power(b, n)));
    }
    const TriSeries prefactor_num = mul(pochhammer_infinite(b, 1, caps), pochhammer_infinite(at, h, caps));
    const TriSeries prefactor_den = mul(pochhammer_infinite(c, 1, caps), pochhammer_infinite(t, h, caps));
    const TriSeries rhs = mul(mul(prefactor_num, invert(prefactor_den)), sum);
    return {lhs, rhs};
}

inline IdentityReport generalized_heine(const HeineParameters& p, int qcap, ZCap zcap)
{
    return detail::timed_compare("generalized_heine",
                                 "a=" + format_monomial(p.a) + ";b=" + format_monomial(p.b) + ";c=" +
                                     format_monomial(p.c) + ";t=" + format_monomial(p.t) + ";h=" + std::to_string(p.h),
                                 [&] { return generalized_heine_sides(p, qcap, zcap); });
}

// ---------------------------------------------------------------------------
// Corollary-level checks
// ---------------------------------------------------------------------------

struct SignedCountRow {
    int n = 0;
    Coefficient signed_enumeration;
    long distinct_odd = 0;
    Coefficient product_coefficient;
};

/// For each n <= qcap: sum over partitions of n of (-1)^(length + mu_2), the
/// number of partitions of n into distinct odd parts, and [q^n](-q;q^2)_inf.
inline std::vector<SignedCountRow> signed_count_rows(int qcap)
{
    std::vector<SignedCountRow> rows(static_cast<std::size_t>(qcap) + 1);
    const TriSeries product = pochhammer_infinite(detail::mono(-1, 1, 0, 0), 2, Caps{qcap, unbounded});
    for (int n = 0; n <= qcap; ++n) {
        SignedCountRow& row = rows[n];
        row.n = n;
        long s = 0;
        for (const Partition& p : enumerate(n, Family::all))
            s += (static_cast<int>(p.length()) + kmeasure_greedy(p, 2)) % 2 ? -1 : 1;
        row.signed_enumeration = s;
        for (const Partition& p : enumerate(n, Family::distinct)) {
            const auto parts = p.parts();
            if (std::all_of(parts.begin(), parts.end(), [](int v) { return v % 2 == 1; })) ++row.distinct_odd;
        }
        row.product_coefficient = product.coefficient(n, 0, 0);
    }
    return rows;
}

inline IdentityReport corollary_P2_check(int qcap)
{
    detail::Stopwatch clock;
    IdentityReport r;
    r.name = "corollary_P2";
    r.qcap = qcap;
    r.passed = true;
    for (const SignedCountRow& row : signed_count_rows(qcap)) {
        const Coefficient odd(row.distinct_odd);
        if (row.signed_enumeration != odd || row.product_coefficient != odd) {
            r.passed = false;
            r.first_failure = FirstFailure{row.n, 0, 0, row.signed_enumeration,
                                           row.signed_enumeration != odd ? odd : row.product_coefficient};
            break;
        }
    }
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

/// Every coefficient of the closed-form series is a nonnegative integer. The
/// all-partitions family covers both the (z;q^{k-1})_n and (z;q^k)_n variants.
inline IdentityReport nonnegativity_check(int k, int qcap, Family family)
{
    detail::Stopwatch clock;
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    IdentityReport r;
    r.name = family == Family::all ? "nonnegativity_P" : "nonnegativity_D";
    r.k = k;
    r.qcap = qcap;
    r.passed = true;
    std::vector<TriSeries> series;
    if (family == Family::all) {
        series.push_back(p_type_sum(k - 1, qcap));
        series.push_back(p_type_sum(k, qcap));
    } else {
        series.push_back(rhs_theorem_D_sum(k, qcap));
    }
    for (const TriSeries& s : series) {
        s.for_each_term([&](int j, int ey, int ez, const Coefficient& c) {
            if (r.passed && (sgn(c) < 0 || c.get_den() != 1)) {
                r.passed = false;
                r.first_failure = FirstFailure{j, ey, ez, c, Coefficient(0)};
            }
        });
    }
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

/// Length/2-measure series equals length/Durfee series, and both equal the
/// Durfee closed form.
inline IdentityReport equidistribution_check(int qcap)
{
    detail::Stopwatch clock;
    const TriSeries mu2 = gf_enumerated(qcap, 2, Family::all);
    const TriSeries dur = gf_durfee_enumerated(qcap);
    IdentityReport r = compare_series("equidistribution", 2, mu2, dur);
    if (r.passed) {
        IdentityReport closed = compare_series("equidistribution", 2, mu2, durfee_closed_form(qcap));
        r.passed = closed.passed;
        r.first_failure = closed.first_failure;
    }
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

inline IdentityReport sylvester_check(int n_max)
{
    detail::Stopwatch clock;
    IdentityReport r;
    r.name = "sylvester";
    r.qcap = n_max;
    r.passed = true;
    for (int n = 0; n <= n_max && r.passed; ++n) {
        const SylvesterCounts c = sylvester_counts(n);
        if (c.odd_by_distinct_values == c.distinct_by_runs) continue;
        r.passed = false;
        std::map<int, long> keys = c.odd_by_distinct_values;
        for (auto& [v, _] : c.distinct_by_runs) keys[v];
        for (auto& [v, _] : keys) {
            auto get = [v](const std::map<int, long>& m) {
                auto it = m.find(v);
                return it == m.end() ? 0L : it->second;
            };
            if (get(c.odd_by_distinct_values) != get(c.distinct_by_runs)) {
                r.first_failure = FirstFailure{n, 0, v, Coefficient(get(c.odd_by_distinct_values)),
                                               Coefficient(get(c.distinct_by_runs))};
                break;
            }
        }
    }
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

/// Greedy k-measure against exhaustive search for every partition of n <= n_max.
inline IdentityReport kmeasure_oracle_check(int k, int n_max)
{
    detail::Stopwatch clock;
    IdentityReport r;
    r.name = "kmeasure_greedy";
    r.k = k;
    r.qcap = n_max;
    r.passed = true;
    for (int n = 0; n <= n_max && r.passed; ++n) {
        for (const Partition& p : enumerate(n, Family::all)) {
            const int g = kmeasure_greedy(p, k);
            const int b = kmeasure_bruteforce(p, k);
            if (g != b) {
                r.passed = false;
                r.first_failure = FirstFailure{n, static_cast<int>(p.length()), b, Coefficient(g), Coefficient(b)};
                break;
            }
        }
    }
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

} // namespace kmeasure

#endif // KMEASURE_IDENTITIES_HPP
