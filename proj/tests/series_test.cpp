#include <kmeasure/series.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <tuple>
#include <vector>

#include "gtest/gtest.h"

namespace kmeasure {
namespace {

using Key = std::tuple<int, int, int>;
using Naive = std::map<Key, Coefficient>;

Monomial M(long c, int eq, int ey, int ez) { return Monomial(Coefficient(c), eq, ey, ez); }

Naive to_naive(const TriSeries& s)
{
    Naive out;
    s.for_each_term([&](int j, int e, int f, const Coefficient& c) { out[{j, e, f}] = c; });
    return out;
}

TriSeries from_naive(const Naive& n, Caps caps)
{
    std::vector<Layer> layers(static_cast<std::size_t>(caps.q) + 1);
    for (auto& [key, c] : n) {
        auto [j, e, f] = key;
        if (j <= caps.q) layers[j].push_back(Term{e, f, c});
    }
    return TriSeries::from_layers(caps, std::move(layers));
}

// Schoolbook product over all term pairs; independent of the layered kernel.
Naive naive_mul(const Naive& a, const Naive& b, Caps caps)
{
    Naive out;
    for (auto& [ka, ca] : a)
        for (auto& [kb, cb] : b) {
            const int j = std::get<0>(ka) + std::get<0>(kb);
            const int f = std::get<2>(ka) + std::get<2>(kb);
            if (j > caps.q || !within_zcap(f, caps.z)) continue;
            out[{j, std::get<1>(ka) + std::get<1>(kb), f}] += ca * cb;
        }
    std::erase_if(out, [](const auto& kv) { return sgn(kv.second) == 0; });
    return out;
}

TriSeries series_of(std::initializer_list<Monomial> ms, Caps caps)
{
    TriSeries s(caps);
    for (const Monomial& m : ms) s = add(s, make_monomial_series(m, caps));
    return s;
}

class RandomSeries {
public:
    explicit RandomSeries(unsigned seed) : rng_(seed) {}

    TriSeries operator()(Caps caps, int terms, bool unit = false)
    {
        std::uniform_int_distribution<int> q(unit ? 1 : 0, caps.q), y(0, 3), z(0, caps.z.value_or(3)), num(-5, 5),
            den(1, 3);
        std::vector<Layer> layers(static_cast<std::size_t>(caps.q) + 1);
        for (int i = 0; i < terms; ++i) layers[q(rng_)].push_back(Term{y(rng_), z(rng_), Coefficient(num(rng_), den(rng_))});
        if (unit) {
            layers[0].clear();
            layers[0].push_back(Term{0, 0, Coefficient(1)});
        }
        return TriSeries::from_layers(caps, std::move(layers));
    }

    // Unit whose q^0 layer is 1 plus z-carrying terms.
    TriSeries z_unit(Caps caps, int terms)
    {
        TriSeries s = (*this)(caps, terms, true);
        std::uniform_int_distribution<int> y(0, 2), z(1, *caps.z), num(-3, 3);
        for (int i = 0; i < 2; ++i) s = add(s, make_monomial_series(M(num(rng_), 0, y(rng_), z(rng_)), caps));
        return s;
    }

private:
    std::mt19937 rng_;
};

TEST(SeriesConstruction, MonomialSeries)
{
    const TriSeries one = make_monomial_series(M(1, 0, 0, 0), 10, unbounded);
    EXPECT_EQ(one, TriSeries::one(Caps{10, unbounded}));

    const TriSeries s = make_monomial_series(M(-1, 1, 1, 0), 10, unbounded);
    EXPECT_EQ(s.term_count(), 1u);
    EXPECT_EQ(s.coefficient(1, 1, 0), -1);

    EXPECT_TRUE(make_monomial_series(M(3, 12, 0, 0), 10, unbounded).is_zero());
    EXPECT_TRUE(make_monomial_series(M(3, 0, 0, 5), 10, 4).is_zero());
}

TEST(SeriesConstruction, RejectsNegativeCapsAndExponents)
{
    EXPECT_THROW(TriSeries(-1, unbounded), std::invalid_argument);
    EXPECT_THROW(TriSeries(3, -1), std::invalid_argument);
    EXPECT_THROW(M(1, -1, 0, 0), std::invalid_argument);
}

TEST(SeriesArithmetic, AddSub)
{
    const Caps caps{10, unbounded};
    const TriSeries a = series_of({M(1, 0, 0, 0), M(1, 1, 0, 0)}, caps);
    const TriSeries b = series_of({M(1, 0, 0, 0), M(-1, 1, 0, 0)}, caps);
    EXPECT_EQ(add(a, b), make_monomial_series(M(2, 0, 0, 0), caps));
    EXPECT_TRUE(sub(a, a).is_zero());

    const TriSeries c = series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1), M(-1, 1, 0, 1), M(1, 1, 0, 2)}, caps);
    const TriSeries d = series_of({M(1, 0, 0, 1), M(1, 1, 0, 1)}, caps);
    EXPECT_EQ(add(c, d), series_of({M(1, 0, 0, 0), M(1, 1, 0, 2)}, caps));
}

TEST(SeriesArithmetic, MismatchedQcapIsAnError)
{
    EXPECT_THROW(add(TriSeries(3, unbounded), TriSeries(4, unbounded)), std::invalid_argument);
    EXPECT_THROW(mul(TriSeries(3, unbounded), TriSeries(4, unbounded)), std::invalid_argument);
}

TEST(SeriesArithmetic, ResultTakesTighterZcap)
{
    const TriSeries a = series_of({M(1, 0, 0, 3)}, Caps{2, unbounded});
    const TriSeries b = series_of({M(1, 0, 0, 1)}, Caps{2, 2});
    const TriSeries sum = add(a, b);
    ASSERT_TRUE(sum.zcap());
    EXPECT_EQ(*sum.zcap(), 2);
    EXPECT_EQ(sum.term_count(), 1u);
}

TEST(SeriesArithmetic, MulExamples)
{
    const Caps caps{5, unbounded};
    const TriSeries a = series_of({M(1, 0, 0, 0), M(-1, 1, 0, 0)}, caps);
    const TriSeries b = series_of({M(1, 0, 0, 0), M(-1, 2, 0, 0)}, caps);
    EXPECT_EQ(mul(a, b), series_of({M(1, 0, 0, 0), M(-1, 1, 0, 0), M(-1, 2, 0, 0), M(1, 3, 0, 0)}, caps));

    const TriSeries c = series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1)}, caps);
    const TriSeries d = series_of({M(1, 0, 0, 0), M(-1, 1, 0, 1)}, caps);
    EXPECT_EQ(mul(c, d), series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1), M(-1, 1, 0, 1), M(1, 1, 0, 2)}, caps));
    EXPECT_EQ(mul(c, TriSeries::one(caps)), c);
}

TEST(SeriesArithmetic, MulAgreesWithSchoolbookProduct)
{
    RandomSeries gen(7);
    for (int trial = 0; trial < 40; ++trial) {
        const Caps caps{6, trial % 2 ? ZCap(3) : unbounded};
        const TriSeries a = gen(caps, 12);
        const TriSeries b = gen(caps, 12);
        EXPECT_EQ(mul(a, b), from_naive(naive_mul(to_naive(a), to_naive(b), caps), caps));
    }
}

TEST(SeriesProperties, RingAxioms)
{
    RandomSeries gen(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Caps caps{5, trial % 3 ? ZCap(4) : unbounded};
        const TriSeries a = gen(caps, 8), b = gen(caps, 8), c = gen(caps, 8);
        EXPECT_EQ(add(a, b), add(b, a));
        EXPECT_EQ(mul(a, b), mul(b, a));
        EXPECT_EQ(add(add(a, b), c), add(a, add(b, c)));
        EXPECT_EQ(mul(mul(a, b), c), mul(a, mul(b, c)));
        EXPECT_EQ(mul(a, add(b, c)), add(mul(a, b), mul(a, c)));
        EXPECT_TRUE(sub(a, a).is_zero());
    }
}

TEST(SeriesInvert, Examples)
{
    const Caps caps{4, unbounded};
    const TriSeries geometric = invert(series_of({M(1, 0, 0, 0), M(-1, 1, 0, 0)}, caps));
    EXPECT_EQ(geometric, series_of({M(1, 0, 0, 0), M(1, 1, 0, 0), M(1, 2, 0, 0), M(1, 3, 0, 0), M(1, 4, 0, 0)}, caps));
    EXPECT_EQ(invert(TriSeries::one(caps)), TriSeries::one(caps));
}

// Partitions of n <= N by recursion on the largest allowed part.
void each_partition(int n, int max_part, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f)
{
    if (n == 0) {
        f(cur);
        return;
    }
    for (int p = std::min(n, max_part); p >= 1; --p) {
        cur.push_back(p);
        each_partition(n - p, p, cur, f);
        cur.pop_back();
    }
}

TEST(SeriesInvert, InverseOfYqPochhammerCountsPartitionsByLength)
{
    const int N = 6;
    const Caps caps{N, unbounded};
    Naive oracle;
    for (int n = 0; n <= N; ++n) {
        std::vector<int> cur;
        each_partition(n, n, cur, [&](const std::vector<int>& p) { oracle[{n, static_cast<int>(p.size()), 0}] += 1; });
    }
    const TriSeries inv = invert(pochhammer_infinite(M(1, 1, 1, 0), 1, caps));
    EXPECT_EQ(inv, from_naive(oracle, caps));
    EXPECT_EQ(inv, pochhammer_infinite_inverse(M(1, 1, 1, 0), 1, caps));

    // The stated small case: 1 + yq + (y + y^2) q^2 + (y + y^2 + y^3) q^3.
    const Caps small{3, unbounded};
    EXPECT_EQ(invert(pochhammer_infinite(M(1, 1, 1, 0), 1, small)),
              series_of({M(1, 0, 0, 0), M(1, 1, 1, 0), M(1, 2, 1, 0), M(1, 2, 2, 0), M(1, 3, 1, 0), M(1, 3, 2, 0),
                         M(1, 3, 3, 0)},
                        small));
}

TEST(SeriesInvert, NonUnitIsRejected)
{
    const Caps caps{4, unbounded};
    EXPECT_THROW(invert(make_monomial_series(M(2, 0, 0, 0), caps)), std::domain_error);
    EXPECT_THROW(invert(TriSeries(caps)), std::domain_error);
    // 1 - z needs a bounded zcap; 1 - y is never a unit here.
    EXPECT_THROW(invert(series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1)}, caps)), std::domain_error);
    EXPECT_THROW(invert(series_of({M(1, 0, 0, 0), M(-1, 0, 1, 0)}, Caps{4, 3})), std::domain_error);
}

TEST(SeriesInvert, ZConstantLayerWithBoundedZcap)
{
    const Caps caps{3, 4};
    const TriSeries inv = invert(series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1)}, caps));
    EXPECT_EQ(inv, series_of({M(1, 0, 0, 0), M(1, 0, 0, 1), M(1, 0, 0, 2), M(1, 0, 0, 3), M(1, 0, 0, 4)}, caps));
}

TEST(SeriesProperties, InvertRoundTrip)
{
    RandomSeries gen(23);
    for (int trial = 0; trial < 30; ++trial) {
        const Caps caps{6, 4};
        const TriSeries a = trial % 2 ? gen(caps, 10, true) : gen.z_unit(caps, 10);
        EXPECT_EQ(mul(a, invert(a)), TriSeries::one(caps)) << render(a);
    }
}

TEST(SeriesProperties, DivideOneMinusMatchesInverse)
{
    RandomSeries gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Caps caps{7, trial % 2 ? ZCap(3) : unbounded};
        const TriSeries s = gen(caps, 10);
        const Monomial m = M(trial % 3 - 1 ? 2 : -1, 1 + trial % 3, trial % 2, trial % 4 == 1);
        const TriSeries unit = mul_one_minus(TriSeries::one(caps), m);
        EXPECT_EQ(divide_one_minus(s, m), mul(s, invert(unit)));
    }
}

TEST(Pochhammer, FiniteExamples)
{
    const Caps caps{10, unbounded};
    EXPECT_EQ(pochhammer_finite(M(1, 0, 0, 1), 1, 2, caps),
              series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1), M(-1, 1, 0, 1), M(1, 1, 0, 2)}, caps));
    EXPECT_EQ(pochhammer_finite(M(1, 0, 0, 1), 0, 2, caps), series_of({M(1, 0, 0, 0), M(-2, 0, 0, 1), M(1, 0, 0, 2)}, caps));
    EXPECT_EQ(pochhammer_finite(M(-1, 0, 0, 0), 1, 2, caps), series_of({M(2, 0, 0, 0), M(2, 1, 0, 0)}, caps));
    EXPECT_EQ(pochhammer_finite(M(5, 1, 2, 3), 1, 0, caps), TriSeries::one(caps));
}

TEST(Pochhammer, InfiniteExamples)
{
    // (-q;q^2)_inf against a distinct-odd-parts count.
    const int N = 6;
    const Caps caps{N, unbounded};
    const TriSeries odd = pochhammer_infinite(M(-1, 1, 0, 0), 2, caps);
    for (int n = 0; n <= N; ++n) {
        long count = 0;
        std::vector<int> cur;
        each_partition(n, n, cur, [&](const std::vector<int>& p) {
            bool ok = true;
            for (std::size_t i = 0; i < p.size(); ++i)
                if (p[i] % 2 == 0 || (i && p[i] == p[i - 1])) ok = false;
            if (ok) ++count;
        });
        EXPECT_EQ(odd.coefficient(n, 0, 0), count) << "n=" << n;
    }

    const Caps zc{2, 2};
    EXPECT_EQ(pochhammer_infinite(M(1, 0, 0, 1), 1, zc),
              mul(mul(series_of({M(1, 0, 0, 0), M(-1, 0, 0, 1)}, zc), series_of({M(1, 0, 0, 0), M(-1, 1, 0, 1)}, zc)),
                  series_of({M(1, 0, 0, 0), M(-1, 2, 0, 1)}, zc)));

    // (1 - yq)(1 - yq^2)(1 - yq^3) expanded by hand.
    const Caps c3{3, unbounded};
    EXPECT_EQ(pochhammer_infinite(M(1, 1, 1, 0), 1, c3),
              series_of({M(1, 0, 0, 0), M(-1, 1, 1, 0), M(-1, 2, 1, 0), M(1, 3, 2, 0), M(-1, 3, 1, 0)}, c3));
}

TEST(Pochhammer, InfiniteErrors)
{
    const Caps caps{5, unbounded};
    EXPECT_THROW(pochhammer_infinite(M(1, 1, 0, 0), 0, caps), std::domain_error);
    EXPECT_THROW(pochhammer_infinite(M(1, 0, 0, 0), 1, caps), std::domain_error);
}

TEST(Pochhammer, CocycleAndSplitting)
{
    const Caps caps{12, 6};
    const std::vector<Monomial> bases{M(1, 0, 0, 1), M(-1, 1, 1, 0), M(3, 2, 0, 1), M(-1, 0, 0, 0)};
    for (const Monomial& A : bases)
        for (int h = 0; h <= 3; ++h)
            for (int n = 0; n <= 4; ++n)
                for (int m = 0; m <= 3; ++m)
                    EXPECT_EQ(mul(pochhammer_finite(A, h, n, caps), pochhammer_finite(shift_q(A, h * n), h, m, caps)),
                              pochhammer_finite(A, h, n + m, caps));
    for (const Monomial& A : {M(1, 0, 0, 1), M(-1, 1, 1, 0), M(2, 1, 0, 0)})
        for (int h = 1; h <= 3; ++h)
            for (int n = 0; h * n <= caps.q; ++n)
                EXPECT_EQ(pochhammer_infinite(A, h, caps),
                          mul(pochhammer_finite(A, h, n, caps), pochhammer_infinite(shift_q(A, h * n), h, caps)));
}

TEST(ScaleY, Examples)
{
    const Caps caps{10, unbounded};
    EXPECT_EQ(scale_y(series_of({M(1, 1, 1, 0)}, caps), 1), series_of({M(1, 2, 1, 0)}, caps));
    const TriSeries s = series_of({M(1, 0, 0, 0), M(1, 1, 1, 0), M(1, 3, 2, 0)}, caps);
    EXPECT_EQ(scale_y(s, 0), s);
    EXPECT_EQ(scale_y(s, 2), series_of({M(1, 0, 0, 0), M(1, 3, 1, 0), M(1, 7, 2, 0)}, caps));
    // Terms pushed past qcap are dropped.
    EXPECT_EQ(scale_y(s, 4), series_of({M(1, 0, 0, 0), M(1, 5, 1, 0)}, caps));
}

TEST(ScaleY, Composes)
{
    RandomSeries gen(3);
    for (int trial = 0; trial < 20; ++trial) {
        const TriSeries s = gen(Caps{9, unbounded}, 15);
        for (int i = 0; i <= 3; ++i)
            for (int j = 0; j <= 3; ++j) EXPECT_EQ(scale_y(scale_y(s, i), j), scale_y(s, i + j));
    }
}

TEST(Coefficient, LookupAndBounds)
{
    const Caps caps{4, unbounded};
    const TriSeries s = pochhammer_finite(M(1, 0, 0, 1), 1, 2, caps);
    EXPECT_EQ(s.coefficient(1, 0, 2), 1);
    EXPECT_EQ(s.coefficient(3, 1, 1), 0);
    EXPECT_EQ(TriSeries(caps).coefficient(2, 0, 0), 0);
    EXPECT_THROW(s.coefficient(5, 0, 0), std::out_of_range);
    EXPECT_TRUE(sub(s, s).is_zero());
    EXPECT_EQ(max_abs_residual(TriSeries(caps)), 0);
    EXPECT_EQ(max_abs_residual(series_of({M(-7, 1, 0, 0), M(3, 2, 0, 0)}, caps)), 7);
}

TEST(Truncation, ConsistentAcrossConstructorsAndOperations)
{
    const int big = 12, small = 7;
    const Caps B{big, 6}, S{small, 4};
    auto check = [&](const std::function<TriSeries(Caps)>& build) { EXPECT_EQ(truncate(build(B), S), build(S)); };
    check([](Caps c) { return pochhammer_finite(M(1, 0, 0, 1), 1, 5, c); });
    check([](Caps c) { return pochhammer_finite(M(-1, 1, 1, 0), 2, 4, c); });
    check([](Caps c) { return pochhammer_infinite(M(1, 1, 1, 1), 1, c); });
    check([](Caps c) { return invert(pochhammer_infinite(M(1, 0, 0, 1), 1, c)); });
    check([](Caps c) { return pochhammer_infinite_inverse(M(1, 1, 1, 0), 1, c); });
    check([](Caps c) { return scale_y(pochhammer_infinite_inverse(M(1, 1, 1, 0), 1, c), 2); });
    check([](Caps c) {
        return mul(pochhammer_infinite(M(-1, 1, 1, 0), 1, c), pochhammer_finite(M(1, 0, 0, 1), 2, 3, c));
    });
    check([](Caps c) { return make_monomial_series(M(4, 5, 1, 3), c); });
}

TEST(Render, GoldenFiles)
{
    auto golden = [](const std::string& name) {
        std::ifstream in(std::string(KMEASURE_GOLDEN_DIR) + "/" + name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    EXPECT_EQ(render(pochhammer_finite(M(1, 0, 0, 1), 1, 2, Caps{10, unbounded})), golden("z_pochhammer_2.txt"));
    EXPECT_EQ(render(invert(series_of({M(1, 0, 0, 0), Monomial(Coefficient(-1, 2), 1, 1, 0)}, Caps{3, unbounded}))),
              golden("half_geometric.txt"));
    EXPECT_EQ(render(TriSeries(Caps{3, unbounded})), "");
}

TEST(Specialize, EvaluatesYAndZ)
{
    const Caps caps{3, unbounded};
    const TriSeries s = pochhammer_finite(M(1, 0, 0, 1), 1, 2, caps);
    const auto at_one = specialize_yz(s, 1, 1);
    EXPECT_EQ(at_one[0], 0);
    EXPECT_EQ(at_one[1], 0);
    const auto at_half = specialize_yz(s, 1, Coefficient(1, 2));
    EXPECT_EQ(at_half[0], Coefficient(1, 2));
    EXPECT_EQ(at_half[1], Coefficient(-1, 4));
    EXPECT_EQ(specialize_z_one(s), TriSeries(Caps{3, unbounded}));
}

} // namespace
} // namespace kmeasure
