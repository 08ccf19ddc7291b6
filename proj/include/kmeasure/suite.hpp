#ifndef KMEASURE_SUITE_HPP
#define KMEASURE_SUITE_HPP

// Registry of named verification checks and a parallel runner that returns
// reports in deterministic (name, params, k) order.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fnmatch.h>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "identities.hpp"

namespace kmeasure {

struct SuiteConfig {
    int qcap = 20;
    int zcap = 20;
    std::vector<int> ks{1, 2, 3, 4, 5};
    std::optional<std::string> identity; // exact name or fnmatch pattern
};

struct Check {
    std::string name;
    std::string params;
    std::optional<int> k;
    std::function<IdentityReport()> run;
};

/// Every check name known to the suite, in registry order.
inline const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names{
        "theorem_P_sum",   "theorem_P_product", "theorem_D_sum",   "theorem_D_product", "qdiff_F",
        "qdiff_G",         "durfee_closed_form", "equidistribution", "corollary_P2",     "nonnegativity_P",
        "nonnegativity_D", "euler_first",       "euler_second",    "bailey_daum",       "heine_limit",
        "generalized_heine", "sylvester",       "kmeasure_greedy",
    };
    return names;
}

inline bool name_matches(const std::string& name, const std::optional<std::string>& pattern)
{
    if (!pattern) return true;
    return name == *pattern || fnmatch(pattern->c_str(), name.c_str(), 0) == 0;
}

namespace detail {

inline IdentityReport residual_report(std::string name, int k, const TriSeries& residual)
{
    return compare_series(std::move(name), k, residual, TriSeries(residual.caps()));
}

inline IdentityReport timed(const std::function<IdentityReport()>& f)
{
    Stopwatch clock;
    IdentityReport r = f();
    r.elapsed_ms = clock.elapsed_ms();
    return r;
}

} // namespace detail

/// Parameter sets used for the classical building blocks.
inline std::vector<Monomial> euler_first_parameters() { return {Monomial(1, 1, 0, 0), Monomial(1, 1, 1, 0), Monomial(1, 2, 0, 1)}; }
inline std::vector<Monomial> euler_second_parameters() { return {Monomial(1, 1, 0, 0), Monomial(1, 1, 1, 0), Monomial(1, 0, 0, 1)}; }
inline std::vector<Monomial> bailey_daum_parameters() { return {Monomial(-1, 0, 0, 0), Monomial(1, 1, 0, 0), Monomial(1, 1, 1, 0)}; }

inline std::vector<HeineParameters> generalized_heine_parameters()
{
    return {
        HeineParameters{Monomial(1, 1, 1, 0), Monomial(1, 1, 0, 0), Monomial(1, 2, 0, 0), Monomial(1, 1, 0, 1), 1},
        HeineParameters{Monomial(1, 1, 0, 0), Monomial(1, 1, 0, 0), Monomial(1, 3, 0, 0), Monomial(1, 2, 0, 0), 2},
        HeineParameters{Monomial(0, 0, 0, 0), Monomial(1, 1, 0, 0), Monomial(1, 3, 0, 0), Monomial(1, 2, 0, 0), 2},
    };
}

/// Builds the selected checks. Throws std::invalid_argument when the identity
/// filter matches nothing.
inline std::vector<Check> build_checks(const SuiteConfig& cfg)
{
    const int Q = cfg.qcap;
    const int Z = cfg.zcap;
    std::vector<Check> out;
    auto want = [&](const std::string& n) { return name_matches(n, cfg.identity); };
    auto per_k = [&](const std::string& name, int kmin, auto body) {
        if (!want(name)) return;
        for (int k : cfg.ks)
            if (k >= kmin) out.push_back(Check{name, "", k, [=] { return detail::timed([&] { return body(k); }); }});
    };

    per_k("theorem_P_sum", 1, [Q](int k) {
        return compare_series("theorem_P_sum", k, rhs_theorem_P_sum(k, Q), gf_enumerated(Q, k, Family::all));
    });
    per_k("theorem_P_product", 2, [Q, Z](int k) {
        return compare_series("theorem_P_product", k, rhs_theorem_P_product(k, Q, Z), rhs_theorem_P_sum(k, Q));
    });
    per_k("theorem_D_sum", 1, [Q](int k) {
        return compare_series("theorem_D_sum", k, rhs_theorem_D_sum(k, Q), gf_enumerated(Q, k, Family::distinct));
    });
    per_k("theorem_D_product", 1, [Q, Z](int k) {
        return compare_series("theorem_D_product", k, rhs_theorem_D_product(k, Q, Z), rhs_theorem_D_sum(k, Q));
    });
    per_k("qdiff_F", 1, [Q](int k) { return detail::residual_report("qdiff_F", k, qdiff_residual_F(k, Q)); });
    per_k("qdiff_G", 1, [Q](int k) { return detail::residual_report("qdiff_G", k, qdiff_residual_G(k, Q)); });
    if (want("durfee_closed_form"))
        out.push_back(Check{"durfee_closed_form", "", std::nullopt, [Q] {
                                return detail::timed([Q] {
                                    return compare_series("durfee_closed_form", std::nullopt, durfee_closed_form(Q),
                                                          gf_durfee_enumerated(Q));
                                });
                            }});
    if (want("equidistribution"))
        out.push_back(Check{"equidistribution", "", 2, [Q] { return equidistribution_check(Q); }});
    if (want("corollary_P2"))
        out.push_back(Check{"corollary_P2", "", std::nullopt, [Q] { return corollary_P2_check(Q); }});
    per_k("nonnegativity_P", 1, [Q](int k) { return nonnegativity_check(k, Q, Family::all); });
    per_k("nonnegativity_D", 1, [Q](int k) { return nonnegativity_check(k, Q, Family::distinct); });
    if (want("euler_first"))
        for (const Monomial& t : euler_first_parameters())
            out.push_back(Check{"euler_first", "t=" + format_monomial(t), std::nullopt, [=] { return euler_first(t, Q, Z); }});
    if (want("euler_second"))
        for (const Monomial& t : euler_second_parameters())
            out.push_back(Check{"euler_second", "t=" + format_monomial(t), std::nullopt, [=] { return euler_second(t, Q, Z); }});
    if (want("bailey_daum"))
        for (const Monomial& a : bailey_daum_parameters())
            out.push_back(Check{"bailey_daum", "a=" + format_monomial(a), std::nullopt, [=] { return bailey_daum_special(a, Q); }});
    if (want("heine_limit"))
        out.push_back(Check{"heine_limit", "", std::nullopt, [=] { return heine_limit_identity(Q, Z); }});
    if (want("generalized_heine"))
        for (const HeineParameters& p : generalized_heine_parameters()) {
            // Parameters carrying z need the bounded z-cap; others run without one.
            const ZCap zc = (p.t.ez || p.b.ez || p.a.ez || p.c.ez) ? ZCap(Z) : unbounded;
            out.push_back(Check{"generalized_heine", "", std::nullopt, [=] { return generalized_heine(p, Q, zc); }});
        }
    if (want("sylvester")) out.push_back(Check{"sylvester", "", std::nullopt, [Q] { return sylvester_check(Q); }});
    per_k("kmeasure_greedy", 1, [Q](int k) { return kmeasure_oracle_check(k, Q); });

    if (out.empty()) throw std::invalid_argument("no identity matches '" + cfg.identity.value_or("") + "'");
    return out;
}

/// Worker count: KMEASURE_WORKERS if set and positive, else hardware threads.
inline unsigned default_workers()
{
    if (const char* env = std::getenv("KMEASURE_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline bool report_order(const IdentityReport& a, const IdentityReport& b)
{
    return std::tie(a.name, a.params, a.k) < std::tie(b.name, b.params, b.k);
}

/// Runs the checks on `workers` threads. A check that throws is reported as a
/// failure with no first_failure.
inline std::vector<IdentityReport> run_checks(const std::vector<Check>& checks, unsigned workers)
{
    std::vector<IdentityReport> reports(checks.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < checks.size(); i = next++) {
            try {
                reports[i] = checks[i].run();
            } catch (const std::exception&) {
                reports[i] = IdentityReport{};
                reports[i].passed = false;
            }
            reports[i].name = checks[i].name;
            reports[i].k = checks[i].k;
            if (!checks[i].params.empty()) reports[i].params = checks[i].params;
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(checks.size())));
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    pool.clear();
    std::stable_sort(reports.begin(), reports.end(), report_order);
    return reports;
}

inline bool all_passed(const std::vector<IdentityReport>& reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const IdentityReport& r) { return r.passed; });
}

} // namespace kmeasure

#endif // KMEASURE_SUITE_HPP
