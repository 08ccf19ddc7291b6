#ifndef KMEASURE_TABLES_HPP
#define KMEASURE_TABLES_HPP

// Side-by-side distribution tables for equidistribution claims.

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "identities.hpp"

namespace kmeasure {

enum class TablePair { mu2_durfee, muk_length, sylvester };

inline TablePair parse_table_pair(std::string_view s)
{
    if (s == "mu2-durfee") return TablePair::mu2_durfee;
    if (s == "muk-length") return TablePair::muk_length;
    if (s == "sylvester") return TablePair::sylvester;
    throw std::invalid_argument("unknown statistic pair '" + std::string(s) + "'");
}

struct TableRow {
    int n = 0;
    std::string statistic_value;
    long count_lhs = 0;
    long count_rhs = 0;
    bool match() const { return count_lhs == count_rhs; }
};

namespace detail {

inline void append_histograms(std::vector<TableRow>& rows, int n, const std::map<int, long>& lhs,
                              const std::map<int, long>& rhs)
{
    std::map<int, std::pair<long, long>> joint;
    for (auto& [v, c] : lhs) joint[v].first = c;
    for (auto& [v, c] : rhs) joint[v].second = c;
    for (auto& [v, c] : joint) rows.push_back(TableRow{n, std::to_string(v), c.first, c.second});
}

inline long to_long(const Coefficient& c)
{
    if (c.get_den() != 1 || !c.get_num().fits_slong_p()) throw std::domain_error("non-integral count");
    return c.get_num().get_si();
}

} // namespace detail

/// Rows for n = 0..n_max.
///   mu2_durfee: value m; lhs = #partitions with mu_2 = m, rhs = #with Durfee side m.
///   muk_length: value "l:m"; lhs = #partitions with length l and mu_k = m by
///               enumeration, rhs = coefficient of y^l z^m q^n in the closed form.
///   sylvester:  value r; lhs = #odd-part partitions with r distinct values,
///               rhs = #distinct partitions with r runs.
inline std::vector<TableRow> distribution_table(int n_max, TablePair pair, int k = 2)
{
    if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
    std::vector<TableRow> rows;
    switch (pair) {
    case TablePair::mu2_durfee:
        for (int n = 0; n <= n_max; ++n) {
            std::map<int, long> mu2, dur;
            for (const Partition& p : enumerate(n, Family::all)) {
                ++mu2[kmeasure_greedy(p, 2)];
                ++dur[durfee(p)];
            }
            detail::append_histograms(rows, n, mu2, dur);
        }
        break;
    case TablePair::muk_length: {
        if (k < 1) throw std::invalid_argument("k must be >= 1");
        const TriSeries closed = rhs_theorem_P_sum(k, n_max);
        for (int n = 0; n <= n_max; ++n) {
            std::map<std::pair<int, int>, std::pair<long, long>> joint;
            for (const Partition& p : enumerate(n, Family::all))
                ++joint[{static_cast<int>(p.length()), kmeasure_greedy(p, k)}].first;
            for (const Term& t : closed.layer(n)) joint[{t.ey, t.ez}].second = detail::to_long(t.c);
            for (auto& [key, c] : joint)
                rows.push_back(TableRow{n, std::to_string(key.first) + ":" + std::to_string(key.second), c.first, c.second});
        }
        break;
    }
    case TablePair::sylvester:
        for (int n = 0; n <= n_max; ++n) {
            const SylvesterCounts c = sylvester_counts(n);
            detail::append_histograms(rows, n, c.odd_by_distinct_values, c.distinct_by_runs);
        }
        break;
    }
    return rows;
}

inline bool all_match(const std::vector<TableRow>& rows)
{
    for (const TableRow& r : rows)
        if (!r.match()) return false;
    return true;
}

/// Columns: n, statistic_value, count_lhs, count_rhs, match.
inline std::string table_to_csv(const std::vector<TableRow>& rows)
{
    std::string out = "n,statistic_value,count_lhs,count_rhs,match\n";
    for (const TableRow& r : rows)
        out += std::to_string(r.n) + "," + r.statistic_value + "," + std::to_string(r.count_lhs) + "," +
               std::to_string(r.count_rhs) + "," + (r.match() ? "true" : "false") + "\n";
    return out;
}

inline std::string table_to_plain(const std::vector<TableRow>& rows)
{
    std::ostringstream os;
    auto cell = [&os](const std::string& s, std::size_t w) {
        os << std::string(s.size() < w ? w - s.size() : 0, ' ') << s;
    };
    cell("n", 4);
    cell("value", 8);
    cell("lhs", 10);
    cell("rhs", 10);
    os << "  match\n";
    for (const TableRow& r : rows) {
        cell(std::to_string(r.n), 4);
        cell(r.statistic_value, 8);
        cell(std::to_string(r.count_lhs), 10);
        cell(std::to_string(r.count_rhs), 10);
        os << (r.match() ? "  yes" : "  MISMATCH") << "\n";
    }
    return os.str();
}

inline std::string table_to_json(const std::vector<TableRow>& rows)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const TableRow& r : rows)
        arr.push_back({{"n", r.n},
                       {"statistic_value", r.statistic_value},
                       {"count_lhs", r.count_lhs},
                       {"count_rhs", r.count_rhs},
                       {"match", r.match()}});
    return arr.dump(2) + "\n";
}

} // namespace kmeasure

#endif // KMEASURE_TABLES_HPP
