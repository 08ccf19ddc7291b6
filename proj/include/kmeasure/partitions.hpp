#ifndef KMEASURE_PARTITIONS_HPP
#define KMEASURE_PARTITIONS_HPP

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "series.hpp"

namespace kmeasure {

enum class Family { all, distinct };

inline std::string_view to_string(Family f) { return f == Family::all ? "all" : "distinct"; }

/// A weakly decreasing list of positive parts. The empty list is the unique
/// partition of 0.
class Partition {
public:
    Partition() = default;

    explicit Partition(std::vector<int> parts) : parts_(std::move(parts))
    {
        for (std::size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i] < 1) throw std::invalid_argument("partition parts must be positive");
            if (i > 0 && parts_[i] > parts_[i - 1])
                throw std::invalid_argument("partition parts must be weakly decreasing");
        }
    }

    std::span<const int> parts() const { return parts_; }
    std::size_t length() const { return parts_.size(); }
    bool empty() const { return parts_.empty(); }

    int size() const
    {
        int s = 0;
        for (int p : parts_) s += p;
        return s;
    }

    int smallest() const { return parts_.empty() ? 0 : parts_.back(); }

    bool has_distinct_parts() const { return std::adjacent_find(parts_.begin(), parts_.end()) == parts_.end(); }

    /// Distinct part values in increasing order.
    std::vector<int> distinct_values() const
    {
        std::vector<int> v(parts_.rbegin(), parts_.rend());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
    friend auto operator<=>(const Partition&, const Partition&) = default;

private:
    friend class PartitionRange;
    std::vector<int> parts_;
};

/// Parses "4,3,1"; the empty string is the empty partition.
inline Partition parse_partition(std::string_view text)
{
    std::vector<int> parts;
    if (text.empty()) return Partition();
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.size() - pos : comma - pos);
        int value = 0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
            throw std::invalid_argument("malformed partition text: '" + std::string(text) + "'");
        parts.push_back(value);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Partition(std::move(parts));
}

inline std::string format_partition(const Partition& p)
{
    std::string out;
    for (std::size_t i = 0; i < p.parts().size(); ++i) {
        if (i) out += ',';
        out += std::to_string(p.parts()[i]);
    }
    return out;
}

/// Partitions of n in the family, in lexicographically decreasing order.
class PartitionRange {
public:
    PartitionRange(int n, Family family) : n_(n), family_(family)
    {
        if (n < 0) throw std::invalid_argument("cannot partition a negative integer");
    }

    class iterator {
    public:
        using value_type = Partition;
        using difference_type = std::ptrdiff_t;
        using reference = const Partition&;
        using pointer = const Partition*;
        using iterator_category = std::input_iterator_tag;

        iterator() = default;
        iterator(int n, Family family) : family_(family), done_(false)
        {
            if (n > 0) current_.parts_.push_back(n);
        }

        reference operator*() const { return current_; }
        pointer operator->() const { return &current_; }

        iterator& operator++()
        {
            done_ = !(family_ == Family::all ? next_all(current_.parts_) : next_distinct(current_.parts_));
            return *this;
        }
        void operator++(int) { ++*this; }

        friend bool operator==(const iterator& it, std::default_sentinel_t) { return it.done_; }

    private:
        Partition current_;
        Family family_ = Family::all;
        bool done_ = true;
    };

    iterator begin() const { return iterator(n_, family_); }
    std::default_sentinel_t end() const { return {}; }

    // Successor in lexicographically decreasing order; false when exhausted.
    static bool next_all(std::vector<int>& a)
    {
        int rem = 0;
        while (!a.empty() && a.back() == 1) {
            ++rem;
            a.pop_back();
        }
        if (a.empty()) return false;
        const int v = --a.back();
        ++rem;
        while (rem >= v) {
            a.push_back(v);
            rem -= v;
        }
        if (rem > 0) a.push_back(rem);
        return true;
    }

    static bool next_distinct(std::vector<int>& a)
    {
        // Rightmost position whose part can drop by one while the freed
        // amount still fits into distinct parts below it.
        int tail = 0;
        for (std::size_t i = a.size(); i-- > 0;) {
            const int v = a[i] - 1;
            const int rem = tail + 1;
            const long room = static_cast<long>(v) * (v - 1) / 2;
            if (v >= 1 && rem <= room) {
                a.resize(i + 1);
                a[i] = v;
                int bound = v - 1;
                int left = rem;
                while (left > 0) {
                    const int p = std::min(bound, left);
                    a.push_back(p);
                    left -= p;
                    bound = p - 1;
                }
                return true;
            }
            tail += a[i];
        }
        return false;
    }

private:
    int n_;
    Family family_;
};

inline PartitionRange enumerate(int n, Family family) { return PartitionRange(n, family); }

/// Smallest-first greedy over distinct values: take the smallest value, then
/// every value at least k above the last one taken.
inline int kmeasure_greedy(const Partition& p, int k)
{
    if (k <= 0) throw std::invalid_argument("k-measure requires k >= 1");
    int count = 0;
    long last = 0;
    for (int v : p.distinct_values()) {
        if (count == 0 || v >= last + k) {
            ++count;
            last = v;
        }
    }
    return count;
}

/// Exhaustive search over subsets of distinct values.
inline int kmeasure_bruteforce(const Partition& p, int k)
{
    if (k <= 0) throw std::invalid_argument("k-measure requires k >= 1");
    const std::vector<int> values = p.distinct_values();
    const std::size_t d = values.size();
    if (d > 25) throw std::length_error("oracle scope exceeded");
    int best = 0;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << d); ++mask) {
        int count = 0;
        int prev = 0;
        bool ok = true;
        for (std::size_t i = 0; i < d && ok; ++i) {
            if (!(mask >> i & 1u)) continue;
            if (count > 0 && values[i] - prev < k) ok = false;
            prev = values[i];
            ++count;
        }
        if (ok) best = std::max(best, count);
    }
    return best;
}

inline int durfee(const Partition& p)
{
    int d = 0;
    const auto parts = p.parts();
    while (d < static_cast<int>(parts.size()) && parts[d] >= d + 1) ++d;
    return d;
}

/// Number of maximal runs of consecutive integers among distinct parts.
inline int consecutive_runs(const Partition& p)
{
    if (!p.has_distinct_parts()) throw std::invalid_argument("requires distinct parts");
    const auto parts = p.parts();
    int runs = 0;
    for (std::size_t i = 0; i < parts.size(); ++i)
        if (i == 0 || parts[i - 1] != parts[i] + 1) ++runs;
    return runs;
}

struct PartitionStats {
    int size = 0;
    int length = 0;
    int smallest = 0;
    int durfee = 0;
    std::map<int, int> measures;
};

inline PartitionStats compute_stats(const Partition& p, std::span<const int> ks)
{
    PartitionStats s;
    s.size = p.size();
    s.length = static_cast<int>(p.length());
    s.smallest = p.smallest();
    s.durfee = durfee(p);
    for (int k : ks) s.measures[k] = kmeasure_greedy(p, k);
    return s;
}

namespace detail {

// Sums weights into per-layer (y, z) buckets; the caller supplies exponents.
template <typename Exponents>
TriSeries enumerate_series(int N, Family family, Exponents&& exps)
{
    std::vector<Layer> layers(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) {
        std::map<std::pair<int, int>, long> counts;
        for (const Partition& p : enumerate(n, family)) ++counts[exps(p)];
        for (auto& [key, c] : counts) layers[n].push_back(Term{key.first, key.second, Coefficient(c)});
    }
    return TriSeries::from_layers(Caps{N, unbounded}, std::move(layers));
}

} // namespace detail

/// sum over partitions of n <= N of y^length z^mu_k q^n.
inline TriSeries gf_enumerated(int N, int k, Family family)
{
    if (k <= 0) throw std::invalid_argument("k-measure requires k >= 1");
    return detail::enumerate_series(N, family, [k](const Partition& p) {
        return std::pair{static_cast<int>(p.length()), kmeasure_greedy(p, k)};
    });
}

/// sum over partitions of n <= N of y^length z^durfee q^n.
inline TriSeries gf_durfee_enumerated(int N)
{
    return detail::enumerate_series(N, Family::all, [](const Partition& p) {
        return std::pair{static_cast<int>(p.length()), durfee(p)};
    });
}

struct SylvesterCounts {
    std::map<int, long> odd_by_distinct_values;
    std::map<int, long> distinct_by_runs;
};

/// Histograms for Sylvester's theorem at n: odd-part partitions by number of
/// distinct part values, and distinct partitions by number of runs.
inline SylvesterCounts sylvester_counts(int n)
{
    SylvesterCounts out;
    for (const Partition& p : enumerate(n, Family::all)) {
        const auto parts = p.parts();
        if (std::all_of(parts.begin(), parts.end(), [](int v) { return v % 2 == 1; }))
            ++out.odd_by_distinct_values[static_cast<int>(p.distinct_values().size())];
    }
    for (const Partition& p : enumerate(n, Family::distinct)) ++out.distinct_by_runs[consecutive_runs(p)];
    return out;
}

} // namespace kmeasure

#endif // KMEASURE_PARTITIONS_HPP
