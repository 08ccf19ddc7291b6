// kmeasure: verify k-measure generating-function identities, compute partition
// statistics, and print equidistribution tables.
//
// Exit status: 0 all checks pass, 1 a check failed, 2 usage or parse error.

#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <kmeasure/kmeasure.hpp>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

enum class Format { plain, csv, json };

const std::map<std::string, Format> kFormats{{"plain", Format::plain}, {"csv", Format::csv}, {"json", Format::json}};

int run_verify(const kmeasure::SuiteConfig& cfg, Format format, unsigned workers)
{
    std::vector<kmeasure::Check> checks;
    try {
        checks = kmeasure::build_checks(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto reports = kmeasure::run_checks(checks, workers);
    switch (format) {
    case Format::plain: std::cout << kmeasure::reports_to_table(reports); break;
    case Format::csv: std::cout << kmeasure::reports_to_csv(reports); break;
    case Format::json: std::cout << kmeasure::reports_to_json(reports); break;
    }
    return kmeasure::all_passed(reports) ? kExitPass : kExitFail;
}

int run_stats(const std::string& text, const std::vector<int>& ks, Format format)
{
    kmeasure::Partition p;
    try {
        p = kmeasure::parse_partition(text);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const kmeasure::PartitionStats s = kmeasure::compute_stats(p, ks);
    switch (format) {
    case Format::plain:
        std::cout << "partition " << (text.empty() ? "(empty)" : kmeasure::format_partition(p)) << "\n"
                  << "size " << s.size << "\n"
                  << "length " << s.length << "\n"
                  << "smallest " << s.smallest << "\n"
                  << "durfee " << s.durfee << "\n";
        for (auto [k, m] : s.measures) std::cout << "mu_" << k << " " << m << "\n";
        break;
    case Format::csv:
        std::cout << "statistic,value\n"
                  << "size," << s.size << "\nlength," << s.length << "\nsmallest," << s.smallest << "\ndurfee,"
                  << s.durfee << "\n";
        for (auto [k, m] : s.measures) std::cout << "mu_" << k << "," << m << "\n";
        break;
    case Format::json: {
        nlohmann::json j{{"partition", kmeasure::format_partition(p)},
                         {"size", s.size},
                         {"length", s.length},
                         {"smallest", s.smallest},
                         {"durfee", s.durfee}};
        nlohmann::json mu = nlohmann::json::object();
        for (auto [k, m] : s.measures) mu[std::to_string(k)] = m;
        j["measures"] = mu;
        std::cout << j.dump(2) << "\n";
        break;
    }
    }
    return kExitPass;
}

int run_table(int n_max, const std::string& pair_text, int k, Format format)
{
    kmeasure::TablePair pair;
    try {
        pair = kmeasure::parse_table_pair(pair_text);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    const auto rows = kmeasure::distribution_table(n_max, pair, k);
    switch (format) {
    case Format::plain: std::cout << kmeasure::table_to_plain(rows); break;
    case Format::csv: std::cout << kmeasure::table_to_csv(rows); break;
    case Format::json: std::cout << kmeasure::table_to_json(rows); break;
    }
    return kmeasure::all_match(rows) ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"k-measure partition identities: verification, statistics and tables"};
    app.require_subcommand(1);

    Format format = Format::plain;
    auto add_format = [&format](CLI::App* cmd) {
        cmd->add_option("--format", format, "Output format: plain, csv or json")
            ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    };

    kmeasure::SuiteConfig cfg;
    std::optional<int> zcap;
    std::string identity;
    unsigned workers = kmeasure::default_workers();
    auto* verify = app.add_subcommand("verify", "Run identity checks");
    verify->add_option("--qcap", cfg.qcap, "Maximum q-exponent")->check(CLI::NonNegativeNumber)->capture_default_str();
    verify->add_option("--zcap", zcap, "Maximum z-exponent (default: qcap)")->check(CLI::NonNegativeNumber);
    verify->add_option("--k", cfg.ks, "Comma-separated k values")->delimiter(',')->check(CLI::PositiveNumber);
    verify->add_option("--identity", identity, "Check name or glob pattern");
    verify->add_option("--jobs,-j", workers, "Worker threads (env KMEASURE_WORKERS)")->check(CLI::PositiveNumber);
    add_format(verify);

    std::string partition_text;
    std::vector<int> stat_ks{1, 2, 3};
    auto* stats = app.add_subcommand("stats", "Statistics of one partition, e.g. 4,3,1");
    stats->add_option("partition", partition_text, "Comma-separated weakly decreasing parts");
    stats->add_option("--k", stat_ks, "Comma-separated k values")->delimiter(',')->check(CLI::PositiveNumber);
    add_format(stats);

    int n_max = 10;
    std::string pair = "mu2-durfee";
    int table_k = 2;
    auto* table = app.add_subcommand("table", "Joint distribution tables for n <= n-max");
    table->add_option("--n-max", n_max, "Largest n")->check(CLI::NonNegativeNumber)->capture_default_str();
    table->add_option("--pair", pair, "mu2-durfee, muk-length or sylvester")->capture_default_str();
    table->add_option("--k", table_k, "k for muk-length")->check(CLI::PositiveNumber)->capture_default_str();
    add_format(table);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) {
            cfg.zcap = zcap.value_or(cfg.qcap);
            if (!identity.empty()) cfg.identity = identity;
            return run_verify(cfg, format, workers);
        }
        if (*stats) return run_stats(partition_text, stat_ks, format);
        if (*table) return run_table(n_max, pair, table_k, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
