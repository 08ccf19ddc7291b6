#ifndef KMEASURE_REPORT_HPP
#define KMEASURE_REPORT_HPP

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "identities.hpp"

namespace kmeasure {

inline nlohmann::json to_json(const IdentityReport& r)
{
    nlohmann::json j;
    j["name"] = r.name;
    j["params"] = r.params;
    j["k"] = r.k ? nlohmann::json(*r.k) : nlohmann::json(nullptr);
    j["qcap"] = r.qcap;
    j["zcap"] = r.zcap ? nlohmann::json(*r.zcap) : nlohmann::json(nullptr);
    j["passed"] = r.passed;
    if (r.first_failure) {
        const FirstFailure& f = *r.first_failure;
        j["first_failure"] = {{"q", f.q}, {"y", f.y}, {"z", f.z}, {"lhs", f.lhs.get_str()}, {"rhs", f.rhs.get_str()}};
    } else {
        j["first_failure"] = nullptr;
    }
    j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

inline std::string reports_to_json(const std::vector<IdentityReport>& reports)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const IdentityReport& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

namespace detail {

inline std::string failure_text(const IdentityReport& r)
{
    if (!r.first_failure) return "-";
    const FirstFailure& f = *r.first_failure;
    std::ostringstream os;
    os << "q^" << f.q << " y^" << f.y << " z^" << f.z << ": " << f.lhs.get_str() << " != " << f.rhs.get_str();
    return os.str();
}

inline std::string opt_text(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string pad(const std::string& s, std::size_t width)
{
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

} // namespace detail

/// Columns: name,params,k,qcap,zcap,passed,first_failure. No timings.
inline std::string reports_to_csv(const std::vector<IdentityReport>& reports)
{
    std::string out = "name,params,k,qcap,zcap,passed,first_failure\n";
    for (const IdentityReport& r : reports) {
        out += detail::csv_field(r.name) + "," + detail::csv_field(r.params) + "," + detail::opt_text(r.k) + "," +
               std::to_string(r.qcap) + "," + detail::opt_text(r.zcap) + "," + (r.passed ? "true" : "false") + "," +
               detail::csv_field(r.first_failure ? detail::failure_text(r) : "") + "\n";
    }
    return out;
}

/// Fixed-width table, one line per report.
inline std::string reports_to_table(const std::vector<IdentityReport>& reports)
{
    std::size_t wname = 4, wparams = 6;
    for (const IdentityReport& r : reports) {
        wname = std::max(wname, r.name.size());
        wparams = std::max(wparams, r.params.size());
    }
    std::ostringstream os;
    os << detail::pad("name", wname) << "  " << detail::pad("params", wparams) << "  " << detail::pad("k", 3) << "  "
       << detail::pad("qcap", 5) << "  " << detail::pad("zcap", 5) << "  " << detail::pad("status", 6) << "  "
       << "first_failure\n";
    for (const IdentityReport& r : reports) {
        os << detail::pad(r.name, wname) << "  " << detail::pad(r.params.empty() ? "-" : r.params, wparams) << "  "
           << detail::pad(detail::opt_text(r.k), 3) << "  " << detail::pad(std::to_string(r.qcap), 5) << "  "
           << detail::pad(detail::opt_text(r.zcap), 5) << "  " << detail::pad(r.passed ? "PASS" : "FAIL", 6) << "  "
           << detail::failure_text(r) << "\n";
    }
    return os.str();
}

} // namespace kmeasure

#endif // KMEASURE_REPORT_HPP
