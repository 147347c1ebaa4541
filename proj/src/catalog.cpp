// Copyright 2026 The cpforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cpforge/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "cpforge/error.hpp"

namespace cpforge {

namespace detail {
extern const char *const kCatalogJson;
}

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad_json(const std::string &what) {
    throw Error(ErrorCode::BadArgument, "catalog JSON: " + what);
}

PrintedAngle angle_from_json(const ordered_json &j) {
    if (j.is_array()) {
        if (j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer() || j[1].get<long>() == 0) {
            bad_json("fractions must be [numerator, denominator] integer pairs");
        }
        return PrintedAngle::exact(j[0].get<long>(), j[1].get<long>());
    }
    if (j.is_number_integer()) {
        return PrintedAngle::exact(j.get<long>(), 1);
    }
    if (j.is_number()) {
        return PrintedAngle::decimal(j.get<double>());
    }
    bad_json("angle must be a number or a fraction pair");
}

ordered_json angle_to_json(const PrintedAngle &a) {
    if (a.fraction) {
        if (a.fraction->second == 1) {
            return a.fraction->first;
        }
        return ordered_json::array({a.fraction->first, a.fraction->second});
    }
    return a.value;
}

std::vector<PrintedAngle> angles_from_json(const ordered_json &j) {
    if (!j.is_array()) {
        bad_json("phase lists must be arrays");
    }
    std::vector<PrintedAngle> out;
    for (const auto &v : j) {
        out.push_back(angle_from_json(v));
    }
    return out;
}

ordered_json angles_to_json(const std::vector<PrintedAngle> &angles) {
    ordered_json out = ordered_json::array();
    for (const auto &a : angles) {
        out.push_back(angle_to_json(a));
    }
    return out;
}

std::optional<PrintedInterval> interval_from_json(const ordered_json &claims, const char *key) {
    if (!claims.contains(key)) {
        return std::nullopt;
    }
    const auto &v = claims.at(key);
    if (!v.is_array() || v.size() != 2) {
        bad_json(std::string(key) + " must be a [lo, hi] pair");
    }
    return PrintedInterval{v[0].get<double>(), v[1].get<double>()};
}

CatalogEntry entry_from_json(const ordered_json &j) {
    CatalogEntry e;
    try {
        e.name = j.at("name").get<std::string>();
        e.table = j.at("table").get<std::string>();
        e.theta_over_pi = j.at("theta_over_pi").get<double>();
        const auto fam = parse_family(j.at("family").get<std::string>());
        if (!fam) {
            bad_json("unknown family " + j.at("family").dump());
        }
        e.family = *fam;
        const auto &orders = j.at("orders");
        e.n_s = orders.at(0).get<int>();
        e.n_r = orders.at(1).get<int>();
        e.phases_over_pi = angles_from_json(j.at("phases_over_pi"));
        e.cap_areas_over_pi = j.at("cap_areas_over_pi").get<std::vector<double>>();
        const auto &c = j.at("claims");
        e.claims.fwhm = interval_from_json(c, "fwhm");
        e.claims.ul = interval_from_json(c, "ul");
        e.claims.uh = interval_from_json(c, "uh");
        if (c.contains("delta")) {
            e.claims.delta = c.at("delta").get<double>();
        }
        if (c.contains("total_area")) {
            e.claims.total_area = c.at("total_area").get<double>();
        }
        e.flags = j.at("flags").get<std::vector<std::string>>();
        if (j.contains("erratum")) {
            const auto &er = j.at("erratum");
            e.erratum = Erratum{angles_from_json(er.at("phases_over_pi")), er.value("note", std::string())};
        }
        if (j.contains("trace_order")) {
            e.trace_order = j.at("trace_order").get<int>();
        }
    } catch (const nlohmann::json::exception &ex) {
        bad_json(ex.what());
    }
    return e;
}

ordered_json entry_to_json(const CatalogEntry &e) {
    ordered_json j;
    j["name"] = e.name;
    j["table"] = e.table;
    j["theta_over_pi"] = e.theta_over_pi;
    j["family"] = std::string(to_string(e.family));
    j["orders"] = {e.n_s, e.n_r};
    j["phases_over_pi"] = angles_to_json(e.phases_over_pi);
    j["cap_areas_over_pi"] = e.cap_areas_over_pi;
    ordered_json c = ordered_json::object();
    auto put = [&](const char *key, const std::optional<PrintedInterval> &iv) {
        if (iv) {
            c[key] = {iv->lo, iv->hi};
        }
    };
    put("fwhm", e.claims.fwhm);
    put("ul", e.claims.ul);
    put("uh", e.claims.uh);
    if (e.claims.delta) {
        c["delta"] = *e.claims.delta;
    }
    if (e.claims.total_area) {
        c["total_area"] = *e.claims.total_area;
    }
    j["claims"] = c;
    j["flags"] = e.flags;
    if (e.erratum) {
        j["erratum"] = {{"phases_over_pi", angles_to_json(e.erratum->phases_over_pi)}, {"note", e.erratum->note}};
    }
    if (e.trace_order) {
        j["trace_order"] = *e.trace_order;
    }
    return j;
}

// Half a unit in the last digit of the shortest decimal spelling of `v`.
double printed_half_ulp(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    const std::string text(buf, res.ptr);
    const auto dot = text.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
    return 0.5 * std::pow(10.0, -decimals) + 1e-12;
}

std::vector<double> over_pi(const std::vector<double> &radians) {
    std::vector<double> out;
    out.reserve(radians.size());
    for (double r : radians) {
        out.push_back(r / kPi);
    }
    return out;
}

}  // namespace

bool CatalogEntry::has_flag(std::string_view flag) const {
    return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

bool CatalogEntry::exact() const {
    const auto &src = erratum ? erratum->phases_over_pi : phases_over_pi;
    return cap_areas_over_pi.empty() &&
           std::all_of(src.begin(), src.end(), [](const PrintedAngle &a) { return a.fraction.has_value(); });
}

double CatalogEntry::theta() const {
    return theta_over_pi * kPi;
}

FamilySpec CatalogEntry::family_spec() const {
    // Regularized ATN rows use a longer template than their element order.
    if (family == Family::ATN) {
        const auto count = (erratum ? erratum->phases_over_pi : phases_over_pi).size();
        return {family, theta(), static_cast<int>(count) - 1, n_r};
    }
    return {family, theta(), n_s, n_r};
}

FreeParams CatalogEntry::params() const {
    FreeParams p;
    for (const auto &a : erratum ? erratum->phases_over_pi : phases_over_pi) {
        p.phases.push_back(a.value * kPi);
    }
    for (double a : cap_areas_over_pi) {
        p.extra_areas.push_back(a * kPi);
    }
    return p;
}

CompositeSequence CatalogEntry::sequence() const {
    return instantiate(family_spec(), params());
}

ObjectiveSpec CatalogEntry::objective() const {
    ObjectiveSpec o;
    o.theta = theta();
    o.n_s = n_s;
    o.n_r = n_r;
    if (family == Family::ANm) {
        o.kind = ObjectiveKind::NbModSu2;
    } else if (has_flag(kRegularizationDerived)) {
        if (n_r > 0) {
            o.kind = ObjectiveKind::PbReg;
        } else {
            o.kind = ObjectiveKind::NbReg;
            o.trace_order = trace_order.value_or(2 * n_s + 1);
        }
    } else {
        o.kind = n_r > 0 ? ObjectiveKind::PbSu2 : ObjectiveKind::NbSu2;
    }
    return o;
}

std::vector<CatalogEntry> entries_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception &ex) {
        bad_json(ex.what());
    }
    if (!doc.is_array()) {
        bad_json("top level must be an array of entries");
    }
    std::vector<CatalogEntry> out;
    out.reserve(doc.size());
    for (const auto &j : doc) {
        try {
            out.push_back(entry_from_json(j));
        } catch (const nlohmann::json::exception &ex) {
            bad_json(ex.what());
        }
    }
    return out;
}

std::string entries_to_json(const std::vector<CatalogEntry> &entries) {
    ordered_json doc = ordered_json::array();
    for (const auto &e : entries) {
        doc.push_back(entry_to_json(e));
    }
    return doc.dump(2);
}

const std::vector<CatalogEntry> &load_catalog() {
    static const std::vector<CatalogEntry> catalog = entries_from_json(detail::kCatalogJson);
    return catalog;
}

const CatalogEntry &find_entry(std::string_view name) {
    const auto &cat = load_catalog();
    const auto it = std::find_if(cat.begin(), cat.end(), [&](const CatalogEntry &e) { return e.name == name; });
    if (it == cat.end()) {
        throw Error(ErrorCode::UnknownEntry, "no catalog entry named '" + std::string(name) + "'");
    }
    return *it;
}

bool VerificationReport::claims_pass() const {
    return std::all_of(claims.begin(), claims.end(), [](const ClaimCheck &c) { return !c.asserted || c.pass; });
}

VerificationReport verify_entry(const CatalogEntry &entry, const Tolerances &tol, const SearchConfig &cfg) {
    VerificationReport rep;
    rep.entry = entry.name;
    rep.erratum_applied = entry.erratum.has_value();
    const FamilySpec spec = entry.family_spec();
    const ObjectiveSpec obj = entry.objective();
    rep.objective = obj.kind;
    const FreeParams start = entry.params();

    const Solution sol = refine(start, spec, obj, cfg);
    rep.polished_loss = sol.loss;
    rep.polished_phases_over_pi = over_pi(sol.params.phases);
    rep.polished_caps_over_pi = over_pi(sol.params.extra_areas);
    for (std::size_t i = 0; i < start.phases.size(); ++i) {
        rep.phase_deviation =
            std::max(rep.phase_deviation, std::abs(phase_distance(sol.params.phases[i], start.phases[i])));
    }
    for (std::size_t i = 0; i < start.extra_areas.size(); ++i) {
        rep.phase_deviation =
            std::max(rep.phase_deviation, std::abs(sol.params.extra_areas[i] - start.extra_areas[i]));
    }
    rep.phase_deviation_tol = entry.exact() ? tol.exact_phase_deviation : tol.phase_deviation;
    rep.deviation_pass = rep.phase_deviation <= rep.phase_deviation_tol;

    rep.target_error = std::sqrt(target_error(sol.seq, spec.theta));
    rep.derivative_tol = tol.derivative;
    for (const Constraint &c : constraints(sol.seq, obj)) {
        // Regularizing element terms are penalties, not compensation claims.
        if (obj.kind == ObjectiveKind::PbReg && c.quantity != "FT") {
            continue;
        }
        rep.max_derivative = std::max(rep.max_derivative, std::abs(c.value));
        rep.derivatives.push_back(c);
    }
    rep.derivatives_pass = rep.max_derivative < tol.derivative && rep.target_error < tol.derivative;

    rep.measured = performance_report(sol.seq);
    const CompositeSequence printed = entry.sequence();
    rep.measured_printed = performance_report(printed);
    const bool misprint = entry.has_flag(kMisprintSuspect);
    const bool not_flat = entry.has_flag(kNotFlatBottom);
    auto check = [&](const std::string &q, double claimed, double measured, double at_printed, double tolerance,
                     bool asserted) {
        ClaimCheck c{q, claimed, measured, at_printed, tolerance, asserted && !misprint, false};
        c.pass = std::abs(claimed - measured) <= tolerance;
        rep.claims.push_back(c);
    };
    auto check_interval = [&](const std::string &q, const std::optional<PrintedInterval> &claim,
                              const AreaInterval &measured, const AreaInterval &at_printed, bool asserted) {
        if (claim) {
            check(q + ".lo", claim->lo, measured.lo / kPi, at_printed.lo / kPi, tol.measure, asserted);
            check(q + ".hi", claim->hi, measured.hi / kPi, at_printed.hi / kPi, tol.measure, asserted);
        }
    };
    const PerformanceReport &m = rep.measured;
    const PerformanceReport &mp = rep.measured_printed;
    check_interval("fwhm", entry.claims.fwhm, m.fwhm_range, mp.fwhm_range, !not_flat);
    check_interval("ul", entry.claims.ul, m.ul_range, mp.ul_range, true);
    check_interval("uh", entry.claims.uh, m.uh_range, mp.uh_range, true);
    if (entry.claims.delta) {
        check("delta", *entry.claims.delta, m.delta, mp.delta, tol.measure, true);
    }
    if (entry.claims.total_area) {
        const double claimed = *entry.claims.total_area;
        check("total_area", claimed, m.total_area / kPi, mp.total_area / kPi, std::max(tol.measure, printed_half_ulp(claimed)), true);
    }
    return rep;
}

void require_pass(const VerificationReport &report) {
    std::ostringstream msg;
    msg.precision(6);
    if (!report.deviation_pass) {
        msg << report.entry << ": polished phases moved " << report.phase_deviation / kPi << " pi (limit "
            << report.phase_deviation_tol / kPi << " pi)";
    } else if (!report.derivatives_pass) {
        msg << report.entry << ": residual derivative " << report.max_derivative << ", target error "
            << report.target_error << " (limit " << report.derivative_tol << ")";
    } else {
        for (const auto &c : report.claims) {
            if (c.asserted && !c.pass) {
                msg << report.entry << ": " << c.quantity << " measured " << c.measured << " claimed " << c.claimed;
                break;
            }
        }
    }
    const std::string text = msg.str();
    if (!text.empty()) {
        throw Error(ErrorCode::VerificationFailure, text);
    }
}

}  // namespace cpforge
