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

#include "cpforge/cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <json.hpp>
#include <sstream>

#include "cpforge/catalog.hpp"
#include "cpforge/error.hpp"
#include "cpforge/metrics.hpp"
#include "cpforge/search.hpp"

namespace cpforge {

namespace {

using ordered_json = nlohmann::ordered_json;

struct SequenceSource {
    std::string entry;
    std::string in;
    std::size_t index = 0;

    void add_options(CLI::App *cmd) {
        auto *e = cmd->add_option("--entry", entry, "catalog entry name");
        auto *i = cmd->add_option("--in", in, "sequence JSON file in catalog schema");
        e->excludes(i);
        cmd->add_option("--index", index, "entry index inside --in (default 0)");
    }

    CatalogEntry resolve() const {
        if (!entry.empty()) {
            return find_entry(entry);
        }
        if (in.empty()) {
            throw Error(ErrorCode::BadArgument, "one of --entry or --in is required");
        }
        std::ifstream f(in);
        if (!f) {
            throw Error(ErrorCode::BadArgument, "cannot read " + in);
        }
        std::stringstream buf;
        buf << f.rdbuf();
        const auto entries = entries_from_json(buf.str());
        if (index >= entries.size()) {
            throw Error(ErrorCode::BadArgument, in + " has no entry at index " + std::to_string(index));
        }
        return entries[index];
    }
};

ordered_json interval_json(const AreaInterval &iv) {
    return ordered_json::array({iv.lo / kPi, iv.hi / kPi});
}

ordered_json crossings_json(const BranchCrossings &b) {
    return {{"epsilon_pos", b.positive.epsilon},
            {"epsilon_neg", b.negative.epsilon},
            {"unbounded", b.positive.unbounded || b.negative.unbounded},
            {"recrosses", b.positive.recrosses || b.negative.recrosses}};
}

ordered_json report_json(const PerformanceReport &r) {
    ordered_json j;
    j["theta_over_pi"] = r.theta / kPi;
    j["alpha0"] = r.alpha0;
    j["fwhm"] = interval_json(r.fwhm_range);
    j["ul"] = interval_json(r.ul_range);
    j["uh"] = interval_json(r.uh_range);
    j["delta"] = r.delta;
    j["bottom_frobenius"] = r.bottom_frobenius;
    j["bottom_trace"] = r.bottom_trace;
    j["total_area_over_pi"] = r.total_area / kPi;
    j["non_flat_profile"] = r.non_flat_profile;
    j["bottom_sag"] = r.bottom_sag;
    j["crossings"] = {{"fwhm", crossings_json(r.fwhm)}, {"ul", crossings_json(r.ul)}, {"uh", crossings_json(r.uh)}};
    return j;
}

ordered_json verification_json(const VerificationReport &v) {
    ordered_json j;
    j["entry"] = v.entry;
    j["objective"] = std::string(to_string(v.objective));
    j["erratum_applied"] = v.erratum_applied;
    j["pass"] = v.pass();
    j["polished_phases_over_pi"] = v.polished_phases_over_pi;
    j["polished_caps_over_pi"] = v.polished_caps_over_pi;
    j["polished_loss"] = v.polished_loss;
    j["phase_deviation_over_pi"] = v.phase_deviation / kPi;
    j["phase_deviation_tol_over_pi"] = v.phase_deviation_tol / kPi;
    j["deviation_pass"] = v.deviation_pass;
    j["target_error"] = v.target_error;
    j["max_derivative"] = v.max_derivative;
    j["derivative_tol"] = v.derivative_tol;
    j["derivatives_pass"] = v.derivatives_pass;
    ordered_json d = ordered_json::array();
    for (const auto &c : v.derivatives) {
        d.push_back({{"quantity", c.quantity}, {"order", c.order}, {"epsilon", c.epsilon},
                     {"magnitude", std::abs(c.value)}});
    }
    j["derivatives"] = d;
    j["measured"] = report_json(v.measured);
    j["measured_printed"] = report_json(v.measured_printed);
    ordered_json cl = ordered_json::array();
    for (const auto &c : v.claims) {
        cl.push_back({{"quantity", c.quantity}, {"claimed", c.claimed}, {"measured", c.measured},
                      {"measured_printed", c.measured_printed}, {"tolerance", c.tolerance}, {"asserted", c.asserted}, {"pass", c.pass}});
    }
    j["claims"] = cl;
    return j;
}

std::ostream &open_output(const std::string &path, std::ofstream &file, std::ostream &fallback) {
    if (path.empty() || path == "-") {
        return fallback;
    }
    file.open(path);
    if (!file) {
        throw Error(ErrorCode::BadArgument, "cannot write " + path);
    }
    return file;
}

CatalogEntry derived_entry(const Solution &s, const FamilySpec &spec, std::size_t rank) {
    CatalogEntry e;
    e.name = std::string(to_string(spec.family)) + "-derived-" + std::to_string(rank + 1);
    e.table = "derived";
    e.theta_over_pi = spec.theta / kPi;
    e.family = spec.family;
    e.n_s = spec.n_s;
    e.n_r = spec.n_r;
    for (double p : s.params.phases) {
        e.phases_over_pi.push_back(PrintedAngle::decimal(p / kPi));
    }
    for (double a : s.params.extra_areas) {
        e.cap_areas_over_pi.push_back(a / kPi);
    }
    const PerformanceReport r = performance_report(s.seq);
    e.claims.fwhm = PrintedInterval{r.fwhm_range.lo / kPi, r.fwhm_range.hi / kPi};
    e.claims.ul = PrintedInterval{r.ul_range.lo / kPi, r.ul_range.hi / kPi};
    e.claims.uh = PrintedInterval{r.uh_range.lo / kPi, r.uh_range.hi / kPi};
    e.claims.delta = r.delta;
    e.claims.total_area = r.total_area / kPi;
    if (r.non_flat_profile) {
        e.flags.emplace_back(kNotFlatBottom);
    }
    return e;
}

void print_error(std::ostream &err, std::string_view code, const std::string &message) {
    err << ordered_json{{"error", code}, {"message", message}}.dump() << '\n';
}

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::VerificationFailure:
            return kExitVerification;
        case ErrorCode::NoConvergence:
            return kExitNoConvergence;
        default:
            return kExitUsage;
    }
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_angle_over_pi(const std::string &text) {
    std::string t;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            t.push_back(c);
        }
    }
    auto number = [&](std::string s) -> double {
        if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
            s.erase(s.size() - 2);
            if (s.empty() || s == "+") {
                return 1.0;
            }
            if (s == "-") {
                return -1.0;
            }
            if (s.back() == '*') {
                s.pop_back();
            }
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw Error(ErrorCode::BadArgument, "cannot parse angle '" + text + "'");
        }
        return v;
    };
    const auto slash = t.find('/');
    if (slash == std::string::npos) {
        return number(t);
    }
    const double den = number(t.substr(slash + 1));
    if (den == 0.0) {
        throw Error(ErrorCode::BadArgument, "zero denominator in angle '" + text + "'");
    }
    return number(t.substr(0, slash)) / den;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Composite pulse sequence derivation and verification", "cpforge"};
    app.require_subcommand(1);

    // derive
    auto *derive = app.add_subcommand("derive", "search a family template for sequences");
    std::string family_name, form_name, theta_text = "1", objective_name, derive_out;
    int ns = 1, nr = 0, restarts = 2000, max_iters = 5000;
    double lambda = 1.0, accept = 1e-18;
    std::uint64_t seed = 0;
    auto *family_opt = derive->add_option("--family", family_name, "AN, ANm, WN, ATN, ASN, PN or DN");
    auto *form_opt = derive->add_option("--form", form_name, "search only chi of a closed form: NB1, SK1 or PB1");
    family_opt->excludes(form_opt);
    form_opt->excludes(family_opt);
    derive->add_option("--theta", theta_text, "target angle in units of pi");
    derive->add_option("--ns", ns, "sensitivity order");
    derive->add_option("--nr", nr, "robustness order");
    derive->add_option("--objective", objective_name, "nb, nb-mod, pb or reg (default nb; pb for SK1 and PB1)");
    derive->add_option("--lambda", lambda, "regularizer weight");
    derive->add_option("--seed", seed, "random seed");
    derive->add_option("--restarts", restarts, "random restarts");
    derive->add_option("--max-iters", max_iters, "simplex iterations per restart");
    derive->add_option("--accept", accept, "loss accepted as converged");
    derive->add_option("--out", derive_out, "output JSON file (default stdout)");

    // verify
    auto *verify = app.add_subcommand("verify", "re-polish catalog entries and check their claims");
    bool verify_all = false;
    std::vector<std::string> verify_entries;
    auto *all_flag = verify->add_flag("--all", verify_all, "verify every entry");
    verify->add_option("--entry", verify_entries, "entry name (repeatable)")->excludes(all_flag);

    // profile
    auto *prof = app.add_subcommand("profile", "sample a fidelity profile as CSV");
    SequenceSource prof_src;
    prof_src.add_options(prof);
    std::string measure_name = "frobenius", prof_out;
    int grid = 2001;
    prof->add_option("--measure", measure_name, "frobenius or trace");
    prof->add_option("--grid", grid, "odd number of samples on [-1, 1]");
    prof->add_option("--out", prof_out, "output CSV file (default stdout)");

    // report
    auto *report = app.add_subcommand("report", "print performance measures as JSON");
    SequenceSource rep_src;
    rep_src.add_options(report);
    double alpha0 = 1e-4;
    report->add_option("--alpha0", alpha0, "threshold offset for the UL and UH ranges");

    // intersect
    auto *inter = app.add_subcommand("intersect", "locate the crossing of two Frobenius profiles");
    std::string name_a, name_b;
    std::vector<double> bracket{0.3, 0.6};
    inter->add_option("--a", name_a, "first entry")->required();
    inter->add_option("--b", name_b, "second entry")->required();
    inter->add_option("--bracket", bracket, "error interval lo hi")->expected(2);

    // catalog
    auto *cat = app.add_subcommand("catalog", "list or export the embedded catalog");
    bool list = false;
    std::string export_path;
    auto *list_flag = cat->add_flag("--list", list, "enumerate entries");
    cat->add_option("--export", export_path, "write the catalog JSON to a file ('-' for stdout)")->excludes(list_flag);

    std::vector<const char *> argv{"cpforge"};
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        print_error(err, "Usage", e.what());
        return kExitUsage;
    }

    try {
        if (derive->parsed()) {
            const double theta = parse_angle_over_pi(theta_text) * kPi;
            std::optional<ClosedForm> form;
            FamilySpec spec;
            if (!form_name.empty()) {
                form = parse_closed_form(form_name);
                if (!form) {
                    throw Error(ErrorCode::BadArgument, "unknown closed form '" + form_name + "'");
                }
                spec = closed_form_params(*form, theta).first;
                if (objective_name.empty() && *form != ClosedForm::NB1) {
                    objective_name = "pb";
                }
            } else {
                if (family_name.empty()) {
                    throw Error(ErrorCode::BadArgument, "derive needs --family or --form");
                }
                const auto family = parse_family(family_name);
                if (!family || *family == Family::Single || *family == Family::Custom) {
                    throw Error(ErrorCode::BadArgument, "unknown family '" + family_name + "'");
                }
                spec = FamilySpec{*family, theta, ns, nr};
            }
            if (objective_name.empty()) {
                objective_name = "nb";
            }
            const auto kind = parse_objective(objective_name);
            if (!kind) {
                throw Error(ErrorCode::BadArgument, "unknown objective '" + objective_name + "'");
            }
            ObjectiveSpec obj{*kind, theta, spec.n_s, spec.n_r, lambda, 0};
            validate(spec);
            validate(obj);
            SearchConfig cfg;
            cfg.restarts = restarts;
            cfg.max_iters_local = max_iters;
            cfg.accept_loss = accept;
            cfg.seed = seed;
            if (restarts < 1 || !(accept > 0.0) || max_iters < 1) {
                throw Error(ErrorCode::BadArgument, "restarts, max-iters and accept must be positive");
            }
            std::ofstream file;
            std::ostream &dest = open_output(derive_out, file, out);
            const auto solutions = form ? random_search(*form, obj, cfg) : random_search(spec, obj, cfg);
            if (solutions.empty()) {
                throw Error(ErrorCode::NoConvergence, "no restart reached loss " + format_double(accept));
            }
            std::vector<CatalogEntry> entries;
            for (std::size_t i = 0; i < solutions.size(); ++i) {
                entries.push_back(derived_entry(solutions[i], spec, i));
            }
            dest << entries_to_json(entries) << '\n';
            return kExitOk;
        }
        if (verify->parsed()) {
            if (!verify_all && verify_entries.empty()) {
                throw Error(ErrorCode::BadArgument, "verify needs --all or --entry");
            }
            std::vector<const CatalogEntry *> targets;
            if (verify_all) {
                for (const auto &e : load_catalog()) {
                    targets.push_back(&e);
                }
            } else {
                for (const auto &n : verify_entries) {
                    targets.push_back(&find_entry(n));
                }
            }
            ordered_json all = ordered_json::array();
            bool ok = true;
            for (const CatalogEntry *e : targets) {
                const VerificationReport rep = verify_entry(*e);
                ok = ok && rep.pass();
                all.push_back(verification_json(rep));
            }
            out << all.dump(2) << '\n';
            return ok ? kExitOk : kExitVerification;
        }
        if (prof->parsed()) {
            const auto measure = parse_measure(measure_name);
            if (!measure) {
                throw Error(ErrorCode::BadArgument, "unknown measure '" + measure_name + "'");
            }
            if (grid < 3 || grid % 2 == 0) {
                throw Error(ErrorCode::BadArgument, "--grid must be odd and at least 3");
            }
            const CompositeSequence seq = prof_src.resolve().sequence();
            std::ofstream file;
            std::ostream &dest = open_output(prof_out, file, out);
            const FidelityProfile p = profile(seq, *measure, grid);
            dest << "epsilon,area_over_pi,fidelity,infidelity\n";
            for (std::size_t i = 0; i < p.epsilons.size(); ++i) {
                const double e = p.epsilons[i];
                dest << format_double(e) << ',' << format_double(1.0 + e) << ',' << format_double(p.values[i]) << ','
                     << format_double(1.0 - p.values[i]) << '\n';
            }
            return kExitOk;
        }
        if (report->parsed()) {
            const CatalogEntry e = rep_src.resolve();
            ordered_json j{{"entry", e.name}};
            const ordered_json body = report_json(performance_report(e.sequence(), alpha0));
            for (const auto &[key, value] : body.items()) {
                j[key] = value;
            }
            out << j.dump(2) << '\n';
            return kExitOk;
        }
        if (inter->parsed()) {
            const Intersection x =
                intersect(find_entry(name_a).sequence(), find_entry(name_b).sequence(), bracket[0], bracket[1]);
            out << ordered_json{{"a", name_a}, {"b", name_b}, {"epsilon", x.epsilon}, {"fidelity", x.fidelity}}.dump()
                << '\n';
            return kExitOk;
        }
        if (cat->parsed()) {
            if (!export_path.empty()) {
                std::ofstream file;
                open_output(export_path, file, out) << entries_to_json(load_catalog()) << '\n';
                return kExitOk;
            }
            for (const auto &e : load_catalog()) {
                out << e.name << '\t' << e.table << '\t' << to_string(e.family) << '\t' << e.n_s << ',' << e.n_r
                    << '\t' << e.sequence().size() << " pulses";
                for (const auto &f : e.flags) {
                    out << '\t' << f;
                }
                out << '\n';
            }
            return kExitOk;
        }
    } catch (const Error &e) {
        print_error(err, to_string(e.code()), e.what());
        return exit_code(e.code());
    }
    return kExitUsage;
}

}  // namespace cpforge
