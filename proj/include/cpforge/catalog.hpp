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

#ifndef CPFORGE_CATALOG_HPP
#define CPFORGE_CATALOG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpforge/families.hpp"
#include "cpforge/metrics.hpp"
#include "cpforge/objectives.hpp"
#include "cpforge/search.hpp"

namespace cpforge {

/// A printed angle in units of pi: a decimal, or an exact fraction.
struct PrintedAngle {
    double value = 0.0;
    std::optional<std::pair<long, long>> fraction;

    static PrintedAngle decimal(double v) {
        return {v, std::nullopt};
    }
    static PrintedAngle exact(long num, long den) {
        return {static_cast<double>(num) / static_cast<double>(den), std::pair<long, long>{num, den}};
    }
    bool operator==(const PrintedAngle &) const = default;
};

/// Closed interval in units of pi, as printed.
struct PrintedInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const PrintedInterval &) const = default;
};

struct Claims {
    std::optional<PrintedInterval> fwhm;
    std::optional<PrintedInterval> ul;
    std::optional<PrintedInterval> uh;
    std::optional<double> delta;
    std::optional<double> total_area;
    bool operator==(const Claims &) const = default;
};

/// Corrected phases for a row whose printed phases cannot be right.
struct Erratum {
    std::vector<PrintedAngle> phases_over_pi;
    std::string note;
    bool operator==(const Erratum &) const = default;
};

inline constexpr std::string_view kNotFlatBottom = "NOT_FLAT_BOTTOM";
inline constexpr std::string_view kRegularizationDerived = "REGULARIZATION_DERIVED";
inline constexpr std::string_view kMisprintSuspect = "MISPRINT_SUSPECT";
inline constexpr std::string_view kPhaseErratum = "PHASE_ERRATUM";

struct CatalogEntry {
    std::string name;
    std::string table;
    double theta_over_pi = 1.0;
    Family family = Family::AN;
    int n_s = 0;
    int n_r = 0;
    std::vector<PrintedAngle> phases_over_pi;
    std::vector<double> cap_areas_over_pi;
    Claims claims;
    std::vector<std::string> flags;
    std::optional<Erratum> erratum;
    /// Trace-fidelity order for regularized narrowband rows.
    std::optional<int> trace_order;

    bool operator==(const CatalogEntry &) const = default;

    bool has_flag(std::string_view flag) const;
    /// Every phase is printed as an exact fraction or integer.
    bool exact() const;
    double theta() const;
    FamilySpec family_spec() const;
    /// Printed phases, or the erratum phases when present, in radians.
    FreeParams params() const;
    CompositeSequence sequence() const;
    /// Objective the row was derived under.
    ObjectiveSpec objective() const;
};

std::vector<CatalogEntry> entries_from_json(std::string_view text);
std::string entries_to_json(const std::vector<CatalogEntry> &entries);

/// Embedded table data, parsed once.
const std::vector<CatalogEntry> &load_catalog();

/// Throws UnknownEntry.
const CatalogEntry &find_entry(std::string_view name);

struct Tolerances {
    /// Max polished-minus-printed phase change, radians.
    double phase_deviation = 5e-4 * kPi;
    double exact_phase_deviation = 1e-9;
    /// Max magnitude of any constrained Taylor coefficient after polishing.
    double derivative = 1e-8;
    /// FWHM / UL / UH endpoints, delta and total area, units of pi. A total
    /// area printed more coarsely is allowed half a unit of its last digit.
    double measure = 2e-3;
};

struct ClaimCheck {
    std::string quantity;
    double claimed = 0.0;
    double measured = 0.0;
    /// Same quantity evaluated on the unpolished printed sequence.
    double measured_printed = 0.0;
    double tolerance = 0.0;
    /// False for claims that are only reported.
    bool asserted = true;
    bool pass = true;
};

struct VerificationReport {
    std::string entry;
    ObjectiveKind objective = ObjectiveKind::NbSu2;
    bool erratum_applied = false;
    std::vector<double> polished_phases_over_pi;
    std::vector<double> polished_caps_over_pi;
    double polished_loss = 0.0;
    double phase_deviation = 0.0;
    double phase_deviation_tol = 0.0;
    bool deviation_pass = true;
    double target_error = 0.0;
    std::vector<Constraint> derivatives;
    double max_derivative = 0.0;
    double derivative_tol = 0.0;
    bool derivatives_pass = true;
    PerformanceReport measured;
    PerformanceReport measured_printed;
    std::vector<ClaimCheck> claims;

    bool claims_pass() const;
    bool pass() const {
        return deviation_pass && derivatives_pass && claims_pass();
    }
};

VerificationReport verify_entry(const CatalogEntry &entry, const Tolerances &tol = {},
                                const SearchConfig &cfg = {});

/// Throws VerificationFailure naming the first failing measurement.
void require_pass(const VerificationReport &report);

}  // namespace cpforge

#endif
