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

#ifndef CPFORGE_FAMILIES_HPP
#define CPFORGE_FAMILIES_HPP

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "cpforge/su2.hpp"

namespace cpforge {

/// Phase offset that turns a pure theta rotation about x into the target
/// rotation about y; added to every template phase on instantiation.
inline constexpr double kTargetPhaseOffset = 0.5 * kPi;

struct FamilySpec {
    Family family = Family::AN;
    double theta = kPi;
    int n_s = 1;
    int n_r = 0;
};

/// Independent parameters of a template. Phases are in radians and exclude
/// the target offset. `extra_areas` holds the free cap areas: {alpha} for
/// ATN, {alpha, beta} for ASN, empty otherwise.
struct FreeParams {
    std::vector<double> phases;
    std::vector<double> extra_areas;

    std::size_t size() const {
        return phases.size() + extra_areas.size();
    }
    /// Flattened view: phases first, then areas.
    std::vector<double> flat() const;
    static FreeParams from_flat(std::span<const double> values, std::size_t phase_count);
};

/// Throws UnsupportedCombination when the family cannot realize the orders.
void validate(const FamilySpec &spec);

/// Number of pulses of the expanded template.
int pulse_count(const FamilySpec &spec);

/// Accepted free-phase counts. WN accepts the mirrored form (n_s + 1 phases,
/// only when n_s is even) and the general form; DN with seven pulses accepts
/// the four-phase structured form and the general form.
std::vector<std::size_t> accepted_phase_counts(const FamilySpec &spec);

/// Form used when searching: mirrored WN for even n_s, structured D7.
std::size_t default_phase_count(const FamilySpec &spec);

std::size_t extra_area_count(const FamilySpec &spec);

/// Expands free parameters into the full pulse train, target offset applied.
/// For AN with theta = pi the zero-area end caps are dropped.
CompositeSequence instantiate(const FamilySpec &spec, const FreeParams &params);

enum class ClosedForm { NB1, SK1, PB1 };

std::optional<ClosedForm> parse_closed_form(std::string_view text);

/// chi = arccos(-theta / (4 pi)) for NB1 and SK1, arccos(-theta / (8 pi)) for PB1.
double closed_form_chi(ClosedForm kind, double theta);

/// Free parameters of a closed-form template for an arbitrary chi.
FreeParams closed_form_template(ClosedForm kind, double chi);

/// Template parameters of the closed-form members (offset excluded).
std::pair<FamilySpec, FreeParams> closed_form_params(ClosedForm kind, double theta);

CompositeSequence closed_form(ClosedForm kind, double theta);

struct CountAndArea {
    int pulses = 0;
    double total_area = 0.0;
};

/// N = 2 n_s + 1 + 2 sigma(theta) and A_tot = N pi - 2 theta, with sigma = 1
/// on (0, pi) and 0 at pi.
CountAndArea count_and_area(double theta, int n_s);

bool is_pi_rotation(double theta);

}  // namespace cpforge

#endif
