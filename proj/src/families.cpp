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

#include "cpforge/families.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpforge/error.hpp"

namespace cpforge {

namespace {

[[noreturn]] void unsupported(const FamilySpec &spec, const std::string &why) {
    throw Error(ErrorCode::UnsupportedCombination,
                std::string(to_string(spec.family)) + " with n_s=" + std::to_string(spec.n_s) +
                    ", n_r=" + std::to_string(spec.n_r) + ": " + why);
}

void push(std::vector<Pulse> &out, double area, double phase) {
    out.emplace_back(area, phase + kTargetPhaseOffset);
}

}  // namespace

std::vector<double> FreeParams::flat() const {
    std::vector<double> out = phases;
    out.insert(out.end(), extra_areas.begin(), extra_areas.end());
    return out;
}

FreeParams FreeParams::from_flat(std::span<const double> values, std::size_t phase_count) {
    FreeParams p;
    p.phases.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(phase_count));
    p.extra_areas.assign(values.begin() + static_cast<std::ptrdiff_t>(phase_count), values.end());
    return p;
}

bool is_pi_rotation(double theta) {
    return std::abs(theta - kPi) < 1e-12;
}

void validate(const FamilySpec &spec) {
    if (!(spec.theta > 0.0) || spec.theta > kPi + 1e-12) {
        throw Error(ErrorCode::UnsupportedTheta, "theta must lie in (0, pi], got " + std::to_string(spec.theta));
    }
    if (spec.n_s < 0 || spec.n_r < 0) {
        unsupported(spec, "orders must be nonnegative");
    }
    const bool narrowband = spec.n_r == 0;
    switch (spec.family) {
        case Family::Single:
            if (spec.n_s != 0 || spec.n_r != 0) {
                unsupported(spec, "a single pulse has no compensation orders");
            }
            return;
        case Family::AN:
            if (!narrowband) {
                unsupported(spec, "narrowband family requires n_r = 0");
            }
            return;
        case Family::ANm:
            if (!narrowband || spec.n_s < 1) {
                unsupported(spec, "requires n_r = 0 and n_s >= 1");
            }
            if (!is_pi_rotation(spec.theta)) {
                throw Error(ErrorCode::UnsupportedTheta, "the modified antisymmetric family exists only for theta = pi");
            }
            return;
        case Family::WN:
            if (!narrowband) {
                unsupported(spec, "narrowband family requires n_r = 0");
            }
            if (spec.n_s < 2) {
                unsupported(spec, "the Wimperis-kind family has no member below second order");
            }
            return;
        case Family::ATN:
        case Family::ASN:
            if (!narrowband || spec.n_s < 1) {
                unsupported(spec, "requires n_r = 0 and n_s >= 1");
            }
            return;
        case Family::PN:
            if (spec.n_s != spec.n_r || spec.n_s < 1) {
                unsupported(spec, "pari passu passband requires n_s = n_r >= 1");
            }
            return;
        case Family::DN:
            if (spec.n_s < 1 || spec.n_r < 1) {
                unsupported(spec, "passband requires n_s >= 1 and n_r >= 1");
            }
            return;
        case Family::Custom:
            unsupported(spec, "custom sequences have no template");
    }
}

int pulse_count(const FamilySpec &spec) {
    validate(spec);
    switch (spec.family) {
        case Family::Single:
            return 1;
        case Family::AN:
            return 2 * spec.n_s + (is_pi_rotation(spec.theta) ? 1 : 3);
        case Family::ANm:
        case Family::WN:
        case Family::ASN:
            return 2 * spec.n_s + 1;
        case Family::ATN:
            return 2 * spec.n_s + 2;
        case Family::PN:
            return 2 * spec.n_s + 1;
        case Family::DN:
            return 2 * (spec.n_s + spec.n_r) + 1;
        case Family::Custom:
            break;
    }
    return 0;
}

std::vector<std::size_t> accepted_phase_counts(const FamilySpec &spec) {
    const auto n = static_cast<std::size_t>(pulse_count(spec));
    const auto ns = static_cast<std::size_t>(spec.n_s);
    switch (spec.family) {
        case Family::AN:
            return {is_pi_rotation(spec.theta) ? ns + 1 : ns + 2};
        case Family::ANm:
        case Family::ATN:
            return {ns + 1};
        case Family::WN:
            if (spec.n_s % 2 == 0) {
                return {ns + 1, n};
            }
            return {n};
        case Family::DN:
            if (n == 7) {
                return {4, n};
            }
            return {n};
        default:
            return {n};
    }
}

std::size_t default_phase_count(const FamilySpec &spec) {
    return accepted_phase_counts(spec).front();
}

std::size_t extra_area_count(const FamilySpec &spec) {
    switch (spec.family) {
        case Family::ATN:
            return 1;
        case Family::ASN:
            return 2;
        default:
            return 0;
    }
}

CompositeSequence instantiate(const FamilySpec &spec, const FreeParams &params) {
    const auto counts = accepted_phase_counts(spec);
    const std::size_t areas = extra_area_count(spec);
    if (std::find(counts.begin(), counts.end(), params.phases.size()) == counts.end() ||
        params.extra_areas.size() != areas) {
        throw Error(ErrorCode::BadParamCount,
                    std::string(to_string(spec.family)) + " (n_s=" + std::to_string(spec.n_s) +
                        ", n_r=" + std::to_string(spec.n_r) + ") cannot take " +
                        std::to_string(params.phases.size()) + " phases and " +
                        std::to_string(params.extra_areas.size()) + " cap areas");
    }

    const auto &ph = params.phases;
    const std::size_t np = ph.size();
    const int n = pulse_count(spec);
    CompositeSequence seq;
    seq.theta = spec.theta;
    seq.n_s = spec.n_s;
    seq.n_r = spec.n_r;
    seq.family = spec.family;
    auto &out = seq.pulses;
    out.reserve(static_cast<std::size_t>(n));

    switch (spec.family) {
        case Family::Single:
            push(out, spec.theta, ph[0]);
            break;
        case Family::AN:
        case Family::ANm: {
            // phi_1 .. phi_{n_s} phi_{n_s+1} -phi_{n_s} .. -phi_1, optionally
            // wrapped in (pi - theta)/2 caps carrying +-phi_0.
            const bool caps = !is_pi_rotation(spec.theta);
            const std::size_t first = caps ? 1 : 0;
            const double cap = 0.5 * (kPi - spec.theta);
            if (caps) {
                push(out, cap, ph[0]);
            }
            for (std::size_t i = first; i < np; ++i) {
                push(out, kPi, ph[i]);
            }
            for (std::size_t i = np - 1; i-- > first;) {
                push(out, kPi, -ph[i]);
            }
            if (caps) {
                push(out, cap, -ph[0]);
            }
            break;
        }
        case Family::WN:
            push(out, spec.theta, ph[0]);
            for (std::size_t i = 1; i < np; ++i) {
                push(out, kPi, ph[i]);
            }
            if (np != static_cast<std::size_t>(n)) {
                for (std::size_t i = np; i-- > 1;) {
                    push(out, kPi, ph[i]);
                }
            }
            break;
        case Family::ATN: {
            const double alpha = params.extra_areas[0];
            push(out, alpha, ph[0]);
            for (std::size_t i = 1; i < np; ++i) {
                push(out, kPi, ph[i]);
            }
            for (std::size_t i = np; i-- > 1;) {
                push(out, kPi, -ph[i]);
            }
            push(out, alpha, -ph[0]);
            break;
        }
        case Family::ASN:
            push(out, params.extra_areas[0], ph[0]);
            for (std::size_t i = 1; i + 1 < np; ++i) {
                push(out, kPi, ph[i]);
            }
            push(out, params.extra_areas[1], ph[np - 1]);
            break;
        case Family::PN:
            push(out, spec.theta, ph[0]);
            for (std::size_t i = 1; i < np; ++i) {
                push(out, kTwoPi, ph[i]);
            }
            break;
        case Family::DN:
            push(out, spec.theta, ph[0]);
            if (np == 4 && n == 7) {
                // phi_1 phi_2 phi_3 phi_4 -phi_3 -phi_4 (phi_2 - pi)
                push(out, kPi, ph[1]);
                push(out, kPi, ph[2]);
                push(out, kPi, ph[3]);
                push(out, kPi, -ph[2]);
                push(out, kPi, -ph[3]);
                push(out, kPi, ph[1] - kPi);
            } else {
                for (std::size_t i = 1; i < np; ++i) {
                    push(out, kPi, ph[i]);
                }
            }
            break;
        case Family::Custom:
            break;
    }
    return seq;
}

std::optional<ClosedForm> parse_closed_form(std::string_view text) {
    if (text == "NB1") {
        return ClosedForm::NB1;
    }
    if (text == "SK1") {
        return ClosedForm::SK1;
    }
    if (text == "PB1") {
        return ClosedForm::PB1;
    }
    return std::nullopt;
}

double closed_form_chi(ClosedForm kind, double theta) {
    const double denom = kind == ClosedForm::PB1 ? 8.0 * kPi : 4.0 * kPi;
    return std::acos(-theta / denom);
}

FreeParams closed_form_template(ClosedForm kind, double chi) {
    if (kind == ClosedForm::PB1) {
        return FreeParams{{0.0, chi, -chi, -chi, chi}, {}};
    }
    // NB1 uses the mirrored W5 form theta_0 pi_chi pi_-chi pi_-chi pi_chi.
    return FreeParams{{0.0, chi, -chi}, {}};
}

std::pair<FamilySpec, FreeParams> closed_form_params(ClosedForm kind, double theta) {
    const FreeParams params = closed_form_template(kind, closed_form_chi(kind, theta));
    switch (kind) {
        case ClosedForm::NB1:
            return {FamilySpec{Family::WN, theta, 2, 0}, params};
        case ClosedForm::SK1:
            return {FamilySpec{Family::PN, theta, 1, 1}, params};
        case ClosedForm::PB1:
            return {FamilySpec{Family::PN, theta, 2, 2}, params};
    }
    return {};
}

CompositeSequence closed_form(ClosedForm kind, double theta) {
    const auto [spec, params] = closed_form_params(kind, theta);
    return instantiate(spec, params);
}

CountAndArea count_and_area(double theta, int n_s) {
    if (!(theta > 0.0) || theta > kPi + 1e-12 || n_s < 0) {
        throw Error(ErrorCode::BadArgument, "count_and_area needs 0 < theta <= pi and n_s >= 0");
    }
    const int sigma = is_pi_rotation(theta) ? 0 : 1;
    const int n = 2 * n_s + 1 + 2 * sigma;
    return {n, n * kPi - 2.0 * theta};
}

}  // namespace cpforge
