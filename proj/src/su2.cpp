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

#include "cpforge/su2.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "cpforge/error.hpp"

namespace cpforge {

double canonical_phase(double phase) {
    double r = std::fmod(phase, kTwoPi);
    if (r < 0) {
        r += kTwoPi;
    }
    // fmod of a tiny negative number can round up to exactly 2pi.
    if (r >= kTwoPi) {
        r = 0.0;
    }
    return r;
}

double phase_distance(double a, double b) {
    double d = std::remainder(a - b, kTwoPi);
    if (d <= -kPi) {
        d += kTwoPi;
    }
    return d;
}

Complex SU2Matrix::element(int row, int col) const {
    if (row == 0) {
        return col == 0 ? u11() : u12();
    }
    return col == 0 ? u21() : u22();
}

Pulse::Pulse(double area, double phase) : area_(area), phase_(canonical_phase(phase)) {
    if (!(area >= 0.0) || !std::isfinite(area)) {
        throw Error(ErrorCode::BadArgument, "pulse area must be finite and nonnegative, got " + std::to_string(area));
    }
    if (!std::isfinite(phase)) {
        throw Error(ErrorCode::BadArgument, "pulse phase must be finite");
    }
}

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 9> kFamilyNames{{
    {Family::AN, "AN"},
    {Family::ANm, "ANm"},
    {Family::WN, "WN"},
    {Family::ATN, "ATN"},
    {Family::ASN, "ASN"},
    {Family::PN, "PN"},
    {Family::DN, "DN"},
    {Family::Single, "SINGLE"},
    {Family::Custom, "CUSTOM"},
}};

// std::polar requires a nonnegative magnitude.
Complex scaled_cis(double magnitude, double angle) {
    return {magnitude * std::cos(angle), magnitude * std::sin(angle)};
}

}  // namespace

std::string_view to_string(Family family) {
    for (const auto &[f, name] : kFamilyNames) {
        if (f == family) {
            return name;
        }
    }
    return "CUSTOM";
}

std::optional<Family> parse_family(std::string_view text) {
    for (const auto &[f, name] : kFamilyNames) {
        if (name == text) {
            return f;
        }
    }
    return std::nullopt;
}

double CompositeSequence::total_area() const {
    return std::accumulate(pulses.begin(), pulses.end(), 0.0,
                           [](double acc, const Pulse &p) { return acc + p.area(); });
}

SU2Matrix pulse_propagator(double area, double phase, double epsilon) {
    const double half = 0.5 * area * (1.0 + epsilon);
    const double s = std::sin(half);
    // -i * e^{i phi} = e^{i (phi - pi/2)}
    return {Complex(std::cos(half), 0.0), scaled_cis(s, phase - 0.5 * kPi)};
}

SU2Matrix pulse_propagator(const Pulse &pulse, double epsilon) {
    return pulse_propagator(pulse.area(), pulse.phase(), epsilon);
}

SU2Matrix compose(std::span<const Pulse> pulses, double epsilon) {
    SU2Matrix u = SU2Matrix::identity();
    for (const Pulse &p : pulses) {
        u = pulse_propagator(p, epsilon) * u;
    }
    return u;
}

SU2Matrix compose(const CompositeSequence &seq, double epsilon) {
    return compose(std::span<const Pulse>(seq.pulses), epsilon);
}

SU2Matrix target_rotation(double theta) {
    return {Complex(std::cos(0.5 * theta), 0.0), Complex(std::sin(0.5 * theta), 0.0)};
}

GateParams decompose(const SU2Matrix &u) {
    constexpr double kDegenerate = 1e-12;
    GateParams out;
    const double abs_a = std::min(1.0, std::abs(u.a));
    const double abs_b = std::abs(u.b);
    const double half = std::acos(abs_a);

    if (abs_a <= kDegenerate) {
        out.degenerate = true;
        out.geom_phase = 0.0;
        out.area = kPi;
    } else {
        double g = std::arg(u.a);
        if (g > 0.5 * kPi || g <= -0.5 * kPi) {
            g = g > 0 ? g - kPi : g + kPi;
            out.area = kTwoPi - 2.0 * half;
        } else {
            out.area = 2.0 * half;
        }
        out.geom_phase = g;
    }

    if (abs_b <= kDegenerate || std::abs(abs_a - 1.0) <= kDegenerate) {
        out.degenerate = true;
        out.gate_phase = 0.0;
    } else {
        out.gate_phase = canonical_phase(std::arg(u.b) + 0.5 * kPi);
    }
    return out;
}

SU2Matrix reconstruct(const GateParams &params) {
    const double half = 0.5 * params.area;
    return {scaled_cis(std::cos(half), params.geom_phase),
            scaled_cis(std::sin(half), params.gate_phase - 0.5 * kPi)};
}

}  // namespace cpforge
