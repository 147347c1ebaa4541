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

#ifndef CPFORGE_SU2_HPP
#define CPFORGE_SU2_HPP

#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cpforge {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into [0, 2pi).
double canonical_phase(double phase);

/// Signed distance between two angles, wrapped into (-pi, pi].
double phase_distance(double a, double b);

/// Element of SU(2) stored through its Cayley-Klein pair:
///
///     | a        b  |
///     | -conj(b) conj(a) |
///
/// Only (a, b) are stored, so unimodularity is structural and |a|^2 + |b|^2
/// is the one remaining invariant.
struct SU2Matrix {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};

    static SU2Matrix identity() {
        return {};
    }

    Complex u11() const {
        return a;
    }
    Complex u12() const {
        return b;
    }
    Complex u21() const {
        return -std::conj(b);
    }
    Complex u22() const {
        return std::conj(a);
    }

    /// Row-major element access, zero-based.
    Complex element(int row, int col) const;

    double norm_defect() const {
        return std::abs(std::norm(a) + std::norm(b) - 1.0);
    }

    SU2Matrix adjoint() const {
        return {std::conj(a), -b};
    }

    friend SU2Matrix operator*(const SU2Matrix &lhs, const SU2Matrix &rhs) {
        return {lhs.a * rhs.a - lhs.b * std::conj(rhs.b), lhs.a * rhs.b + lhs.b * std::conj(rhs.a)};
    }
};

/// One constituent rotation: nominal area and phase, both in radians.
/// The phase is canonicalized into [0, 2pi) on construction.
class Pulse {
  public:
    Pulse(double area, double phase);

    double area() const {
        return area_;
    }
    double phase() const {
        return phase_;
    }

    bool operator==(const Pulse &) const = default;

  private:
    double area_;
    double phase_;
};

enum class Family { AN, ANm, WN, ATN, ASN, PN, DN, Single, Custom };

std::string_view to_string(Family family);
std::optional<Family> parse_family(std::string_view text);

/// Ordered pulse train, applied first-to-last, together with the rotation it
/// is meant to implement and the orders it was designed for.
struct CompositeSequence {
    std::vector<Pulse> pulses;
    double theta = kPi;
    int n_s = 0;
    int n_r = 0;
    Family family = Family::Custom;

    std::size_t size() const {
        return pulses.size();
    }
    /// Sum of nominal pulse areas.
    double total_area() const;
};

/// Errant single-pulse propagator with every area scaled by (1 + epsilon):
/// a = cos(A(1+e)/2), b = -i sin(A(1+e)/2) exp(i phi).
SU2Matrix pulse_propagator(double area, double phase, double epsilon);
SU2Matrix pulse_propagator(const Pulse &pulse, double epsilon);

/// Product U_N ... U_2 U_1 of the errant pulse propagators.
SU2Matrix compose(std::span<const Pulse> pulses, double epsilon);
SU2Matrix compose(const CompositeSequence &seq, double epsilon);

/// R(theta) = exp(i theta sigma_y / 2).
SU2Matrix target_rotation(double theta);

/// Overall gate parameters of a propagator written as
///
///     | e^{i g} cos(A/2)          -i e^{i p} sin(A/2) |
///     | -i e^{-i p} sin(A/2)      e^{-i g} cos(A/2)   |
///
/// The representation is two-to-one; the branch with the geometric phase g in
/// (-pi/2, pi/2] is returned, so areas land in [0, 2pi).
struct GateParams {
    double area = 0.0;
    double gate_phase = 0.0;
    double geom_phase = 0.0;
    /// Set when |a| is 0 or 1 within 1e-12; the undefined phase is then 0.
    bool degenerate = false;
};

GateParams decompose(const SU2Matrix &u);
SU2Matrix reconstruct(const GateParams &params);

}  // namespace cpforge

#endif
