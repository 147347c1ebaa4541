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

#ifndef CPFORGE_METRICS_HPP
#define CPFORGE_METRICS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "cpforge/su2.hpp"

namespace cpforge {

enum class Measure { Frobenius, Trace };

std::string_view to_string(Measure measure);
std::optional<Measure> parse_measure(std::string_view text);

/// 1 - sqrt(sum_jk |U_jk - R_jk|^2 / 4). Not clipped; can be negative.
double frobenius_fidelity(const SU2Matrix &u, double theta);

/// Tr[U R(theta)^dagger] / 2. Real for any SU(2) pair, kept complex so
/// callers can inspect rounding residue.
Complex trace_fidelity_complex(const SU2Matrix &u, double theta);
double trace_fidelity(const SU2Matrix &u, double theta);

double fidelity(const CompositeSequence &seq, Measure measure, double epsilon);

/// Values at e = +-1 of a sequence that acts as the identity there.
double bottom_frobenius(double theta);
double bottom_trace(double theta);

struct FidelityProfile {
    Measure measure = Measure::Frobenius;
    double theta = kPi;
    std::vector<double> epsilons;
    std::vector<double> values;
};

/// Uniform grid on [-1, 1]; grid_size must be odd and at least 3.
FidelityProfile profile(const CompositeSequence &seq, Measure measure, int grid_size = 2001);

/// Pulse-area interval [pi (1 - e_neg), pi (1 + e_pos)] in radians.
struct AreaInterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Outermost edge of the connected region around e = 0 where the Frobenius
/// fidelity stays at or above a threshold, on one branch.
struct Crossing {
    double epsilon = 0.0;
    /// The fidelity of this branch never drops below the threshold.
    bool unbounded = false;
    /// The fidelity climbs back above the threshold further out.
    bool recrosses = false;
};

struct BranchCrossings {
    Crossing positive;
    Crossing negative;
    AreaInterval interval() const;
};

struct PerformanceReport {
    double theta = kPi;
    double alpha0 = 1e-4;
    BranchCrossings fwhm;
    BranchCrossings ul;
    BranchCrossings uh;
    AreaInterval fwhm_range;
    AreaInterval ul_range;
    AreaInterval uh_range;
    /// e_UL - e_UH on the positive branch; this is the value in units of pi.
    double delta = 0.0;
    double bottom_frobenius = 0.0;
    double bottom_trace = 0.0;
    double total_area = 0.0;
    /// Set when any threshold is recrossed outside its central interval.
    bool non_flat_profile = false;
    /// How far the Frobenius fidelity beyond the UL edges drops below
    /// bottom_frobenius; zero for a flat bottom.
    double bottom_sag = 0.0;
};

/// Single-branch threshold crossing, bisected to 1e-12 in e.
Crossing find_crossing(const CompositeSequence &seq, double threshold, int direction);

PerformanceReport performance_report(const CompositeSequence &seq, double alpha0 = 1e-4);

struct Intersection {
    double epsilon = 0.0;
    double fidelity = 0.0;
};

/// Frobenius profiles of `a` and `b` must cross exactly once inside the
/// bracket; throws NoCrossing or MultipleCrossings otherwise.
Intersection intersect(const CompositeSequence &a, const CompositeSequence &b, double lo, double hi);

}  // namespace cpforge

#endif
