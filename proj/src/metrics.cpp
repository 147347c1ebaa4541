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

#include "cpforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpforge/error.hpp"

namespace cpforge {

namespace {

constexpr int kScanSteps = 4000;
constexpr double kBisectTol = 1e-12;

double frob(const CompositeSequence &seq, double eps) {
    return frobenius_fidelity(compose(seq, eps), seq.theta);
}

// Bisects f between an inside point and an outside point of {f >= 0}.
template <class F>
double bisect(F &&f, double inside, double outside) {
    while (std::abs(outside - inside) > kBisectTol) {
        const double mid = 0.5 * (inside + outside);
        if (f(mid) >= 0.0) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    return 0.5 * (inside + outside);
}

}  // namespace

std::string_view to_string(Measure measure) {
    return measure == Measure::Frobenius ? "frobenius" : "trace";
}

std::optional<Measure> parse_measure(std::string_view text) {
    if (text == "frobenius") {
        return Measure::Frobenius;
    }
    if (text == "trace") {
        return Measure::Trace;
    }
    return std::nullopt;
}

double frobenius_fidelity(const SU2Matrix &u, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return 1.0 - std::sqrt(0.5 * (std::norm(u.a - c) + std::norm(u.b - s)));
}

Complex trace_fidelity_complex(const SU2Matrix &u, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    // Tr[U R^dagger] with R^dagger = [[c, -s], [s, c]].
    return 0.5 * (u.u11() * c + u.u12() * s - u.u21() * s + u.u22() * c);
}

double trace_fidelity(const SU2Matrix &u, double theta) {
    return trace_fidelity_complex(u, theta).real();
}

double fidelity(const CompositeSequence &seq, Measure measure, double epsilon) {
    const SU2Matrix u = compose(seq, epsilon);
    return measure == Measure::Frobenius ? frobenius_fidelity(u, seq.theta) : trace_fidelity(u, seq.theta);
}

double bottom_frobenius(double theta) {
    return 1.0 - std::sqrt(1.0 - std::cos(0.5 * theta));
}

double bottom_trace(double theta) {
    return std::cos(0.5 * theta);
}

FidelityProfile profile(const CompositeSequence &seq, Measure measure, int grid_size) {
    if (grid_size < 3 || grid_size % 2 == 0) {
        throw Error(ErrorCode::BadArgument, "profile grid must be odd and at least 3, got " + std::to_string(grid_size));
    }
    FidelityProfile out;
    out.measure = measure;
    out.theta = seq.theta;
    out.epsilons.resize(static_cast<std::size_t>(grid_size));
    out.values.resize(static_cast<std::size_t>(grid_size));
    const int half = grid_size / 2;
    for (int i = 0; i < grid_size; ++i) {
        // Symmetric construction keeps e = 0 and e = +-1 exact.
        const double eps = static_cast<double>(i - half) / static_cast<double>(half);
        out.epsilons[static_cast<std::size_t>(i)] = eps;
        out.values[static_cast<std::size_t>(i)] = fidelity(seq, measure, eps);
    }
    return out;
}

AreaInterval BranchCrossings::interval() const {
    return {kPi * (1.0 - negative.epsilon), kPi * (1.0 + positive.epsilon)};
}

Crossing find_crossing(const CompositeSequence &seq, double threshold, int direction) {
    const double sign = direction >= 0 ? 1.0 : -1.0;
    auto g = [&](double e) { return frob(seq, sign * e) - threshold; };
    Crossing out;
    if (g(0.0) < 0.0) {
        out.epsilon = 0.0;
    } else {
        int step = 1;
        double prev = 0.0;
        for (; step <= kScanSteps; ++step) {
            const double e = static_cast<double>(step) / kScanSteps;
            if (g(e) < 0.0) {
                out.epsilon = bisect(g, prev, e);
                break;
            }
            prev = e;
        }
        if (step > kScanSteps) {
            out.epsilon = 1.0;
            out.unbounded = true;
            return out;
        }
    }
    const int start = static_cast<int>(std::ceil(out.epsilon * kScanSteps));
    for (int step = std::max(start, 1); step <= kScanSteps; ++step) {
        const double e = static_cast<double>(step) / kScanSteps;
        if (e > out.epsilon + 1e-9 && g(e) >= 0.0) {
            out.recrosses = true;
            break;
        }
    }
    return out;
}

PerformanceReport performance_report(const CompositeSequence &seq, double alpha0) {
    if (!(alpha0 > 0.0 && alpha0 < 0.5)) {
        throw Error(ErrorCode::BadArgument, "alpha0 must lie in (0, 1/2)");
    }
    PerformanceReport r;
    r.theta = seq.theta;
    r.alpha0 = alpha0;
    r.bottom_frobenius = bottom_frobenius(seq.theta);
    r.bottom_trace = bottom_trace(seq.theta);
    r.total_area = seq.total_area();

    auto both = [&](double threshold) {
        return BranchCrossings{find_crossing(seq, threshold, 1), find_crossing(seq, threshold, -1)};
    };
    r.fwhm = both(0.5 * (1.0 + r.bottom_frobenius));
    r.ul = both(r.bottom_frobenius + alpha0);
    r.uh = both(1.0 - alpha0);
    r.fwhm_range = r.fwhm.interval();
    r.ul_range = r.ul.interval();
    r.uh_range = r.uh.interval();
    r.delta = r.ul.positive.epsilon - r.uh.positive.epsilon;
    for (const BranchCrossings *b : {&r.fwhm, &r.ul, &r.uh}) {
        r.non_flat_profile = r.non_flat_profile || b->positive.recrosses || b->negative.recrosses;
    }
    // Depth by which the profile beyond the UL edges undershoots the bottom.
    for (int dir : {1, -1}) {
        const double from = (dir > 0 ? r.ul.positive : r.ul.negative).epsilon;
        for (int step = 0; step <= kScanSteps; ++step) {
            const double e = static_cast<double>(step) / kScanSteps;
            if (e > from) {
                r.bottom_sag = std::max(r.bottom_sag, r.bottom_frobenius - frob(seq, dir * e));
            }
        }
    }
    return r;
}

Intersection intersect(const CompositeSequence &a, const CompositeSequence &b, double lo, double hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw Error(ErrorCode::BadArgument, "intersection bracket must satisfy lo < hi");
    }
    auto d = [&](double e) { return frob(a, e) - frob(b, e); };
    constexpr int kSamples = 2000;
    int changes = 0;
    double left = lo;
    double right = hi;
    double prev_e = lo;
    double prev_v = d(lo);
    for (int i = 1; i <= kSamples; ++i) {
        const double e = lo + (hi - lo) * static_cast<double>(i) / kSamples;
        const double v = d(e);
        if ((prev_v < 0.0) != (v < 0.0)) {
            ++changes;
            left = prev_e;
            right = e;
        }
        prev_e = e;
        prev_v = v;
    }
    if (changes == 0) {
        throw Error(ErrorCode::NoCrossing, "fidelity profiles do not cross in the bracket");
    }
    if (changes > 1) {
        throw Error(ErrorCode::MultipleCrossings,
                    std::to_string(changes) + " crossings in the bracket; narrow it");
    }
    // Orient so that the inside point has d >= 0.
    const bool left_nonneg = d(left) >= 0.0;
    auto oriented = [&](double e) { return left_nonneg ? d(e) : -d(e); };
    const double eps = bisect(oriented, left, right);
    return {eps, frob(a, eps)};
}

}  // namespace cpforge
