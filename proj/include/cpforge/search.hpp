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

#ifndef CPFORGE_SEARCH_HPP
#define CPFORGE_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "cpforge/families.hpp"
#include "cpforge/objectives.hpp"

namespace cpforge {

struct SearchConfig {
    int restarts = 2000;
    int max_iters_local = 5000;
    double accept_loss = 1e-18;
    std::uint64_t seed = 0;
    /// Worker count; 0 reads CPFORGE_THREADS, falling back to the hardware.
    int threads = 0;
    /// Max phase distance (radians) under which two solutions are merged.
    double dedup_tol = 1e-6;
    /// Iteration cap of the Levenberg-Marquardt polish.
    int polish_iters = 400;
};

struct Solution {
    FreeParams params;
    double loss = 0.0;
    CompositeSequence seq;
    bool converged = false;
};

int worker_threads(const SearchConfig &cfg);

/// Phases wrapped into [0, 2pi); cap areas folded into [0, 2pi].
FreeParams canonicalize(const FreeParams &params);

/// Equal modulo 2pi wrapping and global phase negation, which conjugates the
/// propagator and leaves every objective unchanged.
bool equivalent(const FreeParams &a, const FreeParams &b, double tol);

/// Derivative-free simplex minimizer. `step` sizes the initial simplex.
struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};
SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x0,
                          double step, int max_iters, double target);

/// Levenberg-Marquardt on a residual vector with a central-difference
/// Jacobian; never returns a point worse than `x0`. With `scaled` off the
/// damping is isotropic, which keeps steps near minimum norm when the
/// solutions form a manifold.
SimplexResult levenberg_marquardt(const std::function<std::vector<double>(const std::vector<double> &)> &r,
                                  std::vector<double> x0, int max_iters, bool scaled = true);

/// Multi-start search. Returns the distinct solutions with loss at or below
/// cfg.accept_loss ranked by FWHM width (narrowband) or rectangularity
/// (passband); an empty list means no restart converged.
std::vector<Solution> random_search(const FamilySpec &spec, const ObjectiveSpec &obj, const SearchConfig &cfg);

/// Multi-start search over the single angle chi of a closed-form template.
/// The objective fixes theta and must carry the orders of the template.
std::vector<Solution> random_search(ClosedForm kind, const ObjectiveSpec &obj, const SearchConfig &cfg);

/// Local minimization from `params`. The returned loss never exceeds the
/// starting loss; `converged` reports whether it reached cfg.accept_loss.
Solution refine(const FreeParams &params, const FamilySpec &spec, const ObjectiveSpec &obj,
                const SearchConfig &cfg);

}  // namespace cpforge

#endif
