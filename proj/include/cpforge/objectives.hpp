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

#ifndef CPFORGE_OBJECTIVES_HPP
#define CPFORGE_OBJECTIVES_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cpforge/jets.hpp"
#include "cpforge/su2.hpp"

namespace cpforge {

/// NbReg is an extra narrowband variant: trace-fidelity derivatives up to
/// `trace_order` plus first-order element derivatives, all at e = +-1.
enum class ObjectiveKind { NbSu2, NbModSu2, PbSu2, PbReg, NbReg };

std::string_view to_string(ObjectiveKind kind);
std::optional<ObjectiveKind> parse_objective(std::string_view text);

struct ObjectiveSpec {
    ObjectiveKind kind = ObjectiveKind::NbSu2;
    double theta = kPi;
    int n_s = 1;
    int n_r = 0;
    double lambda = 1.0;
    int trace_order = 0;
};

/// Throws UnsupportedCombination / UnsupportedTheta / BadArgument.
void validate(const ObjectiveSpec &spec);

/// Truncation order of the jets the objective reads.
int jet_order(const ObjectiveSpec &spec);

/// One constrained quantity: a Taylor coefficient of `quantity` ("U11",
/// "U12" or "FT") of the given order at `epsilon`.
struct Constraint {
    std::string quantity;
    int order = 0;
    double epsilon = 0.0;
    Complex value;
    /// Loss weight: lambda for the regularizing element terms, else 1.
    double weight = 1.0;
};

/// Derivative constraints of the objective, without the target term.
std::vector<Constraint> constraints(const CompositeSequence &seq, const ObjectiveSpec &spec);

/// |U11(0) - cos(theta/2)|^2 + |U12(0) - sin(theta/2)|^2.
double target_error(const CompositeSequence &seq, double theta);

/// Real residual vector whose squared norm is the loss. Complex terms
/// contribute their real and imaginary parts; lambda terms are scaled by
/// sqrt(lambda).
std::vector<double> residuals(const CompositeSequence &seq, const ObjectiveSpec &spec);

double loss(const CompositeSequence &seq, const ObjectiveSpec &spec);

/// Residuals with the same zero set as residuals() but a regular Jacobian at
/// the solution. For PbReg the trace-fidelity terms at e = 0, which vanish
/// quadratically in the element derivatives, are replaced by the element
/// coefficients of orders 1..n_p at e = 0; other kinds are unchanged.
std::vector<double> polish_residuals(const CompositeSequence &seq, const ObjectiveSpec &spec);

double loss_nb_su2(const CompositeSequence &seq, const ObjectiveSpec &spec);
double loss_nb_modified(const CompositeSequence &seq, const ObjectiveSpec &spec);
double loss_pb_su2(const CompositeSequence &seq, const ObjectiveSpec &spec);
double loss_pb_reg(const CompositeSequence &seq, const ObjectiveSpec &spec);

}  // namespace cpforge

#endif
