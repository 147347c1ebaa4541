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

#include "cpforge/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "cpforge/error.hpp"

namespace cpforge {

namespace {

constexpr std::array<std::pair<ObjectiveKind, std::string_view>, 5> kObjectiveNames{{
    {ObjectiveKind::NbSu2, "nb"},
    {ObjectiveKind::NbModSu2, "nb-mod"},
    {ObjectiveKind::PbSu2, "pb"},
    {ObjectiveKind::PbReg, "reg"},
    {ObjectiveKind::NbReg, "nb-reg"},
}};

void require_kind(const ObjectiveSpec &spec, ObjectiveKind kind) {
    if (spec.kind != kind) {
        throw Error(ErrorCode::BadArgument, std::string("objective kind mismatch: expected ") +
                                                std::string(to_string(kind)) + ", got " +
                                                std::string(to_string(spec.kind)));
    }
}

void push_element_terms(std::vector<Constraint> &out, const MatrixJet &u, double eps, int from, int to,
                        bool with_u11, double weight = 1.0) {
    for (int k = from; k <= to; ++k) {
        if (with_u11) {
            out.push_back({"U11", k, eps, u.a[k], weight});
        }
        out.push_back({"U12", k, eps, u.b[k], weight});
    }
}

void push_trace_terms(std::vector<Constraint> &out, const ComplexJet &ft, double eps, int to) {
    for (int k = 1; k <= to; ++k) {
        out.push_back({"FT", k, eps, ft[k], 1.0});
    }
}

}  // namespace

std::string_view to_string(ObjectiveKind kind) {
    for (const auto &[k, name] : kObjectiveNames) {
        if (k == kind) {
            return name;
        }
    }
    return "nb";
}

std::optional<ObjectiveKind> parse_objective(std::string_view text) {
    for (const auto &[k, name] : kObjectiveNames) {
        if (name == text) {
            return k;
        }
    }
    return std::nullopt;
}

void validate(const ObjectiveSpec &spec) {
    if (!(spec.theta > 0.0) || spec.theta > kPi + 1e-12) {
        throw Error(ErrorCode::UnsupportedTheta, "theta must lie in (0, pi]");
    }
    switch (spec.kind) {
        case ObjectiveKind::NbSu2:
            if (spec.n_r != 0 || spec.n_s < 0) {
                throw Error(ErrorCode::UnsupportedCombination, "narrowband objectives need n_r = 0 and n_s >= 0");
            }
            return;
        case ObjectiveKind::NbModSu2:
            if (spec.n_r != 0 || spec.n_s < 1) {
                throw Error(ErrorCode::UnsupportedCombination, "the modified objective needs n_r = 0 and n_s >= 1");
            }
            if (std::abs(spec.theta - kPi) > 1e-12) {
                throw Error(ErrorCode::UnsupportedTheta, "the modified objective only works for theta = pi");
            }
            return;
        case ObjectiveKind::PbSu2:
            if (spec.n_s < 1 || spec.n_r < 1) {
                throw Error(ErrorCode::UnsupportedCombination, "passband objectives need n_s >= 1 and n_r >= 1");
            }
            return;
        case ObjectiveKind::PbReg:
            if (spec.n_s < 1 || spec.n_s != spec.n_r) {
                throw Error(ErrorCode::UnsupportedCombination, "the regularized objective needs n_s = n_r >= 1");
            }
            if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
                throw Error(ErrorCode::BadArgument, "the regularizer weight must be positive");
            }
            return;
        case ObjectiveKind::NbReg:
            if (spec.n_r != 0 || spec.trace_order < 1) {
                throw Error(ErrorCode::UnsupportedCombination, "nb-reg needs n_r = 0 and trace_order >= 1");
            }
            if (!(spec.lambda > 0.0) || !std::isfinite(spec.lambda)) {
                throw Error(ErrorCode::BadArgument, "the regularizer weight must be positive");
            }
            return;
    }
}

int jet_order(const ObjectiveSpec &spec) {
    switch (spec.kind) {
        case ObjectiveKind::NbSu2:
            return spec.n_s;
        case ObjectiveKind::NbModSu2:
            return 2 * spec.n_s;
        case ObjectiveKind::PbSu2:
            return std::max(spec.n_s, spec.n_r);
        case ObjectiveKind::PbReg:
            return 2 * spec.n_s;
        case ObjectiveKind::NbReg:
            return std::max(1, spec.trace_order);
    }
    return 0;
}

std::vector<Constraint> constraints(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    validate(spec);
    const int order = jet_order(spec);
    std::vector<Constraint> out;
    if (order == 0) {
        return out;
    }
    const MatrixJet lo = compose_jet(seq, -1.0, order);
    const MatrixJet hi = compose_jet(seq, 1.0, order);
    switch (spec.kind) {
        case ObjectiveKind::NbSu2:
            push_element_terms(out, lo, -1.0, 1, spec.n_s, true);
            push_element_terms(out, hi, 1.0, 1, spec.n_s, true);
            break;
        case ObjectiveKind::NbModSu2:
            push_element_terms(out, lo, -1.0, 1, 2 * spec.n_s, false);
            push_element_terms(out, hi, 1.0, 1, 2 * spec.n_s, false);
            break;
        case ObjectiveKind::PbSu2: {
            const MatrixJet mid = compose_jet(seq, 0.0, order);
            push_element_terms(out, mid, 0.0, 1, spec.n_r, true);
            push_element_terms(out, lo, -1.0, 1, spec.n_s, true);
            push_element_terms(out, hi, 1.0, 1, spec.n_s, true);
            break;
        }
        case ObjectiveKind::PbReg: {
            const MatrixJet mid = compose_jet(seq, 0.0, order);
            push_trace_terms(out, trace_fidelity_jet(mid, seq.theta), 0.0, order);
            push_trace_terms(out, trace_fidelity_jet(lo, seq.theta), -1.0, order);
            push_trace_terms(out, trace_fidelity_jet(hi, seq.theta), 1.0, order);
            push_element_terms(out, mid, 0.0, 1, 1, true, spec.lambda);
            push_element_terms(out, hi, 1.0, 1, 1, true, spec.lambda);
            push_element_terms(out, lo, -1.0, 1, 1, true, spec.lambda);
            break;
        }
        case ObjectiveKind::NbReg:
            push_trace_terms(out, trace_fidelity_jet(lo, seq.theta), -1.0, spec.trace_order);
            push_trace_terms(out, trace_fidelity_jet(hi, seq.theta), 1.0, spec.trace_order);
            push_element_terms(out, lo, -1.0, 1, 1, true, spec.lambda);
            push_element_terms(out, hi, 1.0, 1, 1, true, spec.lambda);
            break;
    }
    return out;
}

double target_error(const CompositeSequence &seq, double theta) {
    const SU2Matrix u = compose(seq, 0.0);
    return std::norm(u.a - std::cos(0.5 * theta)) + std::norm(u.b - std::sin(0.5 * theta));
}

std::vector<double> residuals(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    const auto terms = constraints(seq, spec);
    std::vector<double> out;
    out.reserve(4 + 2 * terms.size());
    const SU2Matrix u = compose(seq, 0.0);
    const Complex da = u.a - std::cos(0.5 * spec.theta);
    const Complex db = u.b - std::sin(0.5 * spec.theta);
    out.insert(out.end(), {da.real(), da.imag(), db.real(), db.imag()});
    for (const Constraint &c : terms) {
        const double w = c.weight == 1.0 ? 1.0 : std::sqrt(c.weight);
        out.push_back(w * c.value.real());
        out.push_back(w * c.value.imag());
    }
    return out;
}

std::vector<double> polish_residuals(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    if (spec.kind != ObjectiveKind::PbReg) {
        return residuals(seq, spec);
    }
    std::vector<double> out = residuals(seq, spec);
    // Layout after the four target entries: FT at 0, -1, +1 (2 * order real
    // slots each), then the weighted element terms.
    const int order = jet_order(spec);
    const auto ft0_begin = out.begin() + 4;
    out.erase(ft0_begin, ft0_begin + 2 * order);
    const MatrixJet mid = compose_jet(seq, 0.0, spec.n_s);
    for (int k = 1; k <= spec.n_s; ++k) {
        out.insert(out.end(), {mid.a[k].real(), mid.a[k].imag(), mid.b[k].real(), mid.b[k].imag()});
    }
    return out;
}

double loss(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    double total = 0.0;
    for (double r : residuals(seq, spec)) {
        total += r * r;
    }
    return total;
}

double loss_nb_su2(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    require_kind(spec, ObjectiveKind::NbSu2);
    return loss(seq, spec);
}

double loss_nb_modified(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    require_kind(spec, ObjectiveKind::NbModSu2);
    return loss(seq, spec);
}

double loss_pb_su2(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    require_kind(spec, ObjectiveKind::PbSu2);
    return loss(seq, spec);
}

double loss_pb_reg(const CompositeSequence &seq, const ObjectiveSpec &spec) {
    require_kind(spec, ObjectiveKind::PbReg);
    return loss(seq, spec);
}

}  // namespace cpforge
