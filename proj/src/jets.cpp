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

#include "cpforge/jets.hpp"

#include <cassert>
#include <cmath>
#include <utility>

#include "cpforge/error.hpp"

namespace cpforge {

ComplexJet::ComplexJet(double center, std::vector<Complex> coeffs) : center_(center), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) {
        throw Error(ErrorCode::BadArgument, "a jet needs at least one coefficient");
    }
}

ComplexJet ComplexJet::constant(double center, int order, Complex value) {
    if (order < 0) {
        throw Error(ErrorCode::BadArgument, "jet order must be nonnegative");
    }
    std::vector<Complex> c(static_cast<std::size_t>(order) + 1, Complex(0.0));
    c[0] = value;
    return {center, std::move(c)};
}

Complex ComplexJet::derivative(int m) const {
    return (*this)[m] * std::tgamma(static_cast<double>(m) + 1.0);
}

ComplexJet ComplexJet::conj() const {
    ComplexJet out = *this;
    for (Complex &c : out.coeffs_) {
        c = std::conj(c);
    }
    return out;
}

ComplexJet &ComplexJet::operator+=(const ComplexJet &rhs) {
    assert(rhs.coeffs_.size() == coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    return *this;
}

ComplexJet &ComplexJet::operator-=(const ComplexJet &rhs) {
    assert(rhs.coeffs_.size() == coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    return *this;
}

ComplexJet &ComplexJet::operator*=(Complex scale) {
    for (Complex &c : coeffs_) {
        c *= scale;
    }
    return *this;
}

ComplexJet operator*(const ComplexJet &lhs, const ComplexJet &rhs) {
    assert(lhs.coeffs_.size() == rhs.coeffs_.size());
    const std::size_t n = lhs.coeffs_.size();
    std::vector<Complex> out(n, Complex(0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const Complex li = lhs.coeffs_[i];
        for (std::size_t j = 0; i + j < n; ++j) {
            out[i + j] += li * rhs.coeffs_[j];
        }
    }
    return {lhs.center_, std::move(out)};
}

MatrixJet MatrixJet::identity(double center, int order) {
    return {ComplexJet::constant(center, order, 1.0), ComplexJet::zero(center, order)};
}

MatrixJet operator*(const MatrixJet &lhs, const MatrixJet &rhs) {
    return {lhs.a * rhs.a - lhs.b * rhs.b.conj(), lhs.a * rhs.b + lhs.b * rhs.a.conj()};
}

MatrixJet pulse_jet(const Pulse &pulse, double center, int order) {
    if (order < 0) {
        throw Error(ErrorCode::BadArgument, "jet order must be nonnegative");
    }
    // cos(h + h e) and sin(h + h e) expanded about e = center; the m-th
    // derivative shifts the argument by m pi/2 and scales by h^m.
    const double h = 0.5 * pulse.area();
    const double x0 = h * (1.0 + center);
    const Complex rot = std::polar(1.0, pulse.phase() - 0.5 * kPi);
    const auto n = static_cast<std::size_t>(order) + 1;
    std::vector<Complex> a(n), b(n);
    double scale = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
        const double shift = x0 + 0.5 * kPi * static_cast<double>(m);
        a[m] = scale * std::cos(shift);
        b[m] = rot * (scale * std::sin(shift));
        scale *= h / static_cast<double>(m + 1);
    }
    return {ComplexJet(center, std::move(a)), ComplexJet(center, std::move(b))};
}

MatrixJet compose_jet(std::span<const Pulse> pulses, double center, int order) {
    MatrixJet u = MatrixJet::identity(center, order);
    for (const Pulse &p : pulses) {
        u = pulse_jet(p, center, order) * u;
    }
    return u;
}

MatrixJet compose_jet(const CompositeSequence &seq, double center, int order) {
    return compose_jet(std::span<const Pulse>(seq.pulses), center, order);
}

ComplexJet trace_fidelity_jet(const MatrixJet &u, double theta) {
    // Tr[U R^dagger] = c (a + a*) + s (b + b*) with R = [[c, s], [-s, c]].
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    ComplexJet out = (u.a + u.a.conj()) * Complex(0.5 * c);
    out += (u.b + u.b.conj()) * Complex(0.5 * s);
    return out;
}

ComplexJet trace_fidelity_jet(const CompositeSequence &seq, double theta, double center, int order) {
    return trace_fidelity_jet(compose_jet(seq, center, order), theta);
}

ComplexJet unimodularity_jet(const MatrixJet &u) {
    return u.a * u.a.conj() + u.b * u.b.conj();
}

}  // namespace cpforge
