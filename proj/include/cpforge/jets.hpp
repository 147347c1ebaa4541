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

#ifndef CPFORGE_JETS_HPP
#define CPFORGE_JETS_HPP

#include <vector>

#include "cpforge/su2.hpp"

namespace cpforge {

/// Truncated Taylor series about `center`: coefficient m is f^(m)(center)/m!.
///
/// Arithmetic keeps the truncation order of the operands; both operands of a
/// binary operation must share center and order.
class ComplexJet {
  public:
    ComplexJet() = default;
    ComplexJet(double center, std::vector<Complex> coeffs);

    static ComplexJet constant(double center, int order, Complex value);
    static ComplexJet zero(double center, int order) {
        return constant(center, order, 0.0);
    }

    double center() const {
        return center_;
    }
    int order() const {
        return static_cast<int>(coeffs_.size()) - 1;
    }
    const std::vector<Complex> &coeffs() const {
        return coeffs_;
    }
    Complex operator[](int m) const {
        return coeffs_[static_cast<std::size_t>(m)];
    }
    Complex &operator[](int m) {
        return coeffs_[static_cast<std::size_t>(m)];
    }

    /// m-th derivative at the center, i.e. m! * coefficient m.
    Complex derivative(int m) const;

    ComplexJet conj() const;

    ComplexJet &operator+=(const ComplexJet &rhs);
    ComplexJet &operator-=(const ComplexJet &rhs);
    ComplexJet &operator*=(Complex scale);

    friend ComplexJet operator+(ComplexJet lhs, const ComplexJet &rhs) {
        return lhs += rhs;
    }
    friend ComplexJet operator-(ComplexJet lhs, const ComplexJet &rhs) {
        return lhs -= rhs;
    }
    friend ComplexJet operator*(ComplexJet lhs, Complex scale) {
        return lhs *= scale;
    }
    friend ComplexJet operator*(Complex scale, ComplexJet rhs) {
        return rhs *= scale;
    }
    /// Truncated Cauchy product.
    friend ComplexJet operator*(const ComplexJet &lhs, const ComplexJet &rhs);

  private:
    double center_ = 0.0;
    std::vector<Complex> coeffs_{Complex(0.0)};
};

/// Jet-valued Cayley-Klein pair of a propagator.
struct MatrixJet {
    ComplexJet a;
    ComplexJet b;

    static MatrixJet identity(double center, int order);

    double center() const {
        return a.center();
    }
    int order() const {
        return a.order();
    }
    /// Element (0,0) / (0,1) jets.
    const ComplexJet &u11() const {
        return a;
    }
    const ComplexJet &u12() const {
        return b;
    }
    SU2Matrix value() const {
        return {a[0], b[0]};
    }

    friend MatrixJet operator*(const MatrixJet &lhs, const MatrixJet &rhs);
};

MatrixJet pulse_jet(const Pulse &pulse, double center, int order);

/// Jet of the composite propagator U_N ... U_1 about `center`.
MatrixJet compose_jet(std::span<const Pulse> pulses, double center, int order);
MatrixJet compose_jet(const CompositeSequence &seq, double center, int order);

/// Jet of F_T(e) = Tr[U(e) R(theta)^dagger] / 2.
ComplexJet trace_fidelity_jet(const MatrixJet &u, double theta);
ComplexJet trace_fidelity_jet(const CompositeSequence &seq, double theta, double center, int order);

/// Jet of |a|^2 + |b|^2; identically one for any propagator.
ComplexJet unimodularity_jet(const MatrixJet &u);

}  // namespace cpforge

#endif
