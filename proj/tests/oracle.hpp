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


#ifndef CPFORGE_TESTS_ORACLE_HPP
#define CPFORGE_TESTS_ORACLE_HPP

// Independent reference implementations used only by the tests. Nothing here
// touches the jet code; propagators are plain 2x2 complex matrices.

#include <array>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "cpforge/su2.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Mat = std::array<std::array<Complex, 2>, 2>;

inline Mat identity() {
    return {{{Complex(1.0), Complex(0.0)}, {Complex(0.0), Complex(1.0)}}};
}

inline Mat mul(const Mat &x, const Mat &y) {
    Mat out{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    return out;
}

// Full matrix of one pulse; eps may be complex, every entry is analytic in it.
inline Mat pulse(double area, double phase, Complex eps) {
    const Complex half = 0.5 * area * (1.0 + eps);
    const Complex c = std::cos(half);
    const Complex s = std::sin(half);
    const Complex i(0.0, 1.0);
    return {{{c, -i * s * std::exp(i * phase)}, {-i * s * std::exp(-i * phase), c}}};
}

// U_N ... U_1, built pulse by pulse.
inline Mat chain(const std::vector<cpforge::Pulse> &pulses, Complex eps) {
    Mat u = identity();
    for (const auto &p : pulses) {
        u = mul(pulse(p.area(), p.phase(), eps), u);
    }
    return u;
}

inline Mat chain(const cpforge::CompositeSequence &seq, Complex eps) {
    return chain(seq.pulses, eps);
}

// Tr[U R(theta)^T] / 2 written without conjugation so it stays analytic.
inline Complex trace_fidelity(const Mat &u, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    return 0.5 * (c * u[0][0] + s * u[0][1] - s * u[1][0] + c * u[1][1]);
}

// Taylor coefficients of an entire function by the trapezoidal rule on a
// circle about `center` (a complex-step difference formula).
inline std::vector<Complex> taylor(const std::function<Complex(Complex)> &f, double center, int order,
                                   double radius = 0.5, int points = 128) {
    std::vector<Complex> out(static_cast<std::size_t>(order) + 1, Complex(0.0));
    for (int k = 0; k < points; ++k) {
        const double t = 2.0 * std::numbers::pi * k / points;
        const Complex z = std::polar(radius, t);
        const Complex fz = f(center + z);
        for (int m = 0; m <= order; ++m) {
            out[static_cast<std::size_t>(m)] += fz * std::polar(1.0, -m * t);
        }
    }
    for (int m = 0; m <= order; ++m) {
        out[static_cast<std::size_t>(m)] /= points * std::pow(radius, m);
    }
    return out;
}

// Real central differences on the real axis: first and second derivative
// from the 5-point stencil, one Richardson step (h and h/2).
inline Complex d1(const std::function<Complex(double)> &f, double x, double h = 1e-3) {
    auto st = [&](double hh) {
        return (-f(x + 2 * hh) + 8.0 * f(x + hh) - 8.0 * f(x - hh) + f(x - 2 * hh)) / (12.0 * hh);
    };
    return (16.0 * st(0.5 * h) - st(h)) / 15.0;
}

inline Complex d2(const std::function<Complex(double)> &f, double x, double h = 1e-3) {
    auto st = [&](double hh) {
        return (-f(x + 2 * hh) + 16.0 * f(x + hh) - 30.0 * f(x) + 16.0 * f(x - hh) - f(x - 2 * hh)) /
               (12.0 * hh * hh);
    };
    return (16.0 * st(0.5 * h) - st(h)) / 15.0;
}

inline double frobenius_fidelity(const Mat &u, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const Mat r{{{Complex(c), Complex(s)}, {Complex(-s), Complex(c)}}};
    double sum = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            sum += std::norm(u[i][j] - r[i][j]);
        }
    }
    return 1.0 - std::sqrt(0.25 * sum);
}

inline std::vector<cpforge::Pulse> random_pulses(std::mt19937_64 &rng, int count) {
    std::uniform_real_distribution<double> area(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<cpforge::Pulse> out;
    for (int i = 0; i < count; ++i) {
        const double a = area(rng);
        out.emplace_back(a, phase(rng));
    }
    return out;
}

}  // namespace oracle

#endif
