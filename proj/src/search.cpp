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

#include "cpforge/search.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "cpforge/error.hpp"
#include "cpforge/metrics.hpp"

namespace cpforge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double fold_area(double a) {
    a = std::fmod(std::abs(a), 2.0 * kTwoPi);
    return a > kTwoPi ? 2.0 * kTwoPi - a : a;
}

// A template may be larger than the orders it is polished for, so refine
// only insists on a common target angle.
void check_compatible(const FamilySpec &spec, const ObjectiveSpec &obj, bool same_orders) {
    validate(spec);
    validate(obj);
    if (std::abs(spec.theta - obj.theta) > 1e-12) {
        throw Error(ErrorCode::BadArgument, "family and objective disagree on theta");
    }
    if (same_orders && (spec.n_s != obj.n_s || spec.n_r != obj.n_r)) {
        throw Error(ErrorCode::BadArgument, "family and objective disagree on orders");
    }
}

// Binds a template and an objective into functions of a flat parameter vector.
class Problem {
  public:
    using Expander = std::function<FreeParams(const std::vector<double> &)>;

    Problem(const FamilySpec &spec, const ObjectiveSpec &obj, std::size_t phase_count)
        : spec_(spec), obj_(obj), expand_([phase_count](const std::vector<double> &x) {
              return FreeParams::from_flat(x, phase_count);
          }) {
    }
    Problem(const FamilySpec &spec, const ObjectiveSpec &obj, Expander expand)
        : spec_(spec), obj_(obj), expand_(std::move(expand)) {
    }

    FreeParams params(const std::vector<double> &x) const {
        FreeParams p = expand_(x);
        for (double &a : p.extra_areas) {
            a = fold_area(a);
        }
        return p;
    }
    CompositeSequence sequence(const std::vector<double> &x) const {
        return instantiate(spec_, params(x));
    }
    double value(const std::vector<double> &x) const {
        return loss(sequence(x), obj_);
    }
    std::vector<double> residual(const std::vector<double> &x) const {
        return residuals(sequence(x), obj_);
    }
    std::vector<double> polish_residual(const std::vector<double> &x) const {
        return polish_residuals(sequence(x), obj_);
    }
    bool has_polish_form() const {
        return obj_.kind == ObjectiveKind::PbReg;
    }
    Solution solution(const std::vector<double> &x, double accept) const {
        Solution s;
        s.params = canonicalize(params(x));
        s.seq = instantiate(spec_, s.params);
        s.loss = loss(s.seq, obj_);
        s.converged = s.loss <= accept;
        return s;
    }

  private:
    FamilySpec spec_;
    ObjectiveSpec obj_;
    Expander expand_;
};

double sum_squares(const std::vector<double> &r) {
    double t = 0.0;
    for (double v : r) {
        t += v * v;
    }
    return t;
}

// Least-squares polish of `x`. Among candidates that reach the acceptance
// loss the one closest to `x` wins; otherwise the lowest loss does.
std::vector<double> polish(const Problem &prob, const std::vector<double> &x, const SearchConfig &cfg) {
    std::vector<double> best = x;
    double best_value = prob.value(x);
    double best_dist = 0.0;
    auto distance = [&](const std::vector<double> &c) {
        double d = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            d = std::max(d, std::abs(c[i] - x[i]));
        }
        return d;
    };
    auto consider = [&](std::vector<double> cand) {
        const double v = prob.value(cand);
        const double d = distance(cand);
        const bool ok = v <= cfg.accept_loss;
        const bool best_ok = best_value <= cfg.accept_loss;
        if ((ok && (!best_ok || d < best_dist)) || (!ok && !best_ok && v < best_value)) {
            best_value = v;
            best_dist = d;
            best = std::move(cand);
        }
    };
    const auto r = [&](const std::vector<double> &v) { return prob.residual(v); };
    consider(levenberg_marquardt(r, x, cfg.polish_iters, true).x);
    consider(levenberg_marquardt(r, x, cfg.polish_iters, false).x);
    if (prob.has_polish_form()) {
        const auto rp = [&](const std::vector<double> &v) { return prob.polish_residual(v); };
        consider(levenberg_marquardt(rp, x, cfg.polish_iters, true).x);
        consider(levenberg_marquardt(rp, x, cfg.polish_iters, false).x);
    }
    return best;
}

// Simplex, then polish; shared by the search restarts and refine.
std::vector<double> local_minimize(const Problem &prob, std::vector<double> x, double step, const SearchConfig &cfg) {
    const auto f = [&](const std::vector<double> &v) { return prob.value(v); };
    SimplexResult nm = nelder_mead(f, std::move(x), step, cfg.max_iters_local, cfg.accept_loss);
    return polish(prob, nm.x, cfg);
}

double ranking_key(const Solution &s, const ObjectiveSpec &obj) {
    const PerformanceReport rep = performance_report(s.seq);
    const bool passband = obj.kind == ObjectiveKind::PbSu2 || obj.kind == ObjectiveKind::PbReg;
    return passband ? rep.delta : rep.fwhm.positive.epsilon + rep.fwhm.negative.epsilon;
}

}  // namespace

int worker_threads(const SearchConfig &cfg) {
    if (cfg.threads > 0) {
        return cfg.threads;
    }
    if (const char *env = std::getenv("CPFORGE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

FreeParams canonicalize(const FreeParams &params) {
    FreeParams out = params;
    for (double &p : out.phases) {
        p = canonical_phase(p);
    }
    for (double &a : out.extra_areas) {
        a = fold_area(a);
    }
    return out;
}

bool equivalent(const FreeParams &a, const FreeParams &b, double tol) {
    if (a.phases.size() != b.phases.size() || a.extra_areas.size() != b.extra_areas.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.extra_areas.size(); ++i) {
        if (std::abs(a.extra_areas[i] - b.extra_areas[i]) > tol) {
            return false;
        }
    }
    for (const double sign : {1.0, -1.0}) {
        bool same = true;
        for (std::size_t i = 0; i < a.phases.size() && same; ++i) {
            same = std::abs(phase_distance(a.phases[i], sign * b.phases[i])) <= tol;
        }
        if (same) {
            return true;
        }
    }
    return false;
}

SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f, std::vector<double> x0,
                          double step, int max_iters, double target) {
    const std::size_t n = x0.size();
    SimplexResult out;
    if (n == 0) {
        out.value = f(x0);
        out.x = std::move(x0);
        return out;
    }
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> vals(n + 1);
    auto build = [&](const std::vector<double> &center, double h) {
        for (std::size_t i = 0; i <= n; ++i) {
            pts[i] = center;
            if (i > 0) {
                pts[i][i - 1] += h;
            }
            vals[i] = f(pts[i]);
        }
    };
    build(x0, step);
    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    int collapses = 0;
    double h = step;
    int it = 0;
    for (; it < max_iters; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return vals[i] < vals[j]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];
        if (vals[best] <= target) {
            break;
        }
        double diameter = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t k = 0; k < n; ++k) {
                diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
            }
        }
        if (diameter < 1e-12) {
            // Collapsed away from the target: rebuild a smaller simplex a few times.
            if (++collapses > 3) {
                break;
            }
            h *= 0.1;
            const std::vector<double> keep = pts[best];
            build(keep, h);
            continue;
        }
        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                centroid[k] += pts[i][k] / static_cast<double>(n);
            }
        }
        for (std::size_t k = 0; k < n; ++k) {
            trial[k] = centroid[k] + (centroid[k] - pts[worst][k]);
        }
        const double fr = f(trial);
        if (fr < vals[best]) {
            for (std::size_t k = 0; k < n; ++k) {
                trial2[k] = centroid[k] + 2.0 * (centroid[k] - pts[worst][k]);
            }
            const double fe = f(trial2);
            if (fe < fr) {
                pts[worst] = trial2;
                vals[worst] = fe;
            } else {
                pts[worst] = trial;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = trial;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        for (std::size_t k = 0; k < n; ++k) {
            trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                                : centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
        }
        const double fc = f(trial2);
        if (fc < std::min(fr, vals[worst])) {
            pts[worst] = trial2;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t k = 0; k < n; ++k) {
                pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
            }
            vals[i] = f(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    out.x = pts[best];
    out.value = vals[best];
    out.iterations = it;
    return out;
}

SimplexResult levenberg_marquardt(const std::function<std::vector<double>(const std::vector<double> &)> &r,
                                  std::vector<double> x0, int max_iters, bool scaled) {
    constexpr double kFdStep = 1e-7;
    const std::size_t n = x0.size();
    SimplexResult out;
    out.x = std::move(x0);
    std::vector<double> res = r(out.x);
    out.value = sum_squares(res);
    if (n == 0) {
        return out;
    }
    const std::size_t m = res.size();
    Eigen::MatrixXd jac(m, n);
    double mu = 1e-3;
    bool fresh = false;
    for (int it = 0; it < max_iters && out.value > 0.0; ++it) {
        out.iterations = it + 1;
        if (!fresh) {
            std::vector<double> xp = out.x;
            for (std::size_t k = 0; k < n; ++k) {
                xp[k] = out.x[k] + kFdStep;
                const std::vector<double> rp = r(xp);
                xp[k] = out.x[k] - kFdStep;
                const std::vector<double> rm = r(xp);
                xp[k] = out.x[k];
                for (std::size_t i = 0; i < m; ++i) {
                    jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
                        (rp[i] - rm[i]) / (2.0 * kFdStep);
                }
            }
            fresh = true;
        }
        const Eigen::Map<const Eigen::VectorXd> rv(res.data(), static_cast<Eigen::Index>(m));
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * rv;
        Eigen::MatrixXd lhs = jtj;
        const double iso = std::max(jtj.diagonal().maxCoeff(), 1e-12);
        for (Eigen::Index k = 0; k < lhs.rows(); ++k) {
            // Marquardt scaling with a floor for parameters the residual ignores.
            lhs(k, k) += mu * (scaled ? std::max(jtj(k, k), 1e-12) : iso);
        }
        const Eigen::VectorXd delta = lhs.ldlt().solve(-g);
        if (!delta.allFinite()) {
            mu *= 10.0;
            continue;
        }
        std::vector<double> xn = out.x;
        for (std::size_t k = 0; k < n; ++k) {
            xn[k] += delta(static_cast<Eigen::Index>(k));
        }
        std::vector<double> rn = r(xn);
        const double vn = sum_squares(rn);
        if (vn < out.value) {
            out.x = std::move(xn);
            res = std::move(rn);
            const double rel = (out.value - vn) / out.value;
            out.value = vn;
            fresh = false;
            mu = std::max(mu / 3.0, 1e-12);
            if (delta.lpNorm<Eigen::Infinity>() < 1e-15 || rel < 1e-14) {
                break;
            }
        } else {
            mu *= 4.0;
            if (mu > 1e16) {
                break;
            }
        }
    }
    return out;
}

namespace {

std::vector<Solution> multi_start(const Problem &prob, std::size_t dims, const ObjectiveSpec &obj,
                                  const SearchConfig &cfg) {
    if (cfg.restarts < 1 || !(cfg.accept_loss > 0.0)) {
        throw Error(ErrorCode::BadArgument, "search needs restarts >= 1 and accept_loss > 0");
    }

    std::vector<std::optional<Solution>> found(static_cast<std::size_t>(cfg.restarts));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < cfg.restarts; i = next++) {
            std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
            std::uniform_real_distribution<double> uni(0.0, kTwoPi);
            std::vector<double> x(dims);
            for (double &v : x) {
                v = uni(rng);
            }
            Solution s = prob.solution(local_minimize(prob, std::move(x), 0.5, cfg), cfg.accept_loss);
            if (s.converged) {
                found[static_cast<std::size_t>(i)] = std::move(s);
            }
        }
    };
    const int nthreads = std::min(worker_threads(cfg), cfg.restarts);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(static_cast<std::size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back(worker);
        }
    }

    // Merge in restart order so the outcome does not depend on scheduling.
    std::vector<Solution> unique;
    for (auto &s : found) {
        if (!s) {
            continue;
        }
        const bool dup = std::any_of(unique.begin(), unique.end(), [&](const Solution &u) {
            return equivalent(u.params, s->params, cfg.dedup_tol);
        });
        if (!dup) {
            unique.push_back(std::move(*s));
        }
    }
    std::vector<std::pair<double, std::size_t>> keys;
    keys.reserve(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i) {
        keys.emplace_back(ranking_key(unique[i], obj), i);
    }
    std::stable_sort(keys.begin(), keys.end(), [](const auto &l, const auto &r) { return l.first < r.first; });
    std::vector<Solution> ranked;
    ranked.reserve(unique.size());
    for (const auto &[key, idx] : keys) {
        ranked.push_back(std::move(unique[idx]));
    }
    return ranked;
}

}  // namespace

std::vector<Solution> random_search(const FamilySpec &spec, const ObjectiveSpec &obj, const SearchConfig &cfg) {
    check_compatible(spec, obj, true);
    const std::size_t phases = default_phase_count(spec);
    const Problem prob(spec, obj, phases);
    return multi_start(prob, phases + extra_area_count(spec), obj, cfg);
}

std::vector<Solution> random_search(ClosedForm kind, const ObjectiveSpec &obj, const SearchConfig &cfg) {
    const FamilySpec spec = closed_form_params(kind, obj.theta).first;
    check_compatible(spec, obj, true);
    const Problem prob(spec, obj, [kind](const std::vector<double> &x) { return closed_form_template(kind, x[0]); });
    return multi_start(prob, 1, obj, cfg);
}

Solution refine(const FreeParams &params, const FamilySpec &spec, const ObjectiveSpec &obj,
                const SearchConfig &cfg) {
    check_compatible(spec, obj, false);
    // Validates the parameter count.
    (void)instantiate(spec, params);
    const Problem prob(spec, obj, params.phases.size());
    const std::vector<double> x0 = params.flat();

    std::vector<double> best = x0;
    double best_value = prob.value(x0);
    auto consider = [&](const std::vector<double> &x) {
        const double v = prob.value(x);
        if (v < best_value) {
            best_value = v;
            best = x;
        }
    };
    consider(polish(prob, x0, cfg));
    if (best_value > cfg.accept_loss) {
        consider(local_minimize(prob, best, 1e-3, cfg));
    }

    // Returned phases stay on the branch of the input so deviations read directly.
    Solution s;
    s.params = prob.params(best);
    s.seq = instantiate(spec, s.params);
    s.loss = loss(s.seq, obj);
    s.converged = s.loss <= cfg.accept_loss;
    return s;
}

}  // namespace cpforge
