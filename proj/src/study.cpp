/*
 * src/study.cpp
 *
 * Copyright 2026 The fracbiot Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fracbiot/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "fracbiot/errors.hpp"
#include "fracbiot/io.hpp"

namespace fracbiot {

std::vector<double> ErrorReport::series(const std::string& norm_name) const {
    std::vector<double> out;
    for (const auto& r : rows)
        if (r.norm_name == norm_name) out.push_back(r.value);
    return out;
}

std::vector<std::string> ErrorReport::norm_names() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
        if (std::find(out.begin(), out.end(), r.norm_name) == out.end()) out.push_back(r.norm_name);
    return out;
}

bool ErrorReport::all_pass() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

void ErrorReport::write_csv(std::ostream& os) const {
    os << csv_row({"epsilon", "norm_name", "value"});
    for (const auto& r : rows) os << csv_row({format_double(r.epsilon), r.norm_name, format_double(r.value)});
}

void ErrorReport::write_verdicts(std::ostream& os) const {
    os << "regime: " << regime << '\n';
    os << "h: " << format_double(h) << '\n';
    os << "dt: " << format_double(dt) << '\n';
    os << "config_hash: " << config_hash << '\n';
    for (const auto& v : verdicts) os << (v.pass ? "PASS " : "FAIL ") << v.name << ": " << v.detail << '\n';
    os << (all_pass() ? "OVERALL PASS" : "OVERALL FAIL") << '\n';
}

void validate_eps_list(const std::vector<double>& eps_list) {
    if (eps_list.empty()) throw ValidationError("epsilon", "epsilon list is empty");
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double e = eps_list[i];
        if (!(e > 0.0) || e > 1.0) throw ValidationError("epsilon", "epsilon values must lie in (0, 1]");
        if (i > 0 && !(e < eps_list[i - 1])) throw ValidationError("epsilon", "epsilon list must strictly decrease");
    }
}

namespace {

const Rational kOne{1};
const Rational kMinusOne{-1};

// Names of the theorem norms.
constexpr const char* kUBulk = "u_bulk_L2H1";
constexpr const char* kUFrac = "u_frac_scaled_L2HN1";
constexpr const char* kEPar = "e_par_scaled_L2L2";
constexpr const char* kPAll = "p_L2H1";
constexpr const char* kPNormal = "p_frac_normal_flux_L2L2";
constexpr const char* kPBulk = "p_bulk_L2H1";
constexpr const char* kPFracHN = "p_frac_L2HN1";
constexpr const char* kPTan = "p_frac_tangential_scaled_L2L2";
constexpr const char* kPFracL2 = "p_frac_L2L2";
constexpr const char* kUBulkT = "u_bulk_H1H1";
constexpr const char* kUFracT = "u_frac_scaled_H1HN1";
constexpr const char* kEParT = "e_par_scaled_H1L2";
constexpr const char* kPBulkT = "p_bulk_H1L2";
constexpr const char* kPFracT = "p_frac_H1L2";
// Structural rows.
constexpr const char* kContinuity = "continuity_defect_gamma";
constexpr const char* kFracGrad = "p_frac_gradient_L2";
constexpr const char* kTrace = "u_frac_trace_scaled_L2";

bool fracture_pressure_limit_exists(const RegimeDescriptor& r) {
    return r.flow != FlowRegime::Wall || r.storage_present;
}

/// One time level of a full and a limit solution as vertex fields.
struct Frame {
    std::vector<double> p_full, p_lim;
    std::vector<Vec2> u_full, u_lim;
};

Frame difference(const Frame& a, const Frame& b) {
    Frame d = a;
    for (std::size_t i = 0; i < d.p_full.size(); ++i) {
        d.p_full[i] -= b.p_full[i];
        d.p_lim[i] -= b.p_lim[i];
        d.u_full[i] -= b.u_full[i];
        d.u_lim[i] -= b.u_lim[i];
    }
    return d;
}

double pow_eps(double eps, double e) { return std::pow(eps, e); }

/// Squared spatial functionals of a frame.
struct Functionals {
    const FracturedMesh& mesh;
    const MaterialFields* materials = nullptr;
    double eps = 1.0;
    double theta_C = 0.0;
    double iota_C = 1.0;

    double frac_l2_sq_of(const std::function<double(int)>& per_element) const {
        return sum_over_elements(mesh, Subdomain::Fracture, per_element);
    }

    std::vector<Vec2> u_error(const Frame& f) const {
        std::vector<Vec2> d(f.u_full.size());
        const double w = pow_eps(eps, theta_C);
        for (std::size_t v = 0; v < d.size(); ++v) {
            const bool frac = mesh.vertex_subdomain[v] == Subdomain::Fracture;
            d[v] = (frac ? w : 1.0) * f.u_full[v] - f.u_lim[v];
        }
        return d;
    }
    std::vector<double> p_error(const Frame& f) const {
        std::vector<double> d(f.p_full.size());
        for (std::size_t v = 0; v < d.size(); ++v) d[v] = f.p_full[v] - f.p_lim[v];
        return d;
    }

    double sq(const std::string& name, const Frame& f) const {
        auto square = [](double x) { return x * x; };
        if (name == kUBulk || name == kUBulkT) return square(compute_norm(mesh, u_error(f), NormKind::H1_bulk));
        if (name == kUFrac || name == kUFracT) return square(compute_norm(mesh, u_error(f), NormKind::HN1_frac));
        if (name == kEPar || name == kEParT) {
            const double w = pow_eps(eps, iota_C);
            return w * w * frac_l2_sq_of([&](int t) {
                const Mat2 J = p1_jacobian(mesh, f.u_full, t);
                const double eyy = J(1, 1), exy = 0.5 * J(0, 1);
                return mesh.triangle_area(t) * (eyy * eyy + 2.0 * exy * exy);
            });
        }
        if (name == kPAll) {
            const auto d = p_error(f);
            return square(compute_norm(mesh, d, NormKind::H1_bulk)) + square(compute_norm(mesh, d, NormKind::H1_frac));
        }
        if (name == kPBulk) return square(compute_norm(mesh, p_error(f), NormKind::H1_bulk));
        if (name == kPBulkT) return square(compute_norm(mesh, p_error(f), NormKind::L2_bulk));
        if (name == kPFracHN) return square(compute_norm(mesh, p_error(f), NormKind::HN1_frac));
        if (name == kPFracL2 || name == kPFracT) return square(compute_norm(mesh, p_error(f), NormKind::L2_frac));
        if (name == kPTan) {
            return eps * eps * frac_l2_sq_of([&](int t) {
                const double gy = p1_gradient(mesh, f.p_full, t).y();
                return mesh.triangle_area(t) * gy * gy;
            });
        }
        if (name == kPNormal) {
            const auto& K = (*materials)[Subdomain::Fracture].K;
            return frac_l2_sq_of([&](int t) {
                const Mat2 Kt = K(mesh.centroid(t), t);
                const double zeta = -Kt(0, 1) / Kt(0, 0) * p1_gradient(mesh, f.p_lim, t).y();
                const double flux = p1_gradient(mesh, f.p_full, t).x() / eps;
                return mesh.triangle_area(t) * square(flux - zeta);
            });
        }
        throw ValidationError("study", "unknown norm " + name);
    }
};

bool is_time_derivative_name(const std::string& n) {
    return n == kUBulkT || n == kUFracT || n == kEParT || n == kPBulkT || n == kPFracT;
}

double gamma_p1_l2_sq(const FracturedMesh& mesh, const std::vector<double>& per_node) {
    double sum = 0.0;
    for (int j = 0; j + 1 < mesh.gamma_count(); ++j) {
        const double len = mesh.gamma_y[j + 1] - mesh.gamma_y[j];
        const double a = per_node[j], b = per_node[j + 1];
        sum += len / 3.0 * (a * a + a * b + b * b);
    }
    return sum;
}

MaterialFields materials_for_epsilon(const SweepConfig& config, double eps) {
    MaterialFields m = config.materials;
    if (config.fracture_source_power != 0.0) {
        const double scale = std::pow(eps, config.fracture_source_power);
        auto q = m[Subdomain::Fracture].q;
        m[Subdomain::Fracture].q = [q, scale](const Vec2& x, double t) { return scale * q(x, t); };
    }
    return m;
}

template <class Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

bool time_derivative_rows_enabled(const ScalingExponents& e) {
    return Rational{2} * e.nu_q >= e.nu_omega - kOne;
}

std::vector<std::string> regime_norm_names(const RegimeDescriptor& r, bool with_time_derivative) {
    std::vector<std::string> out{kUBulk, kUFrac, kEPar};
    switch (r.flow) {
        case FlowRegime::IdealConduit: out.push_back(kPAll); break;
        case FlowRegime::Conduit:
            out.push_back(kPAll);
            out.push_back(kPNormal);
            break;
        case FlowRegime::Neutral:
            out.push_back(kPBulk);
            out.push_back(kPFracHN);
            break;
        case FlowRegime::Barrier:
            out.push_back(kPBulk);
            out.push_back(kPFracHN);
            out.push_back(kPTan);
            break;
        case FlowRegime::Wall:
            out.push_back(kPBulk);
            if (fracture_pressure_limit_exists(r)) out.push_back(kPFracL2);
            break;
    }
    if (with_time_derivative) {
        for (const char* n : {kUBulkT, kUFracT, kEParT, kPBulkT}) out.push_back(n);
        if (r.storage_present && fracture_pressure_limit_exists(r)) out.push_back(kPFracT);
    }
    return out;
}

SweepRuns run_sweep_solutions(const FracturedMesh& mesh, const SweepConfig& config) {
    validate_eps_list(config.eps_list);
    SweepRuns runs;
    runs.eps_list = config.eps_list;
    runs.materials = config.materials;
    runs.regime = validate_exponents(config.exponents, mesh.geometry);
    runs.limit_problem = build_limit_problem(mesh, config.materials, config.exponents);
    const int n = static_cast<int>(config.eps_list.size());
    runs.full.resize(n);
    parallel_for(n + 1, config.jobs, [&](int i) {
        if (i == n) {
            const BiotOperators ops = build_limit_operators(runs.limit_problem, config.materials, config.tolerance);
            runs.limit = solve_operators(ops, config.T, config.dt, std::nullopt);
            return;
        }
        BiotRunConfig rc;
        rc.exponents = config.exponents;
        rc.epsilon = config.eps_list[i];
        rc.materials = materials_for_epsilon(config, rc.epsilon);
        rc.T = config.T;
        rc.dt = config.dt;
        rc.tolerance = config.tolerance;
        runs.full[i] = solve_transient(mesh, rc);
    });
    return runs;
}

std::vector<ErrorRow> compute_errors(const FracturedMesh& mesh, const SweepRuns& runs,
                                     const ScalingExponents& exponents) {
    const MaterialFields& materials = runs.materials;
    const RegimeDescriptor& regime = runs.regime;
    const bool with_t = time_derivative_rows_enabled(exponents);
    const auto names = regime_norm_names(regime, with_t);
    std::vector<ErrorRow> rows;
    const TransientSolution& lim = runs.limit;
    for (std::size_t i = 0; i < runs.eps_list.size(); ++i) {
        const double eps = runs.eps_list[i];
        const TransientSolution& full = runs.full[i];
        if (full.times.size() != lim.times.size())
            throw ValidationError("study", "full and limit solutions use different time grids");
        std::vector<Frame> frames(full.times.size());
        for (std::size_t k = 0; k < frames.size(); ++k) {
            frames[k].p_full = full.pressure_vertices(k);
            frames[k].u_full = full.displacement_vertices(k);
            frames[k].p_lim = lim.pressure_vertices(k);
            frames[k].u_lim = lim.displacement_vertices(k);
        }
        Functionals fn{mesh, &materials, eps, std::max(0.0, theta(exponents.nu_C)), iota(exponents.nu_C)};
        for (const auto& name : names) {
            std::vector<double> s(frames.size()), d(frames.size(), 0.0);
            for (std::size_t k = 0; k < frames.size(); ++k) {
                s[k] = fn.sq(name, frames[k]);
                if (k > 0 && is_time_derivative_name(name)) d[k] = fn.sq(name, difference(frames[k], frames[k - 1]));
            }
            const double value =
                is_time_derivative_name(name) ? h1_in_time(full.times, s, d) : l2_in_time(full.times, s);
            rows.push_back({eps, name, value});
        }
        if (exponents.nu_K < kOne) rows.push_back({eps, kContinuity, continuity_defect(mesh, full)});
        if (exponents.nu_K < kMinusOne) rows.push_back({eps, kFracGrad, fracture_gradient_norm(mesh, full)});
        if (exponents.nu_C > kOne) {
            const auto tr = check_trace_decay(mesh, {eps}, {full}, exponents);
            rows.push_back({eps, kTrace, tr.front()});
        }
    }
    return rows;
}

bool strictly_decreasing(const std::vector<double>& values, double min_drop) {
    for (std::size_t i = 1; i < values.size(); ++i)
        if (!(values[i] < values[i - 1] * (1.0 - min_drop)) ) return false;
    return true;
}

namespace {

std::string join_values(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_double(v[i]);
    }
    return s;
}

}  // namespace

ErrorReport make_report(const FracturedMesh& mesh, const SweepRuns& runs, const SweepConfig& config) {
    ErrorReport report;
    report.rows = compute_errors(mesh, runs, config.exponents);
    report.regime = to_string(runs.regime.flow) + "/" + to_string(runs.regime.mech);
    report.h = config.h;
    report.dt = config.dt;
    report.config_hash = config.config_hash;
    const auto l2_names = regime_norm_names(runs.regime, false);
    for (const auto& name : l2_names) {
        const auto s = report.series(name);
        report.verdicts.push_back({"decrease " + name, strictly_decreasing(s, 0.05), join_values(s)});
    }
    for (const char* lead : {kUBulk, kPAll, kPBulk}) {
        const auto s = report.series(lead);
        if (s.size() < 2) continue;
        report.verdicts.push_back(
            {std::string("halving ") + lead, s.back() <= 0.5 * s.front(),
             format_double(s.back()) + " <= 0.5 * " + format_double(s.front())});
    }
    for (const char* st : {kContinuity, kFracGrad, kTrace}) {
        const auto s = report.series(st);
        if (s.empty()) continue;
        report.verdicts.push_back({std::string("decrease ") + st, strictly_decreasing(s), join_values(s)});
    }
    return report;
}

ErrorReport run_sweep(const SweepConfig& config) {
    config.geometry.validate();
    const FracturedMesh mesh = build_mesh(config.geometry, config.h);
    const SweepRuns runs = run_sweep_solutions(mesh, config);
    return make_report(mesh, runs, config);
}

bool AprioriReport::flagged() const {
    return std::any_of(quantities.begin(), quantities.end(), [](const AprioriQuantity& q) { return q.flagged; });
}

AprioriReport check_apriori(const FracturedMesh& mesh, const std::vector<double>& eps_list,
                            const std::vector<TransientSolution>& full, const ScalingExponents& e, double bound) {
    validate_eps_list(eps_list);
    if (eps_list.size() != full.size()) throw ValidationError("study", "one solution per epsilon expected");
    const double thC = std::max(0.0, theta(e.nu_C));
    const double ioC = iota(e.nu_C);
    const double thK = std::max(0.0, theta(e.nu_K));
    const double ioK = iota(e.nu_K);
    const double ioW = iota(e.nu_omega);

    AprioriReport report;
    report.bound = bound;
    const char* names[5] = {"scaled_displacement", "scaled_displacement_gradient", "scaled_strain", "scaled_pressure",
                            "scaled_pressure_gradient"};
    for (const char* n : names) report.quantities.push_back({n, {}, 0.0, false});

    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const double eps = eps_list[i];
        const auto& sol = full[i];
        const std::size_t nt = sol.times.size();
        std::vector<std::vector<double>> p(nt);
        std::vector<std::vector<Vec2>> u(nt);
        for (std::size_t k = 0; k < nt; ++k) {
            p[k] = sol.pressure_vertices(k);
            u[k] = sol.displacement_vertices(k);
        }
        auto lambda_sq_u = [&](const std::vector<Vec2>& v, double w) {
            const double b = compute_norm(mesh, v, NormKind::L2_bulk), f = compute_norm(mesh, v, NormKind::L2_frac);
            return b * b + w * w * f * f;
        };
        auto lambda_sq_p = [&](const std::vector<double>& v, double w) {
            const double b = compute_norm(mesh, v, NormKind::L2_bulk), f = compute_norm(mesh, v, NormKind::L2_frac);
            return b * b + w * w * f * f;
        };
        auto grad_sq_u = [&](const std::vector<Vec2>& v, double w, bool strain) {
            double s = 0.0;
            for (int t = 0; t < mesh.triangle_count(); ++t) {
                const bool frac = mesh.triangle_label[t] == Subdomain::Fracture;
                const double ee = frac ? eps : 1.0;
                const Mat2 J = strain ? eval_scaled_strain(mesh, v, t, ee) : eval_scaled_jacobian(mesh, v, t, ee);
                s += mesh.triangle_area(t) * (frac ? w * w : 1.0) * J.squaredNorm();
            }
            return s;
        };
        auto grad_sq_p = [&](const std::vector<double>& v, double w) {
            double s = 0.0;
            for (int t = 0; t < mesh.triangle_count(); ++t) {
                const bool frac = mesh.triangle_label[t] == Subdomain::Fracture;
                const Vec2 g = eval_scaled_gradient(mesh, v, t, frac ? eps : 1.0);
                s += mesh.triangle_area(t) * (frac ? w * w : 1.0) * g.squaredNorm();
            }
            return s;
        };
        // sup-in-time of sqrt(sq) plus the H1-in-time norm of the same quantity.
        auto linf_plus_h1 = [&](auto&& sq_of, auto&& series, double w_inf, double w_h1, bool with_h1) {
            double sup = 0.0;
            std::vector<double> s(nt), d(nt, 0.0);
            for (std::size_t k = 0; k < nt; ++k) {
                sup = std::max(sup, std::sqrt(sq_of(series[k], w_inf)));
                s[k] = sq_of(series[k], w_h1);
                if (k > 0 && with_h1) {
                    auto diff = series[k];
                    for (std::size_t v = 0; v < diff.size(); ++v) diff[v] -= series[k - 1][v];
                    d[k] = sq_of(diff, w_h1);
                }
            }
            return sup + (with_h1 ? h1_in_time(sol.times, s, d) : 0.0);
        };
        const double wa = pow_eps(eps, thC);
        const double wb = pow_eps(eps, std::max(0.5, ioC));
        const double wc = pow_eps(eps, ioC);
        report.quantities[0].values.push_back(linf_plus_h1(lambda_sq_u, u, wa, wa, true));
        report.quantities[1].values.push_back(
            linf_plus_h1([&](const std::vector<Vec2>& v, double w) { return grad_sq_u(v, w, false); }, u, wb, wb, true));
        report.quantities[2].values.push_back(
            linf_plus_h1([&](const std::vector<Vec2>& v, double w) { return grad_sq_u(v, w, true); }, u, wc, wc, true));
        report.quantities[3].values.push_back(
            linf_plus_h1(lambda_sq_p, p, pow_eps(eps, std::min(ioW, thK)), pow_eps(eps, ioW), true));
        report.quantities[4].values.push_back(linf_plus_h1(grad_sq_p, p, pow_eps(eps, ioK), 1.0, false));
    }
    for (auto& q : report.quantities) {
        const double first = q.values.front();
        const double mx = *std::max_element(q.values.begin(), q.values.end());
        if (first > 0.0) q.ratio = mx / first;
        else q.ratio = mx > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        q.flagged = q.ratio > bound;
    }
    return report;
}

std::vector<EquivalenceReport> check_equivalence(const FracturedMesh& mesh, const MaterialFields& materials,
                                                 const ScalingExponents& exponents, double T, double dt) {
    const RegimeDescriptor regime = validate_exponents(exponents, mesh.geometry);
    auto ep = std::make_shared<EffectiveParams>(compute_effective(materials, exponents, regime, mesh));
    std::vector<EquivalenceReport> out;
    const bool mech = regime.mech == MechRegime::Soft;
    const bool flow = regime.flow == FlowRegime::Barrier;
    if (!mech && !flow) throw ValidationError("reduction", "no reduced form exists for this regime");

    const LimitProblem two = build_limit_problem(regime, ep, mesh);
    const TransientSolution two_sol = solve_limit(two, materials, T, dt);
    const auto diff_series = [&](auto&& a, auto&& b) {
        auto d = a;
        for (std::size_t v = 0; v < d.size(); ++v) d[v] -= b[v];
        return d;
    };

    if (mech) {
        LimitOptions o;
        o.prefer_reduced = true;
        o.reduce_flow = false;
        const LimitProblem red = build_limit_problem(regime, ep, mesh, o);
        const TransientSolution red_sol = solve_limit(red, materials, T, dt);
        const auto rec = reconstruct_fracture_displacement(red, red_sol, materials);
        EquivalenceReport r;
        r.theorem = "discrete fracture mechanics";
        std::vector<std::vector<Vec2>> bulk;
        for (std::size_t k = 0; k < two_sol.times.size(); ++k) {
            const auto a = two_sol.displacement_vertices(k);
            bulk.push_back(diff_series(a, red_sol.displacement_vertices(k)));
            r.reconstruction_difference = std::max(
                r.reconstruction_difference, compute_norm(mesh, diff_series(a, rec[k]), NormKind::L2_frac));
        }
        r.bulk_difference =
            compute_time_norm(mesh, two_sol.times, bulk, NormKind::H1_bulk, NormKind::L2_time_composite);
        out.push_back(r);
    }
    if (flow) {
        LimitOptions o;
        o.prefer_reduced = true;
        o.reduce_mechanics = false;
        const LimitProblem red = build_limit_problem(regime, ep, mesh, o);
        const TransientSolution red_sol = solve_limit(red, materials, T, dt);
        const auto rec = reconstruct_fracture_pressure(red, red_sol);
        EquivalenceReport r;
        r.theorem = "reduced barrier";
        std::vector<std::vector<double>> bulk;
        for (std::size_t k = 0; k < two_sol.times.size(); ++k) {
            const auto a = two_sol.pressure_vertices(k);
            bulk.push_back(diff_series(a, red_sol.pressure_vertices(k)));
            // Without fracture storage the fracture pressure carries no
            // initial condition; level 0 only holds the interpolated data.
            if (k == 0) continue;
            r.reconstruction_difference = std::max(
                r.reconstruction_difference, compute_norm(mesh, diff_series(a, rec[k]), NormKind::L2_frac));
        }
        r.bulk_difference =
            compute_time_norm(mesh, two_sol.times, bulk, NormKind::H1_bulk, NormKind::L2_time_composite);
        out.push_back(r);
    }
    return out;
}

std::vector<double> check_trace_decay(const FracturedMesh& mesh, const std::vector<double>& eps_list,
                                      const std::vector<TransientSolution>& full, const ScalingExponents& e) {
    if (eps_list.size() != full.size()) throw ValidationError("study", "one solution per epsilon expected");
    std::vector<double> out;
    for (std::size_t i = 0; i < eps_list.size(); ++i) {
        const auto& sol = full[i];
        const auto u = sol.displacement_vertices(sol.times.size() - 1);
        const double w = std::pow(eps_list[i], std::max(0.0, theta(e.nu_C)));
        double sq = 0.0;
        for (int c = 0; c < 2; ++c) {
            for (bool back : {false, true}) {
                std::vector<double> node(mesh.gamma_count());
                for (int j = 0; j < mesh.gamma_count(); ++j) {
                    const int v = back ? mesh.columns[j].back() : mesh.columns[j].front();
                    node[j] = w * u[v][c];
                }
                sq += gamma_p1_l2_sq(mesh, node);
            }
        }
        out.push_back(std::sqrt(sq));
    }
    return out;
}

double continuity_defect(const FracturedMesh& mesh, const TransientSolution& sol) {
    const auto p = sol.pressure_vertices(sol.times.size() - 1);
    const auto avg = average_normal(mesh, p);
    std::vector<double> d(mesh.gamma_count());
    for (int j = 0; j < mesh.gamma_count(); ++j) d[j] = p[mesh.gamma_plus[j]] - avg[j];
    return std::sqrt(gamma_p1_l2_sq(mesh, d));
}

double fracture_gradient_norm(const FracturedMesh& mesh, const TransientSolution& sol) {
    const auto p = sol.pressure_vertices(sol.times.size() - 1);
    return std::sqrt(sum_over_elements(mesh, Subdomain::Fracture, [&](int t) {
        return mesh.triangle_area(t) * p1_gradient(mesh, p, t).squaredNorm();
    }));
}

}  // namespace fracbiot
