#include "avf/analysis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace avf {

CircularOrbitSpec CircularOrbitSpec::axis_aligned(PotentialModel potential, double radius) {
    const int m = potential.dim();
    if (m < 2) throw std::invalid_argument("CircularOrbitSpec: needs dimension >= 2");
    CircularOrbitSpec spec{std::move(potential), radius, Vector(static_cast<std::size_t>(m), 0.0),
                           Vector(static_cast<std::size_t>(m), 0.0)};
    spec.plane_e1[0] = 1.0;
    spec.plane_e2[1] = 1.0;
    return spec;
}

double CircularOrbitSpec::speed() const {
    if (plane_e1.size() != plane_e2.size() ||
        static_cast<int>(plane_e1.size()) != potential.dim() ||
        std::abs(dot(plane_e1, plane_e1) - 1.0) > 1e-12 ||
        std::abs(dot(plane_e2, plane_e2) - 1.0) > 1e-12 ||
        std::abs(dot(plane_e1, plane_e2)) > 1e-12)
        throw std::invalid_argument("CircularOrbitSpec: plane vectors must be orthonormal");
    const double centripetal = radius * potential.radial_derivative(radius, 1);
    if (!(centripetal > 0.0))
        throw NoCircularOrbit("no circular orbit at R = " + std::to_string(radius) +
                              ": R V'(R) = " + std::to_string(centripetal) + " <= 0");
    return std::sqrt(centripetal);
}

double CircularOrbitSpec::period() const {
    const double two_pi = 6.283185307179586476925287;
    return two_pi * radius / speed();
}

std::pair<PhaseState, double> circular_orbit_state(const CircularOrbitSpec& spec) {
    const double v = spec.speed();
    const std::size_t m = spec.plane_e1.size();
    Vector x(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = spec.radius * spec.plane_e1[i];
        p[i] = v * spec.plane_e2[i];
    }
    return {PhaseState(std::move(x), std::move(p)), spec.period()};
}

PhaseState exact_circular_solution(const CircularOrbitSpec& spec, double t) {
    const double v = spec.speed();
    const double omega = v / spec.radius;
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    const std::size_t m = spec.plane_e1.size();
    Vector x(m), p(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = spec.radius * (c * spec.plane_e1[i] + s * spec.plane_e2[i]);
        p[i] = v * (-s * spec.plane_e1[i] + c * spec.plane_e2[i]);
    }
    return PhaseState(std::move(x), std::move(p));
}

PhaseState TaylorCoefficients::evaluate(const PhaseState& y, double h) const {
    PhaseState out = y;
    double hk = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
        hk *= h;
        for (std::size_t i = 0; i < out.x.size(); ++i) {
            out.x[i] += hk * a[k][i];
            out.p[i] += hk * b[k][i];
        }
    }
    return out;
}

TaylorCoefficients taylor_exact_coeffs(const HamiltonianSystem& sys, const PhaseState& y) {
    const PotentialModel& v = sys.potential;
    const Vector grad = v.gradient(y.x);
    const SquareMatrix hess = v.hessian(y.x);
    const Vector hess_p = hess * y.p;
    const Vector hess_grad = hess * grad;
    const Vector t3_pp = v.third_directional(y.x, y.p, y.p);
    const Vector t3_gp = v.third_directional(y.x, grad, y.p);
    const Vector t4_ppp = v.fourth_directional(y.x, y.p, y.p, y.p);
    const Vector hess_hess_p = hess * hess_p;

    const std::size_t m = y.x.size();
    TaylorCoefficients c;
    for (auto& vec : c.a) vec.assign(m, 0.0);
    for (auto& vec : c.b) vec.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        c.a[0][i] = y.p[i];
        c.b[0][i] = -grad[i];
        c.a[1][i] = -0.5 * grad[i];
        c.b[1][i] = -0.5 * hess_p[i];
        c.a[2][i] = -hess_p[i] / 6.0;
        c.b[2][i] = (hess_grad[i] - t3_pp[i]) / 6.0;
        c.a[3][i] = (hess_grad[i] - t3_pp[i]) / 24.0;
        c.b[3][i] = t3_gp[i] / 8.0 + hess_hess_p[i] / 24.0 - t4_ppp[i] / 24.0;
    }
    return c;
}

PhaseState reference_flow_rk4(const HamiltonianSystem& sys, const PhaseState& y0, double t,
                              int substeps) {
    if (substeps < 1) throw std::invalid_argument("reference_flow_rk4: substeps must be >= 1");
    const double h = t / substeps;
    const std::size_t m = y0.x.size();

    auto axpy = [m](const PhaseState& y, double s, const PhaseState& d) {
        PhaseState out = y;
        for (std::size_t i = 0; i < m; ++i) {
            out.x[i] += s * d.x[i];
            out.p[i] += s * d.p[i];
        }
        return out;
    };

    PhaseState y = y0;
    for (int step = 0; step < substeps; ++step) {
        const PhaseState k1 = vector_field(sys, y);
        const PhaseState k2 = vector_field(sys, axpy(y, 0.5 * h, k1));
        const PhaseState k3 = vector_field(sys, axpy(y, 0.5 * h, k2));
        const PhaseState k4 = vector_field(sys, axpy(y, h, k3));
        for (std::size_t i = 0; i < m; ++i) {
            y.x[i] += h / 6.0 * (k1.x[i] + 2.0 * k2.x[i] + 2.0 * k3.x[i] + k4.x[i]);
            y.p[i] += h / 6.0 * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
        }
    }
    return y;
}

double global_error(const Trajectory& traj, const CircularOrbitSpec& spec, double t_expected,
                    ErrorNorm norm) {
    const double t = traj.final_time();
    if (std::abs(t - t_expected) > 1e-9 * std::max(1.0, std::abs(t_expected)))
        throw TimeMismatch("global_error: trajectory ends at t = " + std::to_string(t) +
                           ", expected " + std::to_string(t_expected));
    const PhaseState exact = exact_circular_solution(spec, t);
    const PhaseState& num = traj.final_state();
    double s = 0.0;
    for (std::size_t i = 0; i < num.x.size(); ++i) {
        const double dx = num.x[i] - exact.x[i];
        s += dx * dx;
        if (norm == ErrorNorm::Phase) {
            const double dp = num.p[i] - exact.p[i];
            s += dp * dp;
        }
    }
    return std::sqrt(s);
}

FitResult fit_order(const std::vector<std::pair<double, double>>& h_and_error) {
    if (h_and_error.size() < 3)
        throw DegenerateFit("fit_order: need at least 3 points, got " +
                            std::to_string(h_and_error.size()));
    double hmin = h_and_error.front().first;
    double hmax = hmin;
    for (const auto& [h, err] : h_and_error) {
        if (!(h > 0.0)) throw DegenerateFit("fit_order: nonpositive step size");
        if (!(err > 0.0)) throw DegenerateFit("fit_order: nonpositive error value");
        hmin = std::min(hmin, h);
        hmax = std::max(hmax, h);
    }
    for (std::size_t i = 0; i < h_and_error.size(); ++i)
        for (std::size_t j = i + 1; j < h_and_error.size(); ++j)
            if (h_and_error[i].first == h_and_error[j].first)
                throw DegenerateFit("fit_order: duplicate step sizes");
    if (hmax < 2.0 * hmin)
        throw DegenerateFit("fit_order: step sizes span less than a factor of 2");

    const double n = static_cast<double>(h_and_error.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [h, err] : h_and_error) {
        const double x = std::log(h);
        const double y = std::log(err);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    FitResult fit;
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [h, err] : h_and_error) {
        const double r = std::log(err) - (fit.intercept + fit.slope * std::log(h));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

double weighted_cost(const StepCounters& c, const CostWeights& w) {
    return w.gradient * static_cast<double>(c.gradient_evals) +
           w.hessian * static_cast<double>(c.hessian_evals) +
           w.matrix_build * static_cast<double>(c.matrix_function_builds) +
           w.modifier_apply * static_cast<double>(c.modifier_applications);
}

double cost_scaled_step(const StepCounters& traj_counters, const StepCounters& baseline_counters,
                        double h, const CostWeights& weights) {
    const double base = weighted_cost(baseline_counters, weights);
    if (base <= 0.0) throw ZeroCost("cost_scaled_step: baseline has zero weighted cost");
    return h * weighted_cost(traj_counters, weights) / base;
}

}  // namespace avf
