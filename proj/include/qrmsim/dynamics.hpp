#ifndef QRMSIM_DYNAMICS_HPP
#define QRMSIM_DYNAMICS_HPP

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qrmsim/hamiltonian.hpp"
#include "qrmsim/hilbert.hpp"

// Time evolution, frame transformations and observable extraction.
//
// Static Hamiltonians are propagated with the exact eigendecomposition
// propagator. Time-dependent ones default to the midpoint-exponential rule
// (magnus2, second order); rk4 is kept for cross-checks. No renormalization is
// ever applied: norm drift is reported as an integration diagnostic.

namespace qrmsim {

enum class Integrator { static_expm, magnus2, rk4 };

inline Integrator parse_integrator(const std::string& s) {
    if (s == "static_expm") return Integrator::static_expm;
    if (s == "magnus2") return Integrator::magnus2;
    if (s == "rk4") return Integrator::rk4;
    throw std::invalid_argument("unknown integrator: " + s);
}

struct EvolutionConfig {
    double t_final = 0.0;
    double dt = 0.0;             // explicit step; 0 resolves from steps_per_period
    int steps_per_period = 40;   // against the fastest period present
    Integrator method = Integrator::magnus2;
    int snapshot_stride = 1;     // snapshots every k-th step; t=0 and t_final always kept
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    double norm_drift = 0.0;  // max | ||psi|| - 1 | over the whole run
};

/// Diagonal frame generator alpha a^dag a + beta sigma_z.
struct FrameSpec {
    double alpha = 0.0;
    double beta = 0.0;
};

/// Frame whose image maps Schroedinger-picture QRM evolution onto the
/// bichromatic interaction picture: exp(-i H0 t) with
/// H0 = (delta_b+delta_r)/4 sigma_z + (delta_b-delta_r)/2 a^dag a.
inline FrameSpec qrm_interaction_frame(const QRMParams& p) {
    return FrameSpec{p.omega_R, 0.5 * p.omega0_R};
}

/// Applies exp(+i t (alpha a^dag a + beta sigma_z)) diagonally.
inline StateVector to_frame(const StateVector& psi, double t, const FrameSpec& frame) {
    const int md = psi.space.mode_dim();
    Vector v(psi.space.total_dim());
    for (int q = 0; q < 2; ++q) {
        const double sz = (q == 1) ? 1.0 : -1.0;
        for (int n = 0; n < md; ++n) {
            const int i = psi.space.index(q, n);
            v(i) = psi.amplitudes(i) *
                   std::exp(I_UNIT * t * (frame.alpha * n + frame.beta * sz));
        }
    }
    return StateVector{psi.space, std::move(v)};
}

inline StateVector from_frame(const StateVector& psi, double t, const FrameSpec& frame) {
    return to_frame(psi, -t, frame);
}

namespace detail {

inline void check_state_finite(const Vector& v, double t) {
    if (!v.allFinite())
        throw std::runtime_error("evolve: non-finite amplitudes at t = " +
                                 std::to_string(t));
}

inline void check_hermitian_or_throw(const Matrix& m, double t) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if (hermiticity_error(m) > 1e-10 * scale)
        throw std::invalid_argument("evolve: non-Hermitian Hamiltonian at t = " +
                                    std::to_string(t));
}

// exp(-i dt H) psi for Hermitian H, via eigendecomposition.
struct HermitianPropagator {
    Eigen::SelfAdjointEigenSolver<Matrix> es;

    explicit HermitianPropagator(const Matrix& h) : es(h) {
        if (es.info() != Eigen::Success)
            throw std::runtime_error("evolve: eigendecomposition failed");
    }

    Vector apply(const Vector& psi, double dt) const {
        Vector w = es.eigenvectors().adjoint() * psi;
        const auto& ev = es.eigenvalues();
        for (int i = 0; i < w.size(); ++i) w(i) *= std::exp(-I_UNIT * ev(i) * dt);
        return es.eigenvectors() * w;
    }
};

inline double gershgorin_radius(const Matrix& m) {
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

struct StepPlan {
    double dt;
    long nsteps;
};

inline StepPlan resolve_steps(const EvolutionConfig& cfg, double fastest_period,
                              bool warn_undersampling = true) {
    if (cfg.t_final < 0.0) throw std::invalid_argument("evolve: t_final must be >= 0");
    double dt = cfg.dt;
    if (dt <= 0.0) {
        if (cfg.steps_per_period < 1)
            throw std::invalid_argument("evolve: steps_per_period must be >= 1");
        dt = fastest_period / cfg.steps_per_period;
    } else if (warn_undersampling && fastest_period > 0.0 &&
               dt > fastest_period / 20.0) {
        std::cerr << "warning: dt = " << dt << " resolves fewer than 20 steps per "
                  << "fastest period " << fastest_period << "\n";
    }
    if (cfg.t_final == 0.0) return StepPlan{dt, 0};
    long nsteps = static_cast<long>(std::ceil(cfg.t_final / dt - 1e-9));
    if (nsteps < 1) nsteps = 1;
    return StepPlan{cfg.t_final / double(nsteps), nsteps};
}

}  // namespace detail

/// Evolve under a static Hermitian Hamiltonian with the exact per-step
/// eigendecomposition propagator.
inline Trajectory evolve(const Operator& h, const StateVector& psi0,
                         const EvolutionConfig& cfg) {
    require_same_space(h.space, psi0.space, "evolve");
    detail::check_hermitian_or_throw(h.matrix, 0.0);

    // dt only sets the snapshot spacing here; each step is exact, so a coarse
    // dt never undersamples the dynamics and no warning is needed
    const double radius = std::max(detail::gershgorin_radius(h.matrix), 1e-300);
    const auto plan = detail::resolve_steps(cfg, two_pi / radius, false);
    detail::HermitianPropagator prop(h.matrix);

    Trajectory traj;
    Vector psi = psi0.amplitudes;
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    for (long k = 1; k <= plan.nsteps; ++k) {
        psi = prop.apply(psi, plan.dt);
        detail::check_state_finite(psi, k * plan.dt);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
        if (k % cfg.snapshot_stride == 0 || k == plan.nsteps) {
            traj.times.push_back(k * plan.dt);
            traj.states.push_back(StateVector{psi0.space, psi});
        }
    }
    return traj;
}

/// Evolve under a time-dependent Hamiltonian (magnus2 default, rk4 cross-check).
inline Trajectory evolve(const TimeDependentHamiltonian& h, const StateVector& psi0,
                         const EvolutionConfig& cfg) {
    require_same_space(h.space, psi0.space, "evolve");
    const auto plan = detail::resolve_steps(cfg, h.period_hint);
    const double dt = plan.dt;

    Trajectory traj;
    Vector psi = psi0.amplitudes;
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    for (long k = 0; k < plan.nsteps; ++k) {
        const double t = k * dt;
        if (cfg.method == Integrator::rk4) {
            const Matrix h0 = h.evaluate(t).matrix;
            const Matrix hm = h.evaluate(t + 0.5 * dt).matrix;
            const Matrix h1 = h.evaluate(t + dt).matrix;
            detail::check_hermitian_or_throw(hm, t + 0.5 * dt);
            const Vector k1 = -I_UNIT * (h0 * psi);
            const Vector k2 = -I_UNIT * (hm * (psi + 0.5 * dt * k1));
            const Vector k3 = -I_UNIT * (hm * (psi + 0.5 * dt * k2));
            const Vector k4 = -I_UNIT * (h1 * (psi + dt * k3));
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        } else {
            // midpoint-exponential rule: exp(-i dt H(t + dt/2))
            const Matrix hm = h.evaluate(t + 0.5 * dt).matrix;
            detail::check_hermitian_or_throw(hm, t + 0.5 * dt);
            psi = detail::HermitianPropagator(hm).apply(psi, dt);
        }
        detail::check_state_finite(psi, t + dt);
        traj.norm_drift = std::max(traj.norm_drift, std::abs(psi.norm() - 1.0));
        if ((k + 1) % cfg.snapshot_stride == 0 || k + 1 == plan.nsteps) {
            traj.times.push_back((k + 1) * dt);
            traj.states.push_back(StateVector{psi0.space, psi});
        }
    }
    return traj;
}

struct ObservableTable {
    std::vector<double> times;
    std::vector<std::string> names;
    Eigen::MatrixXd values;  // rows = snapshots, cols = observables
};

/// Expectation values per snapshot. Operators must be (numerically) Hermitian;
/// the residual imaginary parts are checked before being dropped.
inline ObservableTable observable_series(const Trajectory& traj,
                                         const std::vector<Operator>& ops,
                                         const std::vector<std::string>& names = {}) {
    ObservableTable table;
    table.times = traj.times;
    for (size_t j = 0; j < ops.size(); ++j)
        table.names.push_back(j < names.size() ? names[j] : "op" + std::to_string(j));
    table.values.resize(long(traj.states.size()), long(ops.size()));
    for (size_t i = 0; i < traj.states.size(); ++i) {
        for (size_t j = 0; j < ops.size(); ++j) {
            const complexd v = expectation(traj.states[i], ops[j]);
            const double scale = std::max(1.0, std::abs(v));
            if (std::abs(v.imag()) > 1e-10 * scale)
                throw std::runtime_error(
                    "observable_series: non-real expectation for Hermitian observable " +
                    table.names[j]);
            table.values(long(i), long(j)) = v.real();
        }
    }
    return table;
}

}  // namespace qrmsim

#endif
