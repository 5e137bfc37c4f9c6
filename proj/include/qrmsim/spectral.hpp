#ifndef QRMSIM_SPECTRAL_HPP
#define QRMSIM_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrmsim/dynamics.hpp"
#include "qrmsim/hamiltonian.hpp"
#include "qrmsim/hilbert.hpp"

// Exact diagonalization, parity analysis and the adiabatic ground-state
// preparation protocol.

namespace qrmsim {

/// Parity operator fixed to the convention in which the chain
/// {|g,0>, |e,1>, |g,2>, ...} has eigenvalue +1. With sigma_z|e> = +|e> the
/// literal product sigma_z (-1)^(a^dag a) would assign -1 to |g,0>, so the
/// qubit sign is flipped inside P:  P = -sigma_z (-1)^(a^dag a).
inline Operator parity_operator(const HilbertSpace& space) {
    Matrix p = Matrix::Zero(space.total_dim(), space.total_dim());
    for (int q = 0; q < 2; ++q) {
        const double qs = (q == 0) ? 1.0 : -1.0;
        for (int n = 0; n < space.mode_dim(); ++n) {
            const int i = space.index(q, n);
            p(i, i) = qs * ((n % 2 == 0) ? 1.0 : -1.0);
        }
    }
    return Operator{space, std::move(p)};
}

/// Lowest eigenpair of a dense Hermitian operator. The eigenvector phase is
/// fixed by making the largest-magnitude amplitude real positive. Degenerate
/// ground levels are resolved deterministically: the returned vector is the
/// normalized projection of the lowest basis index with nonzero weight in the
/// degenerate subspace.
inline std::pair<double, StateVector> ground_state(const Operator& h) {
    const double scale = std::max(1.0, h.matrix.cwiseAbs().maxCoeff());
    if (hermiticity_error(h.matrix) > 1e-10 * scale)
        throw std::invalid_argument("ground_state: non-Hermitian input");

    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("ground_state: eigendecomposition failed");
    const auto& ev = es.eigenvalues();
    const double e0 = ev(0);

    // collect the (near-)degenerate ground subspace
    const double tol = 1e-12 * std::max(scale, std::abs(e0));
    int mult = 1;
    while (mult < ev.size() && ev(mult) - e0 <= tol) ++mult;

    Vector v;
    if (mult == 1) {
        v = es.eigenvectors().col(0);
    } else {
        const auto sub = es.eigenvectors().leftCols(mult);
        for (int j = 0; j < h.matrix.rows(); ++j) {
            Vector proj = sub * (sub.adjoint().col(j));
            if (proj.norm() > 1e-8) {
                v = proj / proj.norm();
                break;
            }
        }
    }

    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    v *= std::polar(1.0, -std::arg(v(imax)));
    return {e0, StateVector{h.space, std::move(v)}};
}

struct ChainEntry {
    int qubit = 0;       // 0 = g, 1 = e
    int n = 0;           // Fock index
    double parity = 0;   // +1 or -1 chain membership
    double population = 0;
};

struct ParityReport {
    double parity_expectation = 0.0;
    std::vector<ChainEntry> even_chain;  // parity +1: {|g,0>, |e,1>, |g,2>, ...}
    std::vector<ChainEntry> odd_chain;   // parity -1 complement
};

inline ParityReport parity_analysis(const StateVector& state) {
    if (std::abs(state.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("parity_analysis: state is not normalized");
    const Operator p = parity_operator(state.space);
    ParityReport report;
    report.parity_expectation = expectation(state, p).real();
    for (int q = 0; q < 2; ++q) {
        for (int n = 0; n < state.space.mode_dim(); ++n) {
            const int i = state.space.index(q, n);
            ChainEntry e{q, n, p.matrix(i, i).real(),
                         std::norm(state.amplitudes(i))};
            (e.parity > 0 ? report.even_chain : report.odd_chain).push_back(e);
        }
    }
    return report;
}

inline double chain_population(const std::vector<ChainEntry>& chain) {
    double s = 0.0;
    for (const auto& e : chain) s += e.population;
    return s;
}

enum class RampKind { coupling, detuning };

/// Linear ramp taking the system from the JC-limit ground state |g,0> into a
/// target coupling regime.
///
/// coupling (default): g(t) = g_final * t / duration at fixed (omega0_R, omega_R),
///   i.e. the drive intensity is ramped at fixed detunings.
/// detuning: delta_b(t) interpolates linearly from delta_b_start to delta_b_final
///   at fixed g = g_final, so omega_R shrinks while the coupling stays constant.
struct SweepSchedule {
    double duration = 0.0;   // Delta t (s); 0 means sudden quench
    double g_final = 0.0;    // target coupling (rad/s)
    RampKind ramp = RampKind::coupling;
    double omega0_R = 0.0;   // fixed effective parameters (coupling ramp)
    double omega_R = 0.0;
    double delta_b_start = 0.0;  // detuning ramp only; delta_r stays 0
    double delta_b_final = 0.0;

    QRMParams params_at(double t) const {
        const double s = (duration > 0.0) ? std::clamp(t / duration, 0.0, 1.0) : 1.0;
        if (ramp == RampKind::coupling)
            return QRMParams{omega0_R, omega_R, g_final * s};
        const double db = delta_b_start + s * (delta_b_final - delta_b_start);
        return QRMParams{-0.5 * db, -0.5 * db, g_final};
    }
};

struct FidelityPoint {
    double t = 0.0;
    double fidelity = 0.0;
};

struct FidelityCurve {
    std::vector<FidelityPoint> points;
};

struct SweepResult {
    double final_fidelity = 0.0;
    FidelityCurve curve;
    Trajectory trajectory;
};

/// Integrates the time-dependent quantum Rabi model along the schedule starting
/// from |g,0>, tracking the fidelity against the instantaneous ground state.
inline SweepResult adiabatic_sweep(const SweepSchedule& schedule,
                                   const HilbertSpace& space,
                                   EvolutionConfig config) {
    const StateVector psi0 = basis_state(space, 0, 0);

    if (schedule.duration <= 0.0) {
        // sudden quench: the state does not move, only the Hamiltonian does
        const auto [e, gs] = ground_state(build_qrm(schedule.params_at(1.0), space));
        SweepResult r;
        r.final_fidelity = fidelity(gs, psi0);
        r.curve.points.push_back({0.0, r.final_fidelity});
        r.trajectory.times.push_back(0.0);
        r.trajectory.states.push_back(psi0);
        return r;
    }

    TimeDependentHamiltonian h;
    h.space = space;
    h.evaluate = [schedule, space](double t) {
        return build_qrm(schedule.params_at(t), space);
    };
    const QRMParams pf = schedule.params_at(schedule.duration);
    h.period_hint = two_pi / std::max({std::abs(pf.omega0_R), std::abs(pf.omega_R),
                                       std::abs(pf.g), 1e-300});
    config.t_final = schedule.duration;

    SweepResult r;
    r.trajectory = evolve(h, psi0, config);
    for (size_t i = 0; i < r.trajectory.states.size(); ++i) {
        const double t = r.trajectory.times[i];
        const auto [e, gs] = ground_state(build_qrm(schedule.params_at(t), space));
        r.curve.points.push_back({t, fidelity(gs, r.trajectory.states[i])});
    }
    r.final_fidelity = r.curve.points.back().fidelity;
    return r;
}

}  // namespace qrmsim

#endif
