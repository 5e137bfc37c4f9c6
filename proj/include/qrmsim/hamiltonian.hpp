#ifndef QRMSIM_HAMILTONIAN_HPP
#define QRMSIM_HAMILTONIAN_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

#include "qrmsim/hilbert.hpp"

// Hamiltonian builders for the trapped-ion simulation of the quantum Rabi
// model, plus the detuning <-> effective-parameter maps.
//
// All frequencies are angular (rad/s). File-level configs accept Hz and apply
// the 2*pi factor at the parsing boundary, never here.

namespace qrmsim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Laboratory drive parameters of the bichromatic sideband scheme.
struct IonParams {
    double nu = 0.0;       // trap frequency (rad/s), > 0
    double eta = 0.0;      // Lamb-Dicke parameter, > 0
    double omega_r = 0.0;  // red-sideband Rabi strength (rad/s)
    double omega_b = 0.0;  // blue-sideband Rabi strength (rad/s)
    double delta_r = 0.0;  // red-sideband detuning (rad/s)
    double delta_b = 0.0;  // blue-sideband detuning (rad/s)
    double phi_r = 0.0;    // red drive phase (rad); defaults reproduce the
    double phi_b = 0.0;    // ig(sigma+ - sigma-)(a + a^dag) coupling exactly
    double omega0_lab = 0.0;  // optional lab-frame qubit frequency (demo only)

    void validate() const {
        if (nu <= 0.0) throw std::invalid_argument("IonParams: nu must be > 0");
        if (eta <= 0.0) throw std::invalid_argument("IonParams: eta must be > 0");
    }

    /// True when detunings and Rabi strengths are all small against the trap
    /// frequency, so the vibrational RWA linking the full drive to the
    /// bichromatic model can be trusted.
    bool vibrational_rwa_trusted(double ratio = 0.05) const {
        const double worst = std::max({std::abs(delta_r), std::abs(delta_b),
                                       std::abs(omega_r), std::abs(omega_b)});
        return worst < ratio * nu;
    }
};

/// Effective quantum Rabi model parameters. Negative and zero frequencies are
/// deliberately allowed: the simulation covers the unphysical corners too.
struct QRMParams {
    double omega0_R = 0.0;  // qubit frequency (rad/s)
    double omega_R = 0.0;   // mode frequency (rad/s)
    double g = 0.0;         // coupling (rad/s)
};

struct Detunings {
    double delta_r = 0.0;
    double delta_b = 0.0;
};

/// Detuning -> effective-parameter map:
///   omega0_R = -(delta_r + delta_b)/2,  omega_R = (delta_r - delta_b)/2,
///   g = eta * Omega / 2,  with Omega = Omega_r = Omega_b enforced.
inline QRMParams qrm_params_from_detunings(const IonParams& ion) {
    ion.validate();
    const double scale = std::max(std::abs(ion.omega_r), std::abs(ion.omega_b));
    if (std::abs(ion.omega_r - ion.omega_b) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument(
            "qrm_params_from_detunings: requires equal sideband strengths "
            "Omega_r = Omega_b");
    QRMParams p;
    p.omega0_R = -0.5 * (ion.delta_r + ion.delta_b);
    p.omega_R = 0.5 * (ion.delta_r - ion.delta_b);
    p.g = 0.5 * ion.eta * ion.omega_r;
    return p;
}

/// Inverse map: delta_r = omega_R - omega0_R, delta_b = -omega_R - omega0_R.
inline Detunings detunings_from_qrm(const QRMParams& p) {
    return Detunings{p.omega_R - p.omega0_R, -p.omega_R - p.omega0_R};
}

/// Characteristic simulation timescale 2*pi/g.
inline double char_timescale(const QRMParams& p) {
    if (p.g == 0.0) throw std::invalid_argument("char_timescale: g must be nonzero");
    return two_pi / p.g;
}

/// Time-dependent Hermitian Hamiltonian, reentrant for concurrent evaluation.
struct TimeDependentHamiltonian {
    HilbertSpace space;
    std::function<Operator(double)> evaluate;
    double period_hint = 0.0;  // smallest oscillation period (s), 0 = unknown
};

/// Static quantum Rabi Hamiltonian
///   H = (omega0_R/2) sigma_z + omega_R a^dag a + i g (sigma+ - sigma-)(a + a^dag).
inline Operator build_qrm(const QRMParams& p, const HilbertSpace& space) {
    const Matrix sz = operator_factory(space, OpKind::sigma_z).matrix;
    const Matrix n = operator_factory(space, OpKind::number).matrix;
    const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
    const Matrix sm = operator_factory(space, OpKind::sigma_minus).matrix;
    const Matrix a = operator_factory(space, OpKind::destroy).matrix;
    const Matrix x = a + a.adjoint();
    Matrix h = 0.5 * p.omega0_R * sz + p.omega_R * n + I_UNIT * p.g * (sp - sm) * x;
    return Operator{space, std::move(h)};
}

namespace detail {

inline double fastest_bichromatic_freq(const IonParams& ion) {
    const double g = 0.5 * ion.eta * std::max(ion.omega_r, ion.omega_b);
    return std::max({std::abs(ion.delta_r), std::abs(ion.delta_b), g, 1e-300});
}

}  // namespace detail

/// Bichromatic interaction-picture Hamiltonian after the vibrational RWA:
///   H(t) = (i eta Omega / 2) sigma+ (a e^{-i delta_r t + i phi_r}
///                                    + a^dag e^{-i delta_b t + i phi_b}) + H.c.
inline TimeDependentHamiltonian build_bichromatic(const IonParams& ion,
                                                  const HilbertSpace& space) {
    ion.validate();
    const double scale = std::max(std::abs(ion.omega_r), std::abs(ion.omega_b));
    if (std::abs(ion.omega_r - ion.omega_b) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("build_bichromatic: requires Omega_r = Omega_b");

    const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
    const Matrix a = operator_factory(space, OpKind::destroy).matrix;
    const Matrix spa = sp * a;
    const Matrix spad = sp * a.adjoint();
    const complexd cr = 0.5 * I_UNIT * ion.eta * ion.omega_r *
                        std::exp(I_UNIT * ion.phi_r);
    const complexd cb = 0.5 * I_UNIT * ion.eta * ion.omega_b *
                        std::exp(I_UNIT * ion.phi_b);
    const double dr = ion.delta_r;
    const double db = ion.delta_b;

    TimeDependentHamiltonian h;
    h.space = space;
    h.period_hint = two_pi / detail::fastest_bichromatic_freq(ion);
    h.evaluate = [=](double t) {
        Matrix half = cr * std::exp(-I_UNIT * dr * t) * spa +
                      cb * std::exp(-I_UNIT * db * t) * spad;
        Matrix m = half + half.adjoint();
        return Operator{space, std::move(m)};
    };
    return h;
}

/// Full interaction-picture drive Hamiltonian (all orders in eta):
///   H(t) = sum_{n=r,b} (Omega_n/2) [ D(i eta e^{i nu t}) e^{i(omega0-omega_n)t}
///                                    e^{i phi_n} sigma+ + H.c. ],
/// with omega0 - omega_r = nu - delta_r and omega0 - omega_b = -nu - delta_b.
/// Only detunings enter; the optical frequencies have been rotated away.
inline TimeDependentHamiltonian build_ion_interaction(const IonParams& ion,
                                                      const HilbertSpace& space) {
    ion.validate();
    const Matrix sp2 = detail::qubit_matrix(OpKind::sigma_plus);
    // D(i eta e^{i nu t}) = Phi(t) D(i eta) Phi(t)^dag with Phi = diag(e^{i nu t n});
    // the base displacement is computed once.
    const Matrix d0 = displacement_mode_matrix(space.mode_dim(),
                                               I_UNIT * ion.eta);
    const complexd cr = 0.5 * ion.omega_r * std::exp(I_UNIT * ion.phi_r);
    const complexd cb = 0.5 * ion.omega_b * std::exp(I_UNIT * ion.phi_b);
    const double nu = ion.nu;
    const double dr = ion.delta_r;
    const double db = ion.delta_b;
    const int md = space.mode_dim();

    TimeDependentHamiltonian h;
    h.space = space;
    h.period_hint = two_pi / (2.0 * nu);  // displacement and prefactor beat at 2 nu
    h.evaluate = [=](double t) {
        Matrix d(md, md);
        for (int m = 0; m < md; ++m)
            for (int n = 0; n < md; ++n)
                d(m, n) = d0(m, n) * std::exp(I_UNIT * (nu * t * (m - n)));
        const complexd phase_r = std::exp(I_UNIT * ((nu - dr) * t));
        const complexd phase_b = std::exp(I_UNIT * ((-nu - db) * t));
        Matrix half = Eigen::kroneckerProduct(sp2, Matrix((cr * phase_r + cb * phase_b) * d));
        Matrix m = half + half.adjoint();
        return Operator{space, std::move(m)};
    };
    return h;
}

enum class LimitModel { jc, ajc, dispersive, dirac };

inline LimitModel parse_limit_model(const std::string& s) {
    if (s == "jc") return LimitModel::jc;
    if (s == "ajc") return LimitModel::ajc;
    if (s == "dispersive") return LimitModel::dispersive;
    if (s == "dirac") return LimitModel::dirac;
    throw std::invalid_argument("unknown limit model: " + s);
}

/// Static limit-regime Hamiltonians.
///
/// jc:   H = (omega0_R/2) sigma_z + omega_R a^dag a + i g (sigma+ a - sigma- a^dag)
/// ajc:  H = (omega0_R/2) sigma_z + omega_R a^dag a + i g (sigma+ a^dag - sigma- a)
/// dispersive: second-order effective Hamiltonian in the interaction picture,
///   H = g^2 [ |e><e|/(omega0_R - omega_R) - |g><g|/(omega0_R + omega_R)
///             + 2 omega0_R / ((omega0_R + omega_R)(omega0_R - omega_R)) a^dag a sigma_z ],
///   which matches second-order perturbation theory of the full model.
/// dirac: H = m c^2 sigma_z + c p sigma_x with m c^2 = omega0_R/2 and
///   c p = g (a + a^dag); valid only on the omega_R = 0 line. The coupling
///   quadrature is relabelled (sigma_y -> sigma_x, x-quadrature -> p) by a fixed
///   qubit-basis rotation, which leaves the spectrum untouched.
inline Operator build_limit_model(LimitModel kind, const QRMParams& p,
                                  const HilbertSpace& space) {
    const Matrix sz = operator_factory(space, OpKind::sigma_z).matrix;
    const Matrix n = operator_factory(space, OpKind::number).matrix;
    const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
    const Matrix sm = operator_factory(space, OpKind::sigma_minus).matrix;
    const Matrix a = operator_factory(space, OpKind::destroy).matrix;
    const Matrix ad = a.adjoint();

    Matrix h;
    switch (kind) {
        case LimitModel::jc:
            h = 0.5 * p.omega0_R * sz + p.omega_R * n +
                I_UNIT * p.g * (sp * a - sm * ad);
            break;
        case LimitModel::ajc:
            h = 0.5 * p.omega0_R * sz + p.omega_R * n +
                I_UNIT * p.g * (sp * ad - sm * a);
            break;
        case LimitModel::dispersive: {
            const double dm = p.omega0_R - p.omega_R;
            const double dp = p.omega0_R + p.omega_R;
            if (dm == 0.0 || dp == 0.0)
                throw std::invalid_argument(
                    "build_limit_model(dispersive): omega_R +- omega0_R must be nonzero");
            const Matrix id = Matrix::Identity(space.total_dim(), space.total_dim());
            const Matrix proj_e = 0.5 * (id + sz);
            const Matrix proj_g = 0.5 * (id - sz);
            h = p.g * p.g *
                (proj_e / dm - proj_g / dp + (2.0 * p.omega0_R / (dp * dm)) * n * sz);
            break;
        }
        case LimitModel::dirac: {
            const double scale = std::max({std::abs(p.omega0_R), std::abs(p.g), 1.0});
            if (std::abs(p.omega_R) > 1e-12 * scale)
                throw std::invalid_argument(
                    "build_limit_model(dirac): requires omega_R = 0");
            const Matrix sx = operator_factory(space, OpKind::sigma_x).matrix;
            h = 0.5 * p.omega0_R * sz + p.g * sx * (a + ad);
            break;
        }
    }
    return Operator{space, std::move(h)};
}

}  // namespace qrmsim

#endif
