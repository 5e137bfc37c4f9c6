#ifndef QRMSIM_HILBERT_HPP
#define QRMSIM_HILBERT_HPP

#include <cmath>
#include <complex>
#include <iostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

// Truncated qubit (x) Fock space, dense operator algebra and state utilities.
//
// Basis ordering is qubit-major and fixed everywhere:
//   index = qubit * (N+1) + n,   qubit 0 = |g>, qubit 1 = |e>,  n = 0..N.
// Sign convention: sigma_z |e> = +|e>, sigma_z |g> = -|g>.

namespace qrmsim {

using complexd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr complexd I_UNIT{0.0, 1.0};

struct HilbertSpace {
    int fock_cutoff = 1;  // highest retained Fock state N, N >= 1

    int mode_dim() const { return fock_cutoff + 1; }
    int total_dim() const { return 2 * (fock_cutoff + 1); }
    int index(int qubit, int n) const { return qubit * (fock_cutoff + 1) + n; }

    friend bool operator==(const HilbertSpace&, const HilbertSpace&) = default;
};

inline HilbertSpace make_space(int fock_cutoff) {
    if (fock_cutoff < 1)
        throw std::invalid_argument("make_space: fock_cutoff must be >= 1, got " +
                                    std::to_string(fock_cutoff));
    return HilbertSpace{fock_cutoff};
}

struct Operator {
    HilbertSpace space;
    Matrix matrix;  // total_dim x total_dim, dense
};

/// Max-norm of M - M^dagger.
inline double hermiticity_error(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
    return hermiticity_error(m) < tol;
}

enum class OpKind {
    destroy,
    create,
    number,
    sigma_z,
    sigma_plus,
    sigma_minus,
    sigma_x,
    sigma_y,
    identity
};

inline OpKind parse_op_kind(const std::string& s) {
    if (s == "destroy") return OpKind::destroy;
    if (s == "create") return OpKind::create;
    if (s == "number") return OpKind::number;
    if (s == "sigma_z") return OpKind::sigma_z;
    if (s == "sigma_plus") return OpKind::sigma_plus;
    if (s == "sigma_minus") return OpKind::sigma_minus;
    if (s == "sigma_x") return OpKind::sigma_x;
    if (s == "sigma_y") return OpKind::sigma_y;
    if (s == "identity") return OpKind::identity;
    throw std::invalid_argument("unknown operator kind: " + s);
}

namespace detail {

inline Matrix mode_destroy(int mode_dim) {
    Matrix a = Matrix::Zero(mode_dim, mode_dim);
    for (int n = 1; n < mode_dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

// 2x2 qubit matrices in the (g, e) ordering.
inline Matrix qubit_matrix(OpKind kind) {
    Matrix m = Matrix::Zero(2, 2);
    switch (kind) {
        case OpKind::sigma_z:
            m(0, 0) = -1.0;
            m(1, 1) = 1.0;
            break;
        case OpKind::sigma_plus:
            m(1, 0) = 1.0;  // |e><g|
            break;
        case OpKind::sigma_minus:
            m(0, 1) = 1.0;  // |g><e|
            break;
        case OpKind::sigma_x:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case OpKind::sigma_y:
            m(0, 1) = complexd(0.0, 1.0);
            m(1, 0) = complexd(0.0, -1.0);
            break;
        default:
            throw std::invalid_argument("qubit_matrix: not a qubit operator kind");
    }
    return m;
}

}  // namespace detail

/// Operator embedded in the full qubit (x) Fock space, identity on the other factor.
inline Operator operator_factory(const HilbertSpace& space, OpKind kind) {
    const int md = space.mode_dim();
    const Matrix iq = Matrix::Identity(2, 2);
    const Matrix im = Matrix::Identity(md, md);
    Matrix full;
    switch (kind) {
        case OpKind::destroy:
            full = Eigen::kroneckerProduct(iq, detail::mode_destroy(md));
            break;
        case OpKind::create:
            full = Eigen::kroneckerProduct(iq, Matrix(detail::mode_destroy(md).adjoint()));
            break;
        case OpKind::number: {
            Matrix a = detail::mode_destroy(md);
            full = Eigen::kroneckerProduct(iq, Matrix(a.adjoint() * a));
            break;
        }
        case OpKind::identity:
            full = Matrix::Identity(space.total_dim(), space.total_dim());
            break;
        default:
            full = Eigen::kroneckerProduct(detail::qubit_matrix(kind), im);
            break;
    }
    return Operator{space, std::move(full)};
}

inline Operator operator_factory(const HilbertSpace& space, const std::string& kind) {
    return operator_factory(space, parse_op_kind(kind));
}

/// Displacement matrix exp(alpha a^dag - alpha^* a) on a bare mode space of
/// dimension mode_dim, from the closed-form associated-Laguerre matrix elements
///   <m|D(alpha)|n> = sqrt(n!/m!) alpha^(m-n) e^(-|alpha|^2/2) L_n^(m-n)(|alpha|^2),  m >= n.
/// Each element is exact for the untruncated operator, so no internal padding is
/// needed; the truncated block is the exact crop of the infinite matrix.
inline Matrix displacement_mode_matrix(int mode_dim, complexd alpha) {
    const double x = std::norm(alpha);
    const double pref = std::exp(-0.5 * x);
    Matrix d(mode_dim, mode_dim);
    for (int m = 0; m < mode_dim; ++m) {
        for (int n = 0; n <= m; ++n) {
            const int k = m - n;
            // sqrt(n!/m!) via lgamma to avoid overflow
            const double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
            const double lag = std::assoc_laguerre(unsigned(n), unsigned(k), x);
            complexd ak{1.0, 0.0};
            for (int j = 0; j < k; ++j) ak *= alpha;
            d(m, n) = pref * ratio * ak * lag;
            if (m != n) {
                // <n|D|m> = sqrt(n!/m!) (-conj(alpha))^(m-n) e^(-x/2) L_n^(m-n)(x)
                complexd bk{1.0, 0.0};
                for (int j = 0; j < k; ++j) bk *= -std::conj(alpha);
                d(n, m) = pref * ratio * bk * lag;
            }
        }
    }
    return d;
}

/// Unitary displacement D(alpha) embedded in the full space (identity on the qubit).
/// Accurate on the interior subspace; warns when |alpha|^2 approaches the cutoff.
inline Operator displacement(const HilbertSpace& space, complexd alpha) {
    const double x = std::norm(alpha);
    if (x > 0.25 * space.fock_cutoff) {
        std::cerr << "warning: displacement |alpha|^2 = " << x
                  << " is not small against fock_cutoff = " << space.fock_cutoff
                  << "; truncation error may be significant\n";
    }
    Matrix d = displacement_mode_matrix(space.mode_dim(), alpha);
    Matrix full = Eigen::kroneckerProduct(Matrix::Identity(2, 2), d);
    return Operator{space, std::move(full)};
}

struct StateVector {
    HilbertSpace space;
    Vector amplitudes;  // length total_dim

    double norm() const { return amplitudes.norm(); }
};

/// |qubit, n> basis state; qubit 0 = g, 1 = e.
inline StateVector basis_state(const HilbertSpace& space, int qubit, int n) {
    if (qubit < 0 || qubit > 1 || n < 0 || n > space.fock_cutoff)
        throw std::invalid_argument("basis_state: label out of range");
    Vector v = Vector::Zero(space.total_dim());
    v(space.index(qubit, n)) = 1.0;
    return StateVector{space, std::move(v)};
}

inline StateVector normalized_state(const HilbertSpace& space, Vector amplitudes) {
    const double nrm = amplitudes.norm();
    if (nrm <= 0.0 || !std::isfinite(nrm))
        throw std::invalid_argument("normalized_state: zero or non-finite amplitudes");
    amplitudes /= nrm;
    return StateVector{space, std::move(amplitudes)};
}

inline void require_same_space(const HilbertSpace& a, const HilbertSpace& b,
                               const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": space mismatch");
}

/// <psi|O|psi>.
inline complexd expectation(const StateVector& state, const Operator& op) {
    require_same_space(state.space, op.space, "expectation");
    return state.amplitudes.dot(op.matrix * state.amplitudes);
}

/// |<psi|phi>|^2.
inline double fidelity(const StateVector& psi, const StateVector& phi) {
    require_same_space(psi.space, phi.space, "fidelity");
    return std::norm(psi.amplitudes.dot(phi.amplitudes));
}

}  // namespace qrmsim

#endif
