#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qrmsim/hamiltonian.hpp"

using namespace qrmsim;
using Catch::Approx;

namespace {

IonParams dsc_ion() {
    IonParams p;
    p.nu = two_pi * 3e6;
    p.eta = 0.06;
    p.delta_r = 0.0;
    p.delta_b = -two_pi * 11.31e3;
    // g = eta*Omega/2 = -delta_b  =>  Omega = -2 delta_b / eta
    p.omega_r = p.omega_b = -2.0 * p.delta_b / p.eta;
    return p;
}

IonParams adiabatic_ion() {
    IonParams p;
    p.nu = two_pi * 3e6;
    p.eta = 0.06;
    p.omega_r = p.omega_b = two_pi * 68e3;
    p.delta_r = 0.0;
    p.delta_b = -6e-4 * p.nu;
    return p;
}

}  // namespace

TEST_CASE("detuning to effective-parameter map") {
    SECTION("deep-strong-coupling working point: g = -delta_b") {
        const auto q = qrm_params_from_detunings(dsc_ion());
        CHECK(q.omega_R == Approx(two_pi * 5.655e3));
        CHECK(q.omega0_R == Approx(two_pi * 5.655e3));
        CHECK(q.g / q.omega_R == Approx(2.0));
    }

    SECTION("zero detunings give the massless Dirac point") {
        IonParams p = dsc_ion();
        p.delta_b = 0.0;
        const auto q = qrm_params_from_detunings(p);
        CHECK(q.omega0_R == 0.0);
        CHECK(q.omega_R == 0.0);
    }

    SECTION("adiabatic working point") {
        const auto q = qrm_params_from_detunings(adiabatic_ion());
        CHECK(q.omega_R == Approx(two_pi * 0.9e3));
        CHECK(q.omega0_R == Approx(two_pi * 0.9e3));
        CHECK(q.g == Approx(two_pi * 2.04e3));
    }

    SECTION("round trip reproduces the detunings") {
        const IonParams p = adiabatic_ion();
        const auto d = detunings_from_qrm(qrm_params_from_detunings(p));
        CHECK(d.delta_r == Approx(p.delta_r).margin(1e-9));
        CHECK(d.delta_b == Approx(p.delta_b).epsilon(1e-14));
    }

    SECTION("unequal sideband strengths rejected") {
        IonParams p = adiabatic_ion();
        p.omega_b *= 1.01;
        CHECK_THROWS_AS(qrm_params_from_detunings(p), std::invalid_argument);
    }

    SECTION("vibrational RWA flag") {
        // adiabatic-point drive: Omega/nu ~ 0.023, comfortably inside the default margin
        CHECK(adiabatic_ion().vibrational_rwa_trusted());
        // DSC-point drive is stronger (Omega/nu ~ 0.13): fails the default margin
        // but passes a looser one
        CHECK_FALSE(dsc_ion().vibrational_rwa_trusted());
        CHECK(dsc_ion().vibrational_rwa_trusted(0.15));
        IonParams p = adiabatic_ion();
        p.delta_b = -0.2 * p.nu;
        CHECK_FALSE(p.vibrational_rwa_trusted());
    }
}

TEST_CASE("quantum Rabi Hamiltonian") {
    const auto space = make_space(12);

    SECTION("decoupled limit spectrum") {
        const QRMParams p{2.0, 1.0, 0.0};
        const auto h = build_qrm(p, space);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
        CHECK(es.eigenvalues()(0) == Approx(-1.0));  // -omega0/2
        // every eigenvalue is +-omega0/2 + n*omega
        for (int i = 0; i < es.eigenvalues().size(); ++i) {
            const double e = es.eigenvalues()(i);
            const double frac_minus = std::abs(std::remainder(e + 1.0, 1.0));
            const double frac_plus = std::abs(std::remainder(e - 1.0, 1.0));
            CHECK(std::min(frac_minus, frac_plus) < 1e-10);
        }
    }

    SECTION("coupling matrix element <e,1|H|g,0> = ig") {
        const QRMParams p{0.3, 0.7, 0.11};
        const auto h = build_qrm(p, space);
        const complexd elem = h.matrix(space.index(1, 1), space.index(0, 0));
        CHECK(std::abs(elem - I_UNIT * p.g) < 1e-14);
    }

    SECTION("hermitian for random parameters") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> dist(-3.0, 3.0);
        for (int k = 0; k < 20; ++k) {
            const QRMParams p{dist(rng), dist(rng), dist(rng)};
            CHECK(hermiticity_error(build_qrm(p, space).matrix) < 1e-12);
        }
    }
}

TEST_CASE("bichromatic interaction Hamiltonian") {
    const auto space = make_space(8);
    const IonParams ion = dsc_ion();

    SECTION("t = 0 equals the pure coupling term") {
        const auto h = build_bichromatic(ion, space);
        const QRMParams coupling_only{0.0, 0.0, qrm_params_from_detunings(ion).g};
        const auto ref = build_qrm(coupling_only, space);
        CHECK((h.evaluate(0.0).matrix - ref.matrix).cwiseAbs().maxCoeff() < 1e-9);
    }

    SECTION("zero detunings make it time independent") {
        IonParams p = ion;
        p.delta_r = p.delta_b = 0.0;
        const auto h = build_bichromatic(p, space);
        CHECK((h.evaluate(0.37).matrix - h.evaluate(4.2).matrix).cwiseAbs().maxCoeff() <
              1e-9);
    }

    SECTION("hermitian at random times") {
        const auto h = build_bichromatic(ion, space);
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dist(0.0, 1e-3);
        for (int k = 0; k < 25; ++k)
            CHECK(hermiticity_error(h.evaluate(dist(rng)).matrix) < 1e-9);
    }
}

TEST_CASE("full drive Hamiltonian") {
    const auto space = make_space(8);

    SECTION("eta -> 0 leaves carrier-like terms only") {
        IonParams p = dsc_ion();
        p.eta = 1e-9;
        const auto h = build_ion_interaction(p, space);
        const double t = 1.7e-7;
        const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
        const complexd cr = 0.5 * p.omega_r * std::exp(I_UNIT * (p.nu - p.delta_r) * t);
        const complexd cb = 0.5 * p.omega_b * std::exp(I_UNIT * (-p.nu - p.delta_b) * t);
        const Matrix half = (cr + cb) * sp;
        const Matrix ref = half + half.adjoint();
        CHECK((h.evaluate(t).matrix - ref).cwiseAbs().maxCoeff() <
              1e-6 * p.omega_r);
    }

    SECTION("hermitian at 100 random times") {
        const auto h = build_ion_interaction(dsc_ion(), space);
        std::mt19937 rng(19);
        std::uniform_real_distribution<double> dist(0.0, 1e-4);
        for (int k = 0; k < 100; ++k) {
            const Matrix m = h.evaluate(dist(rng)).matrix;
            CHECK(hermiticity_error(m) < 1e-12 * m.cwiseAbs().maxCoeff() + 1e-15);
        }
    }

    SECTION("matches direct displacement assembly at random times") {
        const IonParams p = adiabatic_ion();
        const auto h = build_ion_interaction(p, space);
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> dist(0.0, 1e-5);
        const Matrix sp2q = Matrix(operator_factory(space, OpKind::sigma_plus).matrix);
        for (int k = 0; k < 10; ++k) {
            const double t = dist(rng);
            const Matrix d =
                displacement(space, I_UNIT * p.eta * std::exp(I_UNIT * p.nu * t)).matrix;
            const complexd cr = 0.5 * p.omega_r * std::exp(I_UNIT * (p.nu - p.delta_r) * t);
            const complexd cb = 0.5 * p.omega_b * std::exp(I_UNIT * (-p.nu - p.delta_b) * t);
            const Matrix half = (cr + cb) * (sp2q * d);
            const Matrix ref = half + half.adjoint();
            CHECK((h.evaluate(t).matrix - ref).cwiseAbs().maxCoeff() < 1e-9 * p.omega_r);
        }
    }

    SECTION("first order in eta reproduces the bichromatic model plus fast terms") {
        const IonParams p = adiabatic_ion();
        const auto full = build_ion_interaction(p, space);
        const auto slow = build_bichromatic(p, space);
        const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
        const Matrix a = operator_factory(space, OpKind::destroy).matrix;
        const Matrix ad = a.adjoint();
        for (double t : {0.0, 3.1e-7, 8.9e-7, 2.4e-6}) {
            // carrier at nu and second-sideband at 2 nu, from the O(eta) expansion
            const complexd cr = 0.5 * p.omega_r * std::exp(I_UNIT * (p.nu - p.delta_r) * t);
            const complexd cb = 0.5 * p.omega_b * std::exp(I_UNIT * (-p.nu - p.delta_b) * t);
            Matrix fast = (cr + cb) * sp +
                          cr * (I_UNIT * p.eta) * std::exp(I_UNIT * p.nu * t) * (sp * ad) +
                          cb * (I_UNIT * p.eta) * std::exp(-I_UNIT * p.nu * t) * (sp * a);
            fast += Matrix(fast.adjoint()).eval();
            const Matrix expect = slow.evaluate(t).matrix + fast;
            // residual is O(eta^2 Omega (2n+1)), dominated by the top of the
            // truncated ladder
            CHECK((full.evaluate(t).matrix - expect).cwiseAbs().maxCoeff() <
                  p.eta * p.eta * p.omega_r * (2.0 * space.fock_cutoff + 3.0));
        }
    }

    SECTION("periodic in 2 pi / nu when detunings vanish") {
        IonParams p = dsc_ion();
        p.delta_r = p.delta_b = 0.0;
        const auto h = build_ion_interaction(p, space);
        const double period = two_pi / p.nu;
        CHECK((h.evaluate(1.3e-7).matrix - h.evaluate(1.3e-7 + period).matrix)
                  .cwiseAbs()
                  .maxCoeff() < 1e-6);
    }
}

TEST_CASE("limit models") {
    const auto space = make_space(15);
    const Matrix number = operator_factory(space, OpKind::number).matrix;
    const Matrix sz = operator_factory(space, OpKind::sigma_z).matrix;
    const Matrix id = Matrix::Identity(space.total_dim(), space.total_dim());
    const Matrix proj_e = 0.5 * (id + sz);

    SECTION("jc with g = 0 matches the decoupled QRM spectrum") {
        const QRMParams p{0.8, 1.3, 0.0};
        const auto hjc = build_limit_model(LimitModel::jc, p, space);
        const auto hq = build_qrm(p, space);
        CHECK((hjc.matrix - hq.matrix).cwiseAbs().maxCoeff() < 1e-14);
    }

    SECTION("jc conserves a^dag a + |e><e|") {
        const QRMParams p{1.0, 1.0, 0.25};
        const auto h = build_limit_model(LimitModel::jc, p, space);
        const Matrix n_exc = number + proj_e;
        CHECK((h.matrix * n_exc - n_exc * h.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("ajc conserves a^dag a - |e><e|") {
        const QRMParams p{1.0, -1.0, 0.25};
        const auto h = build_limit_model(LimitModel::ajc, p, space);
        const Matrix n_anti = number - proj_e;
        CHECK((h.matrix * n_anti - n_anti * h.matrix).cwiseAbs().maxCoeff() < 1e-12);
    }

    SECTION("QRM = JC + counter-rotating term, element-wise") {
        const QRMParams p{0.9, 1.1, 0.3};
        const Matrix diff = build_qrm(p, space).matrix -
                            build_limit_model(LimitModel::jc, p, space).matrix;
        const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
        const Matrix sm = operator_factory(space, OpKind::sigma_minus).matrix;
        const Matrix a = operator_factory(space, OpKind::destroy).matrix;
        const Matrix counter = I_UNIT * p.g * (sp * a.adjoint() - sm * a);
        CHECK((diff - counter).cwiseAbs().maxCoeff() < 1e-14);
    }

    SECTION("dispersive shifts match exact diagonalization to 5%") {
        const auto big = make_space(40);
        const QRMParams p{0.5, 1.0, 0.02};
        const auto heff = build_limit_model(LimitModel::dispersive, p, big);
        const auto h = build_qrm(p, big);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
        const Matrix h0 = build_qrm(QRMParams{p.omega0_R, p.omega_R, 0.0}, big).matrix;
        // match each eigenvector to its dominant basis state
        for (int k = 0; k < es.eigenvalues().size(); ++k) {
            int b = 0;
            es.eigenvectors().col(k).cwiseAbs().maxCoeff(&b);
            const int n = b % big.mode_dim();
            if (n > 6) continue;  // stay far from the truncation edge
            const double exact_shift = es.eigenvalues()(k) - h0(b, b).real();
            const double predicted = heff.matrix(b, b).real();
            CHECK(predicted == Approx(exact_shift).epsilon(0.05));
        }
    }

    SECTION("dirac requires omega_R = 0 and has a symmetric spectrum") {
        const QRMParams bad{0.5, 0.2, 0.3};
        CHECK_THROWS_AS(build_limit_model(LimitModel::dirac, bad, space),
                        std::invalid_argument);
        const QRMParams p{0.5, 0.0, 0.3};
        const auto h = build_limit_model(LimitModel::dirac, p, space);
        CHECK(hermiticity_error(h.matrix) < 1e-12);
        Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix);
        const auto& ev = es.eigenvalues();
        // particle-hole symmetric about zero
        for (int i = 0; i < ev.size() / 2; ++i)
            CHECK(ev(i) == Approx(-ev(ev.size() - 1 - i)).margin(1e-9));
        // same spectrum as the omega_R = 0 QRM (unitary quadrature relabeling)
        Eigen::SelfAdjointEigenSolver<Matrix> esq(build_qrm(p, space).matrix);
        for (int i = 0; i < ev.size(); ++i)
            CHECK(ev(i) == Approx(esq.eigenvalues()(i)).margin(1e-9));
    }
}

TEST_CASE("characteristic timescale") {
    CHECK(char_timescale(QRMParams{0, 0, two_pi * 2.04e3}) ==
          Approx(0.49e-3).epsilon(0.01));
    CHECK(char_timescale(QRMParams{0, 0, two_pi * 1e3}) == Approx(1e-3));
    CHECK(char_timescale(QRMParams{0, 0, two_pi * 2e3}) == Approx(0.5e-3));
    CHECK_THROWS_AS(char_timescale(QRMParams{1, 1, 0}), std::invalid_argument);
}
