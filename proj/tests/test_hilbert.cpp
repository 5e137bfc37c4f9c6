#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qrmsim/hilbert.hpp"

using namespace qrmsim;
using Catch::Approx;

namespace {

// Independent oracle: exp(alpha a^dag - alpha^* a) |0> via the plain matrix
// power series at a large cutoff, no Laguerre machinery involved.
Vector displaced_vacuum_series(int dim, complexd alpha) {
    Matrix gen = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        gen(n, n - 1) = alpha * std::sqrt(double(n));        // alpha a^dag
        gen(n - 1, n) = -std::conj(alpha) * std::sqrt(double(n));  // -alpha^* a
    }
    Vector term = Vector::Zero(dim);
    term(0) = 1.0;
    Vector sum = term;
    for (int k = 1; k < 120; ++k) {
        term = (gen * term) / double(k);
        sum += term;
        if (term.norm() < 1e-18) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("make_space dimensions") {
    CHECK(make_space(1).total_dim() == 4);
    CHECK(make_space(20).total_dim() == 42);
    CHECK(make_space(60).total_dim() == 122);
    CHECK_THROWS_AS(make_space(0), std::invalid_argument);
    CHECK_THROWS_AS(make_space(-3), std::invalid_argument);
}

TEST_CASE("ladder operator action") {
    const auto space = make_space(10);
    const auto a = operator_factory(space, OpKind::destroy);

    SECTION("a|g,3> = sqrt(3)|g,2>") {
        const Vector v = a.matrix * basis_state(space, 0, 3).amplitudes;
        CHECK(std::abs(v(space.index(0, 2)) - std::sqrt(3.0)) < 1e-14);
        CHECK((v.norm() - std::sqrt(3.0)) == Approx(0.0).margin(1e-14));
    }

    SECTION("commutator [a, a^dag] = 1 away from the truncation edge") {
        const auto ad = operator_factory(space, OpKind::create);
        const Matrix comm = a.matrix * ad.matrix - ad.matrix * a.matrix;
        for (int n = 0; n < space.fock_cutoff; ++n) {
            const Vector v = comm * basis_state(space, 0, n).amplitudes;
            const Vector e = basis_state(space, 0, n).amplitudes;
            CHECK((v - e).norm() < 1e-13);
        }
    }
}

TEST_CASE("qubit operators") {
    const auto space = make_space(4);
    const auto sp = operator_factory(space, OpKind::sigma_plus);

    SECTION("sigma_plus raises |g,0> and kills |e,0>") {
        const Vector up = sp.matrix * basis_state(space, 0, 0).amplitudes;
        CHECK((up - basis_state(space, 1, 0).amplitudes).norm() < 1e-15);
        CHECK((sp.matrix * basis_state(space, 1, 0).amplitudes).norm() < 1e-15);
    }

    SECTION("sigma_z convention: |e> -> +1, |g> -> -1") {
        const auto sz = operator_factory(space, OpKind::sigma_z);
        CHECK(expectation(basis_state(space, 1, 2), sz).real() == Approx(1.0));
        CHECK(expectation(basis_state(space, 0, 2), sz).real() == Approx(-1.0));
    }
}

TEST_CASE("operator algebra identities") {
    const auto space = make_space(7);
    const Matrix a = operator_factory(space, OpKind::destroy).matrix;
    const Matrix ad = operator_factory(space, OpKind::create).matrix;
    const Matrix sp = operator_factory(space, OpKind::sigma_plus).matrix;
    const Matrix sm = operator_factory(space, OpKind::sigma_minus).matrix;
    const Matrix sx = operator_factory(space, OpKind::sigma_x).matrix;
    const Matrix sy = operator_factory(space, OpKind::sigma_y).matrix;

    CHECK((ad - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sx - (sp + sm)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((sy - (-I_UNIT) * (sp - sm)).cwiseAbs().maxCoeff() == 0.0);
    CHECK(hermiticity_error(operator_factory(space, OpKind::number).matrix) == 0.0);
    CHECK_THROWS_AS(parse_op_kind("sigma_q"), std::invalid_argument);
}

TEST_CASE("operator sparsity patterns") {
    const auto space = make_space(6);
    const Matrix a = operator_factory(space, OpKind::destroy).matrix;
    const int md = space.mode_dim();
    for (int i = 0; i < space.total_dim(); ++i) {
        for (int j = 0; j < space.total_dim(); ++j) {
            const int qi = i / md, ni = i % md;
            const int qj = j / md, nj = j % md;
            const bool allowed = (qi == qj) && (ni == nj - 1);
            if (!allowed) CHECK(a(i, j) == complexd{});
        }
    }
    const Matrix sz = operator_factory(space, OpKind::sigma_z).matrix;
    for (int i = 0; i < space.total_dim(); ++i)
        for (int j = 0; j < space.total_dim(); ++j)
            if (i != j) CHECK(sz(i, j) == complexd{});
}

TEST_CASE("displacement operator") {
    const auto space = make_space(30);

    SECTION("D(0) is the identity") {
        const auto d = displacement(space, 0.0);
        CHECK((d.matrix - Matrix::Identity(space.total_dim(), space.total_dim()))
                  .cwiseAbs()
                  .maxCoeff() < 1e-14);
    }

    SECTION("displaced vacuum matches the power-series oracle") {
        const complexd alpha{0.3, 0.0};
        const auto d = displacement(space, alpha);
        const Vector got = d.matrix * basis_state(space, 0, 0).amplitudes;
        const Vector oracle = displaced_vacuum_series(60, alpha);
        for (int n = 0; n <= space.fock_cutoff; ++n)
            CHECK(std::abs(got(space.index(0, n)) - oracle(n)) < 1e-12);

        double nbar = 0.0;
        for (int n = 0; n <= space.fock_cutoff; ++n)
            nbar += n * std::norm(got(space.index(0, n)));
        CHECK(nbar == Approx(0.09).margin(1e-6));  // Poisson mean |alpha|^2
    }

    SECTION("complex alpha matches the oracle too") {
        const complexd alpha{0.4, -0.7};
        const auto d = displacement(space, alpha);
        const Vector got = d.matrix * basis_state(space, 0, 0).amplitudes;
        const Vector oracle = displaced_vacuum_series(80, alpha);
        for (int n = 0; n <= space.fock_cutoff; ++n)
            CHECK(std::abs(got(space.index(0, n)) - oracle(n)) < 1e-11);
    }

    SECTION("D(alpha) D(-alpha) = 1 on the interior subspace") {
        const complexd alpha{1.1, 0.4};
        const Matrix prod = displacement(space, alpha).matrix *
                            displacement(space, -alpha).matrix;
        // interior = columns whose displaced image keeps negligible weight
        // above the cutoff; the spread grows like |alpha| sqrt(2n+1)
        const double amag = std::abs(alpha);
        int interior = 0;
        while (interior + 1 + std::norm(alpha) +
                   5.0 * amag * std::sqrt(2.0 * (interior + 1) + 1.0) <=
               space.fock_cutoff)
            ++interior;
        REQUIRE(interior >= 4);
        for (int q = 0; q < 2; ++q) {
            for (int n = 0; n <= interior; ++n) {
                Vector col = prod.col(space.index(q, n));
                col(space.index(q, n)) -= 1.0;
                CHECK(col.norm() < 1e-8);
            }
        }
    }

    SECTION("truncation error grows monotonically with |alpha|^2/N") {
        auto interior_error = [&](double amag) {
            const Matrix prod = displacement(space, amag).matrix *
                                displacement(space, -amag).matrix;
            const int interior = int(space.fock_cutoff - amag * amag - 5);
            double worst = 0.0;
            for (int n = 0; n <= interior; ++n) {
                Vector col = prod.col(space.index(0, n));
                col(space.index(0, n)) -= 1.0;
                worst = std::max(worst, col.norm());
            }
            return worst;
        };
        const double e1 = interior_error(0.5);
        const double e2 = interior_error(1.2);
        const double e3 = interior_error(2.0);
        CHECK(e1 <= e2);
        CHECK(e2 <= e3);
    }
}

TEST_CASE("expectation and fidelity") {
    const auto space = make_space(5);
    const auto vac = basis_state(space, 0, 0);
    const auto e2 = basis_state(space, 1, 2);

    CHECK(expectation(vac, operator_factory(space, OpKind::number)).real() ==
          Approx(0.0).margin(1e-15));
    CHECK(expectation(e2, operator_factory(space, OpKind::sigma_z)).real() ==
          Approx(1.0));

    SECTION("identity expectation is the norm") {
        std::mt19937 rng(7);
        std::normal_distribution<double> dist;
        Vector v(space.total_dim());
        for (int i = 0; i < v.size(); ++i) v(i) = complexd(dist(rng), dist(rng));
        const auto psi = normalized_state(space, v);
        CHECK(psi.norm() == Approx(1.0).margin(1e-9));
        CHECK(expectation(psi, operator_factory(space, OpKind::identity)).real() ==
              Approx(1.0).margin(1e-12));
    }

    SECTION("fidelity examples") {
        CHECK(fidelity(vac, vac) == Approx(1.0));
        CHECK(fidelity(vac, basis_state(space, 1, 0)) == Approx(0.0).margin(1e-15));
        Vector v = Vector::Zero(space.total_dim());
        v(space.index(0, 0)) = 1.0 / std::sqrt(2.0);
        v(space.index(1, 1)) = 1.0 / std::sqrt(2.0);
        CHECK(fidelity(StateVector{space, v}, vac) == Approx(0.5));
    }

    SECTION("space mismatch rejected") {
        const auto other = make_space(6);
        CHECK_THROWS_AS(fidelity(vac, basis_state(other, 0, 0)), std::invalid_argument);
        CHECK_THROWS_AS(expectation(vac, operator_factory(other, OpKind::number)),
                        std::invalid_argument);
    }
}
