#include <cmath>
#include <vector>

#include "doctest.h"
#include "heomcorr/operators.hpp"
#include "support.hpp"

using namespace heomcorr;
using testsupport::max_diff;

namespace {

ComplexMatrix rho_infinity() {
    // (1/3)(|00><00| + |11><11| + |+><+|)
    ComplexMatrix r(4, 4);
    r(0, 0) = 1.0 / 3;
    r(3, 3) = 1.0 / 3;
    r(1, 1) = r(2, 2) = r(1, 2) = r(2, 1) = 1.0 / 6;
    return r;
}

}  // namespace

TEST_CASE("kron of Pauli matrices") {
    const std::vector<double> zdiag{1, 1, -1, -1};
    CHECK(max_diff(kron(pauli::z(), pauli::identity2()), ComplexMatrix::diagonal(zdiag)) == 0.0);
    CHECK(max_diff(kron(pauli::identity2(), pauli::identity2()), ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix xx = kron(pauli::x(), pauli::x());
    ComplexMatrix anti(4, 4);
    for (std::size_t i = 0; i < 4; ++i) anti(i, 3 - i) = 1.0;
    CHECK(max_diff(xx, anti) == 0.0);
}

TEST_CASE("kron shape follows factors") {
    ComplexMatrix a(2, 3), b(3, 1);
    const ComplexMatrix k = kron(a, b);
    CHECK(k.rows() == 6);
    CHECK(k.cols() == 3);
}

TEST_CASE("partial trace") {
    // |Phi> = (|10> + |01>)/sqrt2, indices 1 and 2
    ComplexMatrix bell(4, 4);
    bell(1, 1) = bell(2, 2) = bell(1, 2) = bell(2, 1) = 0.5;
    CHECK(max_diff(partial_trace(bell, Subsystem::A), 0.5 * ComplexMatrix::identity(2)) < 1e-15);

    ComplexMatrix p10(4, 4);
    p10(1, 1) = 1.0;
    ComplexMatrix one(2, 2);
    one(0, 0) = 1.0;
    CHECK(max_diff(partial_trace(p10, Subsystem::A), one) == 0.0);
    ComplexMatrix zero(2, 2);
    zero(1, 1) = 1.0;
    CHECK(max_diff(partial_trace(p10, Subsystem::B), zero) == 0.0);

    CHECK(max_diff(partial_trace(rho_infinity(), Subsystem::B), 0.5 * ComplexMatrix::identity(2)) < 1e-15);

    CHECK_THROWS_AS(partial_trace(ComplexMatrix(3, 3), Subsystem::A), DimensionError);
}

TEST_CASE("partial trace of a product state returns the factors") {
    testsupport::Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = testsupport::random_density(rng, 2);
        const ComplexMatrix b = testsupport::random_density(rng, 2);
        const ComplexMatrix ab = kron(a, b);
        CHECK(max_diff(partial_trace(ab, Subsystem::A), a) < 1e-14);
        CHECK(max_diff(partial_trace(ab, Subsystem::B), b) < 1e-14);
    }
}

TEST_CASE("hermitian_eig worked examples") {
    const auto ez = hermitian_eig(pauli::z());
    CHECK(ez.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ez.eigenvalues[1] == doctest::Approx(1.0));
    const auto ex = hermitian_eig(pauli::x());
    CHECK(ex.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(ex.eigenvalues[1] == doctest::Approx(1.0));

    const auto einf = hermitian_eig(rho_infinity());
    CHECK(std::abs(einf.eigenvalues[0]) < 1e-14);
    for (int i = 1; i < 4; ++i) CHECK(einf.eigenvalues[i] == doctest::Approx(1.0 / 3).epsilon(1e-13));
}

TEST_CASE("hermitian_eig reconstruction and orthonormality") {
    testsupport::Rng rng(7);
    for (std::size_t dim : {2u, 3u, 4u, 6u, 8u}) {
        for (int trial = 0; trial < 25; ++trial) {
            ComplexMatrix g(dim, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
            const ComplexMatrix h = g + g.adjoint();
            const auto eig = hermitian_eig(h);
            const ComplexMatrix& u = eig.eigenvectors;
            const ComplexMatrix rebuilt = u * ComplexMatrix::diagonal(eig.eigenvalues) * u.adjoint();
            CHECK(frobenius_norm(rebuilt - h) < 1e-12 * std::max(1.0, frobenius_norm(h)));
            CHECK(frobenius_norm(u.adjoint() * u - ComplexMatrix::identity(dim)) < 1e-12);
            for (std::size_t i = 1; i < dim; ++i) CHECK(eig.eigenvalues[i - 1] <= eig.eigenvalues[i]);
        }
    }
}

TEST_CASE("hermitian_eig handles degenerate and diagonal input") {
    const auto e = hermitian_eig(ComplexMatrix::identity(4));
    for (double v : e.eigenvalues) CHECK(v == doctest::Approx(1.0));
    const std::vector<double> d{3, -1, 2};
    const auto ed = hermitian_eig(ComplexMatrix::diagonal(d));
    CHECK(ed.eigenvalues == std::vector<double>{-1, 2, 3});
}

TEST_CASE("hermitian_eig rejects bad input") {
    ComplexMatrix nh(2, 2);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(nh), NumericalError);
    CHECK_THROWS_AS(hermitian_eig(ComplexMatrix(2, 3)), DimensionError);
}

TEST_CASE("psd_sqrt") {
    CHECK(max_diff(psd_sqrt(ComplexMatrix::identity(4)), ComplexMatrix::identity(4)) < 1e-14);
    const std::vector<double> d{4, 1, 0, 0}, s{2, 1, 0, 0};
    CHECK(max_diff(psd_sqrt(ComplexMatrix::diagonal(d)), ComplexMatrix::diagonal(s)) < 1e-14);

    // Werner r = 0.5 on the (|10>+|01>)/sqrt2 Bell state
    ComplexMatrix w = 0.125 * ComplexMatrix::identity(4);
    w(1, 1) += 0.25;
    w(2, 2) += 0.25;
    w(1, 2) += 0.25;
    w(2, 1) += 0.25;
    const ComplexMatrix root = psd_sqrt(w);
    CHECK(max_diff(root * root, w) < 1e-13);
    CHECK(hermiticity_defect(root) < 1e-14);

    const std::vector<double> neg{1, -1e-3};
    CHECK_THROWS_AS(psd_sqrt(ComplexMatrix::diagonal(neg)), NumericalError);
    const std::vector<double> tiny{1, -1e-12};
    CHECK(psd_sqrt(ComplexMatrix::diagonal(tiny))(1, 1) == Complex{0.0, 0.0});
}

TEST_CASE("matrix arithmetic checks shapes") {
    ComplexMatrix a(2, 2), b(3, 3);
    CHECK_THROWS_AS(a + b, DimensionError);
    CHECK_THROWS_AS(a * b, DimensionError);
    CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
}

TEST_CASE("Pauli algebra") {
    const Complex i{0, 1};
    CHECK(max_diff(pauli::x() * pauli::y(), i * pauli::z()) < 1e-15);
    CHECK(max_diff(pauli::plus() + pauli::minus(), pauli::x()) < 1e-15);
    // sigma_+ raises |0> to |1> in the (|1>, |0>) basis
    CHECK(pauli::plus()(0, 1) == Complex{1.0, 0.0});
}
