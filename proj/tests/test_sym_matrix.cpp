#include <doctest.h>

#include <cmath>

#include "prox0/errors.hpp"
#include "prox0/sampling.hpp"
#include "prox0/sym_matrix.hpp"

using namespace prox0;

namespace {

SymMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    SymMatrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) m.at(i, j++) = v;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("jacobi eigendecomposition of a known 2x2") {
    const SymMatrix m = from_rows({{2.0, 1.0}, {1.0, 2.0}});
    const auto d = eig_sym(m);
    CHECK(d.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(d.values[1] == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("eigendecomposition reconstructs random symmetric matrices") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        SymMatrix m(n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                const double v = rng.uniform(-2.0, 2.0);
                m.at(i, j) = v;
                m.at(j, i) = v;
            }
        const auto d = eig_sym(m);
        // Q diag Q^T == m entrywise
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += d.vectors[static_cast<size_t>(i) * n + k] * d.values[k] *
                         d.vectors[static_cast<size_t>(j) * n + k];
                CHECK(s == doctest::Approx(m.at(i, j)).epsilon(0).scale(1).absolute(1e-11));
            }
        // orthogonality
        for (int c1 = 0; c1 < n; ++c1)
            for (int c2 = 0; c2 < n; ++c2) {
                double dot = 0.0;
                for (int k = 0; k < n; ++k)
                    dot += d.vectors[static_cast<size_t>(k) * n + c1] *
                           d.vectors[static_cast<size_t>(k) * n + c2];
                CHECK(dot == doctest::Approx(c1 == c2 ? 1.0 : 0.0).absolute(1e-12));
            }
    }
}

TEST_CASE("spectral functions") {
    const SymMatrix i2 = SymMatrix::identity(2);
    const SymMatrix four_i = SymMatrix::scaled_identity(2, 4.0);

    CHECK(spd_sqrt(four_i).at(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(spd_log(four_i).at(0, 0) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
    CHECK(spd_exp(i2).at(1, 1) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(spd_pow(four_i, 0.5).at(1, 1) == doctest::Approx(2.0).epsilon(1e-14));

    // log-exp round trip on a random SPD matrix
    Rng rng(5);
    SymMatrix s(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const double v = rng.uniform(-0.8, 0.8);
            s.at(i, j) = v;
            s.at(j, i) = v;
        }
    const SymMatrix a = spd_exp(s);
    const SymMatrix back = spd_log(a);
    for (size_t k = 0; k < back.a.size(); ++k)
        CHECK(back.a[k] == doctest::Approx(s.a[k]).absolute(1e-11));
}

TEST_CASE("affine-invariant distance of identity and e^2 identity") {
    // oracle: Frobenius norm of the matrix logarithm, log(e^2 I) = 2I
    const SymMatrix a = SymMatrix::identity(2);
    const SymMatrix b = SymMatrix::scaled_identity(2, std::exp(2.0));
    const double expected = sym_frobenius(spd_log(b));
    CHECK(expected == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(spd_distance(a, b) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("geodesic of commuting matrices is the spectral power mean") {
    const SymMatrix a = SymMatrix::identity(2);
    const SymMatrix b = SymMatrix::scaled_identity(2, 4.0);
    const SymMatrix mid = spd_geodesic(a, b, 0.5);
    CHECK(mid.at(0, 0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(mid.at(1, 1) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(mid.at(0, 1) == doctest::Approx(0.0).absolute(1e-13));
}

TEST_CASE("exp and log maps invert each other") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        SymMatrix s(2), t(2);
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                double v = rng.uniform(-0.7, 0.7);
                s.at(i, j) = s.at(j, i) = v;
                v = rng.uniform(-0.7, 0.7);
                t.at(i, j) = t.at(j, i) = v;
            }
        const SymMatrix base = spd_exp(s);
        const SymMatrix target = spd_exp(t);
        const SymMatrix v = spd_log_map(base, target);
        const SymMatrix back = spd_exp_map(base, v);
        for (size_t k = 0; k < back.a.size(); ++k)
            CHECK(back.a[k] == doctest::Approx(target.a[k]).absolute(1e-10));
        CHECK(spd_tangent_norm(base, v) ==
              doctest::Approx(spd_distance(base, target)).absolute(1e-10));
    }
}

TEST_CASE("validation rejects bad inputs") {
    SymMatrix asym(2);
    asym.at(0, 0) = 1.0;
    asym.at(0, 1) = 0.5;
    asym.at(1, 0) = 0.2;
    asym.at(1, 1) = 1.0;
    CHECK_THROWS_AS((void)eig_sym(asym), ValidationError);

    const SymMatrix neg = from_rows({{1.0, 0.0}, {0.0, -2.0}});
    CHECK_THROWS_AS((void)spd_log(neg), ValidationError);
    CHECK_THROWS_AS((void)spd_sqrt(neg), ValidationError);
    CHECK_FALSE(spd_ldl_check(neg));
    CHECK(spd_ldl_check(from_rows({{2.0, 1.0}, {1.0, 2.0}})));
    CHECK_FALSE(is_spd(neg));
}
