#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sheaftree/exactla.hpp"
#include "sheaftree/generate.hpp"

using namespace sheaftree;

namespace {

const Field Q = Field::rationals();
const Field F5 = Field::prime(5);

Vector vec(const Field& f, std::initializer_list<long> xs) {
    Vector v;
    for (long x : xs) v.emplace_back(f, x);
    return v;
}

Subspace line(const Field& f, std::initializer_list<long> xs) {
    return Subspace::span(f, xs.size(), {vec(f, xs)});
}

}  // namespace

TEST_CASE("fields and scalars") {
    CHECK(Field::parse("Q").is_rational());
    CHECK(Field::parse("Fp:7").characteristic() == 7);
    CHECK_THROWS_AS(Field::prime(4), FieldError);
    CHECK_THROWS_AS(Field::parse("Fp:1"), FieldError);
    CHECK_THROWS_AS(Field::parse("R"), FieldError);

    CHECK(Scalar::parse(Q, "3/6").to_string() == "1/2");
    CHECK(Scalar::parse(Q, "-4/2").to_string() == "-2");
    CHECK(Scalar::parse(F5, "-1").to_string() == "4");
    CHECK(Scalar::parse(F5, "12").to_string() == "2");
    CHECK_THROWS_AS(Scalar::parse(Q, "1/0"), ScalarParseError);
    CHECK_THROWS_AS(Scalar::parse(Q, "x"), ScalarParseError);
    CHECK_THROWS_AS(Scalar::parse(F5, "1/2"), ScalarParseError);

    CHECK(Scalar(F5, 2) * Scalar(F5, 3) == Scalar(F5, 1));
    CHECK(Scalar(F5, 2).inverse() == Scalar(F5, 3));
    CHECK(Scalar(Q, 2).inverse().to_string() == "1/2");
    CHECK_THROWS(Scalar::zero(Q).inverse());
    CHECK_THROWS(Scalar(Q, 1) + Scalar(F5, 1));
}

TEST_CASE("rref examples") {
    RrefResult id = rref(Matrix::identity(Q, 2));
    CHECK(id.reduced.is_identity());
    CHECK(id.pivots == std::vector<std::size_t>{0, 1});
    CHECK(id.rank == 2);

    RrefResult z = rref(Matrix::zero(Q, 2, 2));
    CHECK(z.reduced.is_zero());
    CHECK(z.pivots.empty());
    CHECK(z.rank == 0);

    RrefResult r = rref(Matrix(Q, 2, 2, {1, 2, 2, 4}));
    CHECK(r.reduced == Matrix(Q, 2, 2, {1, 2, 0, 0}));
    CHECK(r.pivots == std::vector<std::size_t>{0});
    CHECK(r.rank == 1);
}

TEST_CASE("kernel, column space, intersection") {
    CHECK(kernel_basis(Matrix::identity(Q, 2)) == Subspace::zero(Q, 2));
    CHECK(kernel_basis(Matrix(Q, 1, 2, {1, -1})) == line(Q, {1, 1}));
    CHECK(kernel_basis(Matrix::zero(Q, 3, 3)) == Subspace::full(Q, 3));

    CHECK(column_space(Matrix::identity(Q, 2)) == Subspace::full(Q, 2));
    CHECK(column_space(Matrix::zero(Q, 2, 2)) == Subspace::zero(Q, 2));
    CHECK(column_space(Matrix(Q, 2, 1, {1, 2})) == line(Q, {1, 2}));

    Subspace e1 = line(Q, {1, 0}), e2 = line(Q, {0, 1});
    CHECK(intersect(e1, e1) == e1);
    CHECK(intersect(e1, e2).is_zero());
    CHECK(intersect(sum(e1, e2), line(Q, {1, 1})) == line(Q, {1, 1}));
    CHECK_THROWS_AS(intersect(e1, Subspace::full(Q, 3)), std::invalid_argument);
}

TEST_CASE("quotient maps") {
    QuotientMap q0 = quotient_map(2, Subspace::zero(Q, 2));
    CHECK(q0.proj.rows() == 2);
    CHECK((q0.proj * q0.section).is_identity());

    QuotientMap qf = quotient_map(2, Subspace::full(Q, 2));
    CHECK(qf.proj.rows() == 0);
    CHECK(qf.proj.cols() == 2);

    QuotientMap q = quotient_map(2, line(Q, {1, 1}));
    CHECK(q.proj.rows() == 1);
    CHECK(is_zero_vector(q.proj.apply(vec(Q, {1, 1}))));
    CHECK((q.proj * q.section).is_identity());
}

TEST_CASE("solve") {
    auto x = solve(Matrix::identity(Q, 2), vec(Q, {3, 5}));
    REQUIRE(x);
    CHECK(*x == vec(Q, {3, 5}));

    Matrix a(Q, 1, 2, {1, -1});
    auto y = solve(a, vec(Q, {0}));
    REQUIRE(y);
    CHECK(is_zero_vector(a.apply(*y)));

    CHECK_FALSE(solve(Matrix::zero(Q, 1, 1), vec(Q, {1})));
}

TEST_CASE("zero-size shapes") {
    Matrix a(Q, 0, 3);
    Matrix b(Q, 3, 0);
    CHECK((b * a).rows() == 3);
    CHECK((b * a).is_zero());
    CHECK((a * b).rows() == 0);
    CHECK(kernel_basis(a) == Subspace::full(Q, 3));
    CHECK(determinant(Matrix(Q, 0, 0)) == Scalar::one(Q));
    CHECK(direct_sum(Q, {}).rows() == 0);
}

TEST_CASE("property: linear algebra identities on random matrices") {
    Rng rng(20240601);
    std::uniform_int_distribution<std::size_t> dim(0, 5);
    for (int trial = 0; trial < 300; ++trial) {
        const Field f = trial % 2 == 0 ? Q : F5;
        const std::size_t r = dim(rng), c = dim(rng);
        Matrix m = random_matrix(rng, f, r, c, 2);
        const std::size_t rk = oracle::rank_of(m);
        CHECK(rank(m) == rk);

        Subspace k = kernel_basis(m);
        CHECK(k.dim() + rk == c);
        for (std::size_t i = 0; i < k.dim(); ++i) CHECK(is_zero_vector(m.apply(k.basis_vector(i))));
        CHECK(column_space(m).dim() == rk);

        Subspace a = Subspace::span(random_matrix(rng, f, dim(rng), c, 1));
        Subspace b = Subspace::span(random_matrix(rng, f, dim(rng), c, 1));
        CHECK(sum(a, b).dim() == oracle::sum_dim(a, b));
        Subspace ab = intersect(a, b);
        CHECK(ab.dim() == oracle::meet_dim(a, b));
        CHECK(a.contains(ab));
        CHECK(b.contains(ab));

        QuotientMap q = quotient_map(c, a);
        CHECK(q.proj.rows() == c - a.dim());
        CHECK(kernel_basis(q.proj) == a);
        CHECK((q.proj * q.section).is_identity());

        Matrix sq = random_matrix(rng, f, r, r, 2);
        const bool inv_expected = oracle::rank_of(sq) == r;
        CHECK(determinant(sq).is_zero() == !inv_expected);
        auto inv = inverse(sq);
        CHECK(inv.has_value() == inv_expected);
        if (inv) CHECK((*inv * sq).is_identity());
        Matrix sq2 = random_matrix(rng, f, r, r, 2);
        CHECK(determinant(sq * sq2) == determinant(sq) * determinant(sq2));

        Vector rhs = m.apply(random_matrix(rng, f, c, 1, 2).col(0));
        auto sol = solve(m, rhs);
        REQUIRE(sol);
        CHECK(m.apply(*sol) == rhs);
    }
}

TEST_CASE("determinant against the Leibniz formula") {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m = random_matrix(rng, Q, 3, 3, 3);
        Scalar leibniz = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
        CHECK(determinant(m) == leibniz);
    }
}
