#include <doctest.h>

#include <memory>

#include "oracle.hpp"
#include "sheaftree/equivariant.hpp"
#include "sheaftree/generate.hpp"
#include "sheaftree/rep.hpp"

using namespace sheaftree;

namespace {

const Field Q = Field::rationals();

GroupPtr cyclic(std::size_t n) {
    std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
    return std::make_shared<const GroupTable>(mul);
}

Representation rep(GroupPtr g, const Field& f, std::size_t dim, std::vector<Matrix> mats) {
    return Representation{g, g->all_elements(), f, dim, std::move(mats)};
}

Representation sign_c2(const Field& f) {
    return rep(cyclic(2), f, 1, {Matrix::identity(f, 1), Matrix(f, 1, 1, {-1})});
}

/// Powers of a generator matrix for the cyclic group of order n.
Representation cyclic_rep(std::size_t n, const Matrix& gen) {
    std::vector<Matrix> mats{Matrix::identity(gen.field(), gen.rows())};
    for (std::size_t k = 1; k < n; ++k) mats.push_back(gen * mats.back());
    return rep(cyclic(n), gen.field(), gen.rows(), mats);
}

Representation standard_s3() { return rep_on_h0(oracle::load_equivariant("star3_ell.json")); }

/// S3 permuting the coordinates of k^3, in the fixture's element order.
Representation permutation_s3() {
    EquivariantSheaf es = oracle::load_equivariant("star3_ell.json");
    std::vector<Matrix> mats;
    for (Element g = 0; g < 6; ++g) {
        Matrix m(Q, 3, 3);
        for (VertexId v = 1; v <= 3; ++v) m(es.action.act(g, v) - 1, v - 1) = Scalar::one(Q);
        mats.push_back(m);
    }
    return rep(es.group, Q, 3, mats);
}

Representation restrict_to(const Representation& rho, const std::vector<Element>& sub) {
    Representation out{rho.group, sub, rho.field, rho.dim, {}};
    for (Element g : sub) out.matrices.push_back(rho(g));
    return out;
}

bool verified_iso(const Representation& a, const Representation& b, const Matrix& w) {
    for (Element g : a.elements)
        if (!(b(g) * w == w * a(g))) return false;
    return oracle::invertible(w);
}

/// Every nonzero vector generates the whole space; enumerates F_p^dim.
bool brute_irreducible(const Representation& rho) {
    const std::uint64_t p = rho.field.characteristic();
    const std::size_t n = rho.dim;
    std::vector<long> v(n, 0);
    while (true) {
        std::size_t k = 0;
        while (k < n && ++v[k] == static_cast<long>(p)) v[k++] = 0;
        if (k == n) return true;
        Matrix span(rho.field, 1, n);
        for (std::size_t i = 0; i < n; ++i) span(0, i) = Scalar(rho.field, v[i]);
        std::size_t r = 1;
        while (true) {
            Matrix grown = span;
            for (const Matrix& m : rho.matrices) grown = vstack(grown, (m * span.transpose()).transpose());
            const std::size_t nr = oracle::rank_of(grown);
            if (nr == r) break;
            span = grown;
            r = nr;
        }
        if (r < n) return false;
    }
}

}  // namespace

TEST_CASE("induction examples") {
    Representation sigma = standard_s3();
    InducedRep same = induce(sigma);
    CHECK(same.transversal.size() == 1);
    CHECK(same.total.dim == 2);
    for (Element g = 0; g < 6; ++g) CHECK(same.total(g) == sigma(g));

    Representation triv = Representation::trivial(cyclic(2), {0}, Q, 1);
    InducedRep reg = induce(triv);
    CHECK(reg.total.dim == 2);
    CHECK(reg.total(0).is_identity());
    CHECK(reg.total(1) == Matrix(Q, 2, 2, {0, 1, 1, 0}));
    Character chi = character(reg.total);
    CHECK(chi.values[0] == Scalar(Q, 2));
    CHECK(chi.values[1] == Scalar(Q, 0));
}

TEST_CASE("intertwiner spaces and commutants") {
    GroupPtr c2 = cyclic(2);
    Representation t1 = Representation::trivial(c2, c2->all_elements(), Q, 1);
    CHECK(hom_space(t1, t1).dim() == 1);
    CHECK(hom_space(t1, sign_c2(Q)).dim() == 0);
    CHECK(hom_space(standard_s3(), standard_s3()).dim() == 1);

    CHECK(commutant_dim(t1) == 1);
    CHECK(commutant_dim(Representation::trivial(c2, c2->all_elements(), Q, 2)) == 4);
    CHECK(commutant_dim(standard_s3()) == 1);
}

TEST_CASE("isomorphism certificates") {
    Representation s = standard_s3();
    IsoResult same = is_isomorphic(s, s);
    REQUIRE(same.verdict == IsoResult::Verdict::Isomorphic);
    CHECK(verified_iso(s, s, *same.witness));

    GroupPtr c2 = cyclic(2);
    IsoResult diff = is_isomorphic(Representation::trivial(c2, c2->all_elements(), Q, 1), sign_c2(Q));
    CHECK(diff.verdict == IsoResult::Verdict::NotIsomorphic);
    CHECK_FALSE(diff.witness);

    Representation perm = permutation_s3();
    Representation split = direct_sum({Representation::trivial(s.group, s.elements, Q, 1), s});
    IsoResult iso = is_isomorphic(perm, split);
    REQUIRE(iso.verdict == IsoResult::Verdict::Isomorphic);
    CHECK(verified_iso(perm, split, *iso.witness));
    CHECK(is_intertwiner(perm, split, *iso.witness));

    CHECK(is_isomorphic(s, split).verdict == IsoResult::Verdict::NotIsomorphic);
}

TEST_CASE("irreducibility") {
    GroupPtr c2 = cyclic(2);
    CHECK(is_irreducible(Representation::trivial(c2, c2->all_elements(), Q, 0)).verdict ==
          IrreducibilityResult::Verdict::Reducible);
    CHECK(is_irreducible(standard_s3()).verdict == IrreducibilityResult::Verdict::Irreducible);

    GroupPtr c1 = cyclic(1);
    IrreducibilityResult two = is_irreducible(Representation::trivial(c1, {0}, Q, 2));
    REQUIRE(two.verdict == IrreducibilityResult::Verdict::Reducible);
    REQUIRE(two.witness);
    CHECK(two.witness->dim() == 1);

    // rotation of order 3: irreducible unless the field has a primitive cube root of unity
    CHECK(is_irreducible(cyclic_rep(3, Matrix(Q, 2, 2, {0, -1, 1, -1}))).verdict ==
          IrreducibilityResult::Verdict::Irreducible);
    const Field f5 = Field::prime(5), f7 = Field::prime(7);
    CHECK(is_irreducible(cyclic_rep(3, Matrix(f5, 2, 2, {0, -1, 1, -1}))).verdict ==
          IrreducibilityResult::Verdict::Irreducible);
    IrreducibilityResult split = is_irreducible(cyclic_rep(3, Matrix(f7, 2, 2, {0, -1, 1, -1})));
    REQUIRE(split.verdict == IrreducibilityResult::Verdict::Reducible);
    CHECK(oracle::invariant_rows(cyclic_rep(3, Matrix(f7, 2, 2, {0, -1, 1, -1})), split.witness->basis()));

    // the regular representation of C2 splits in odd characteristic
    Representation reg3 = induce(Representation::trivial(c2, {0}, Field::prime(3), 1)).total;
    CHECK(is_irreducible(reg3).verdict == IrreducibilityResult::Verdict::Reducible);
}

TEST_CASE("characters") {
    GroupPtr c2 = cyclic(2);
    Character t = character(Representation::trivial(c2, c2->all_elements(), Q, 1));
    CHECK(t.values == std::vector<Scalar>{Scalar(Q, 1), Scalar(Q, 1)});
    Character st = character(standard_s3());
    CHECK(st.values ==
          std::vector<Scalar>{Scalar(Q, 2), Scalar(Q, 0), Scalar(Q, 0), Scalar(Q, 0), Scalar(Q, -1), Scalar(Q, -1)});
    CHECK(st.class_constant);
}

TEST_CASE("property: induction against the coset character formula and Frobenius reciprocity") {
    Rng rng(8080);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        EquivariantSheaf es = random_catalog_instance(rng, Q, 8, 2);
        Representation tau = rep_on_h0(es);
        for (const Orbit& o : orbits(es.action, CellKind::Vertex)) {
            Representation sigma = stalk_representation(es, {CellKind::Vertex, o.representative});
            if (sigma.dim == 0) continue;
            InducedRep ind = induce(sigma);
            REQUIRE_NOTHROW(validate_representation(ind.total));
            CHECK(ind.total.dim == sigma.dim * ind.transversal.size());
            CHECK(ind.transversal.size() * sigma.elements.size() == es.group->order());
            CHECK(character(ind.total).values == oracle::induced_character(*es.group, sigma));
            CHECK(hom_space(ind.total, tau).dim() == hom_space(sigma, restrict_to(tau, sigma.elements)).dim());
            ++checked;
        }
    }
    CHECK(checked > 40);
}

TEST_CASE("property: irreducibility verdicts agree with enumeration over small prime fields") {
    Rng rng(5150);
    int decided = 0;
    for (int trial = 0; trial < 80; ++trial) {
        const Field f = trial % 2 == 0 ? Field::prime(5) : Field::prime(3);
        EquivariantSheaf es = random_catalog_instance(rng, f, 8, 2);
        Representation rho = rep_on_h0(es);
        if (rho.dim == 0 || rho.dim > 4) continue;
        IrreducibilityResult r = is_irreducible(rho);
        const bool truth = brute_irreducible(rho);
        CAPTURE(rho.dim);
        CAPTURE(r.reason);
        if (r.verdict == IrreducibilityResult::Verdict::Inconclusive) continue;
        ++decided;
        CHECK((r.verdict == IrreducibilityResult::Verdict::Irreducible) == truth);
        if (r.verdict == IrreducibilityResult::Verdict::Reducible) {
            REQUIRE(r.witness);
            CHECK(r.witness->dim() > 0);
            CHECK(r.witness->dim() < rho.dim);
            CHECK(oracle::invariant_rows(rho, r.witness->basis()));
        }
    }
    CHECK(decided > 20);
}

TEST_CASE("property: isomorphism witnesses under random base change") {
    Rng rng(6060);
    int found = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const Field f = trial % 2 == 0 ? Q : Field::prime(5);
        EquivariantSheaf es = random_catalog_instance(rng, f, 8, 2);
        Representation rho = rep_on_h0(es);
        if (rho.dim == 0) continue;
        Matrix b = random_matrix(rng, f, rho.dim, rho.dim, 2);
        auto binv = inverse(b);
        if (!binv) continue;
        Representation conj = rho;
        for (std::size_t i = 0; i < conj.matrices.size(); ++i) conj.matrices[i] = b * rho.matrices[i] * *binv;
        IsoResult r = is_isomorphic(rho, conj);
        CHECK(r.verdict != IsoResult::Verdict::NotIsomorphic);
        if (r.verdict == IsoResult::Verdict::Isomorphic) {
            CHECK(verified_iso(rho, conj, *r.witness));
            ++found;
        }
    }
    CHECK(found > 15);
}
