#include "sheaftree/properties.hpp"

#include <numeric>

#include "sheaftree/decompose.hpp"
#include "sheaftree/rep.hpp"

namespace sheaftree {

namespace {

std::string dims(std::size_t a, std::size_t b) { return std::to_string(a) + " vs " + std::to_string(b); }

bool elliptic_zero(const Sheaf& s) { return elliptic_subsheaf(s).is_zero(); }

}  // namespace

PropertyCheck prop_euler(const Sheaf& s) {
    EulerCheck e = euler_check(s);
    if (e.lhs != e.rhs) return PropertyCheck::fail("h0 - h1 = " + std::to_string(e.lhs) + ", stalk sum = " + std::to_string(e.rhs));
    return PropertyCheck::pass();
}

PropertyCheck prop_elliptic(const Sheaf& s) {
    CellSubspaces ell = elliptic_subsheaf(s);
    std::size_t expected = 0;
    for (const auto& v : ell.vertex) expected += v.dim();
    check_restriction_closed(s, ell);
    CohomologyResult coh = cohomology(build_subsheaf(s, ell).sheaf);
    if (coh.h0_dim != expected) return PropertyCheck::fail("elliptic H0 dimension " + dims(coh.h0_dim, expected));
    if (coh.h1_dim != 0) return PropertyCheck::fail("elliptic H1 has dimension " + std::to_string(coh.h1_dim));
    return PropertyCheck::pass();
}

PropertyCheck prop_unifacial(const Sheaf& s) {
    if (!elliptic_zero(s)) return PropertyCheck::skip("elliptic part is nonzero");
    UnifacialData u = unifacial_data(s);
    RTConstruction rt = build_R_T(s, u);
    LesReport les = les_connecting(rt.ses);
    if (les.coh_c.h1_dim != 0) return PropertyCheck::fail("H1(S^uni) has dimension " + std::to_string(les.coh_c.h1_dim));
    std::size_t t_total = 0;
    for (const auto& t : rt.t_space) t_total += t.dim();
    if (les.coh_c.h0_dim != t_total) return PropertyCheck::fail("dim H0(S^uni) vs sum dim T_e: " + dims(les.coh_c.h0_dim, t_total));
    const Matrix& d = les.delta;
    if (d.rows() != d.cols()) return PropertyCheck::fail("connecting map is not square");
    if (d.rows() > 0 && determinant(d).is_zero()) return PropertyCheck::fail("connecting map is singular");
    if (!les.exact()) return PropertyCheck::fail("long exact sequence of T -> R -> S^uni is not exact");
    return PropertyCheck::pass(std::to_string(t_total) + "-dimensional H0(S^uni)");
}

PropertyCheck prop_multifacial(const Sheaf& s) {
    if (!is_multifacial(s)) return PropertyCheck::skip("not multifacial");
    CohomologyResult coh = cohomology(s);
    if (coh.h0_dim != 0) {
        std::string note;
        try {
            SupportWitness w = support_witness(s, coh.h0.basis_vector(0));
            note = "; support has " + std::to_string(w.support.size()) + " vertices";
        } catch (const std::exception&) {
        }
        return PropertyCheck::fail("multifacial sheaf has h0 = " + std::to_string(coh.h0_dim) + note);
    }
    return PropertyCheck::pass();
}

PropertyCheck prop_star_blocks(const Sheaf& s) {
    if (!elliptic_zero(s)) return PropertyCheck::skip("elliptic part is nonzero");
    RTConstruction rt = build_R_T(s, unifacial_data(s));
    for (std::size_t v = 0; v < rt.star_blocks.size(); ++v) {
        const Matrix& b = rt.star_blocks[v];
        if (b.rows() != b.cols()) return PropertyCheck::fail("star block at vertex " + std::to_string(v) + " is not square");
        if (b.rows() > 0 && determinant(b).is_zero()) return PropertyCheck::fail("star block at vertex " + std::to_string(v) + " is singular");
    }
    return PropertyCheck::pass();
}

PropertyCheck prop_les(const Sheaf& s, const CellSubspaces& sub) {
    SubsheafResult a = build_subsheaf(s, sub);
    QuotientResult c = build_quotient(s, sub);
    ShortExactSeq ses{a.sheaf, s, c.sheaf, a.inclusion, c.proj};
    validate_ses(ses);
    LesReport les = les_connecting(ses);
    for (std::size_t i = 0; i < les.exact_at.size(); ++i) {
        if (!les.exact_at[i]) return PropertyCheck::fail("not exact at node " + std::to_string(i));
    }
    return PropertyCheck::pass();
}

PropertyCheck prop_equivariance(const EquivariantSheaf& es, SignConvention sign) {
    try {
        check_coboundary_equivariance(es, sign);
    } catch (const EquivarianceError& err) {
        return PropertyCheck::fail(err.what());
    }
    return PropertyCheck::pass();
}

PropertyCheck prop_mutation_detected(const EquivariantSheaf& es) {
    Matrix d = coboundary_matrix(es.sheaf);
    bool changes = false;
    for (Element g = 0; g < es.group->order() && !changes; ++g) {
        changes = !(edge_action_matrix(es, g, SignConvention::Unsigned) * d == edge_action_matrix(es, g) * d);
    }
    if (!changes) return PropertyCheck::skip("dropping the sign changes nothing here");
    try {
        check_coboundary_equivariance(es, SignConvention::Unsigned);
    } catch (const EquivarianceError& err) {
        if (err.kind() == EquivarianceError::Kind::EquivarianceBroken) return PropertyCheck::pass(err.what());
    }
    return PropertyCheck::fail("unsigned cochain action was not rejected");
}

PropertyCheck prop_cohomology_reps(const EquivariantSheaf& es) {
    CohomologyResult coh = cohomology(es.sheaf);
    Representation r0 = rep_on_h0(es, coh);
    Representation r1 = rep_on_h1(es);
    validate_representation(r0);
    validate_representation(r1);
    for (Element g = 0; g < es.group->order(); ++g) {
        Matrix p = vertex_action_matrix(es, g);
        for (std::size_t i = 0; i < coh.h0_dim; ++i) {
            if (!coh.h0.contains(p.apply(coh.h0.basis_vector(i)))) {
                return PropertyCheck::fail("H0 not invariant under element " + std::to_string(g));
            }
        }
    }
    return PropertyCheck::pass();
}

PropertyCheck prop_decompose(const EquivariantSheaf& es) {
    Representation rho0 = rep_on_h0(es);
    std::string notes;
    for (bool precheck : {true, false}) {
        const std::string mode = precheck ? "with pre-check" : "without pre-check";
        try {
            DecompositionResult r = induction_decompose(es, {precheck});
            if (r.h0_dim > 0 && r.trace.size() > r.initial_rank0) return PropertyCheck::fail(mode + ": trace longer than the 0-rank");
            verify_decomposition(es, r);
            notes += mode + ": " + to_string(r.variant) + "; ";
        } catch (const DecomposeError& err) {
            if (err.kind() != DecomposeError::Kind::HypothesisViolated) {
                return PropertyCheck::fail(mode + ": " + to_string(err.kind()) + ": " + err.what());
            }
            const auto& w = err.witness();
            if (!w || w->is_zero() || w->dim() >= rho0.dim || !is_invariant(rho0, *w)) {
                return PropertyCheck::fail(mode + ": reducibility evidence failed verification");
            }
            notes += mode + ": reducible; ";
        }
    }
    return PropertyCheck::pass(notes);
}

PropertyCheck prop_roundtrip(const Instance& inst) {
    std::string text = serialize_instance(inst);
    Instance back = parse_instance(text);
    if (!(back == inst)) return PropertyCheck::fail("parse(serialize(x)) differs from x");
    if (serialize_instance(back) != text) return PropertyCheck::fail("serialization is not stable");
    return PropertyCheck::pass();
}

void PropertyTally::record(const PropertyCheck& c, const Instance& inst) {
    if (!c.applicable) {
        ++skipped;
    } else if (c.ok) {
        ++passed;
    } else {
        ++failed;
        if (failures.size() < 5) failures.push_back(c.detail);
        if (!reproducer) reproducer = serialize_instance(inst);
    }
}

}  // namespace sheaftree
