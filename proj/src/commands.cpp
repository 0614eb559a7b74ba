#include "sheaftree/commands.hpp"

#include <fstream>
#include <functional>

#include "sheaftree/decompose.hpp"
#include "sheaftree/instance.hpp"
#include "sheaftree/properties.hpp"
#include "sheaftree/rep.hpp"

namespace sheaftree {

using json = nlohmann::ordered_json;

namespace {

json strings(const std::vector<Scalar>& v) {
    json out = json::array();
    for (const auto& s : v) out.push_back(s.to_string());
    return out;
}

json rep_json(const Representation& r) {
    json mats = json::array();
    for (std::size_t i = 0; i < r.elements.size(); ++i) {
        mats.push_back({{"element", r.elements[i]}, {"matrix", matrix_to_json(r.matrices[i])}});
    }
    return {{"elements", r.elements}, {"dim", r.dim}, {"matrices", mats}};
}

json subspace_json(const Subspace& s) {
    return {{"dim", s.dim()}, {"ambient_dim", s.ambient_dim()}, {"basis", matrix_to_json(s.basis())}};
}

json orbit_table(const EquivariantSheaf& es, CellKind kind) {
    json out = json::array();
    for (const Orbit& o : orbits(es.action, kind)) {
        out.push_back({{"representative", o.representative},
                       {"members", o.members},
                       {"stabilizer", stabilizer(es.action, {kind, o.representative})}});
    }
    return out;
}

json error_json(const std::string& type, const std::string& message) { return {{"type", type}, {"message", message}}; }

/// Runs a command body, mapping exceptions onto the exit-code contract.
Report guarded_command(const std::string& command, const std::function<Report()>& body) {
    Report r;
    r.body["command"] = command;
    try {
        return body();
    } catch (const SchemaError& err) {
        r.body["error"] = error_json("SchemaError", err.what());
        r.body["error"]["location"] = err.location();
        r.exit_code = kExitInvalidInput;
    } catch (const ScalarParseError& err) {
        r.body["error"] = error_json("ScalarParseError", err.what());
        r.exit_code = kExitInvalidInput;
    } catch (const ValidationError& err) {
        r.body["error"] = error_json("ValidationError", err.what());
        r.body["error"]["section"] = err.section();
        r.exit_code = kExitInvalidInput;
    } catch (const InfeasibleConstraint& err) {
        r.body["error"] = error_json("InfeasibleConstraint", err.what());
        r.exit_code = kExitInvalidInput;
    } catch (const DecomposeError& err) {
        r.body["error"] = error_json(to_string(err.kind()), err.what());
        r.exit_code = err.kind() == DecomposeError::Kind::HypothesisViolated    ? kExitHypothesisViolated
                      : err.kind() == DecomposeError::Kind::CertificationFailed ? kExitCertificationFailed
                                                                                : kExitInternal;
    } catch (const EquivarianceError& err) {
        r.body["error"] = error_json("EquivarianceError", err.what());
        r.exit_code = kExitInternal;
    } catch (const std::exception& err) {
        r.body["error"] = error_json("InternalError", err.what());
        r.exit_code = kExitInternal;
    }
    return r;
}

json header(const std::string& command, const Instance& inst) {
    json j;
    j["command"] = command;
    j["digest"] = instance_digest(inst);
    j["field"] = inst.sheaf.field.to_string();
    return j;
}

/// Removes a leaf vertex and its edge, renumbering the remaining cells.
Sheaf remove_leaf(const Sheaf& s, VertexId leaf) {
    const EdgeId gone = incident_edges(s.tree, leaf).front();
    auto nv = [&](VertexId v) { return v > leaf ? v - 1 : v; };
    auto ne = [&](EdgeId e) { return e > gone ? e - 1 : e; };
    std::vector<Edge> edges;
    for (const Edge& e : s.tree.edges()) {
        if (e.id != gone) edges.push_back({ne(e.id), nv(e.x), nv(e.y)});
    }
    Sheaf out;
    out.tree = Tree(s.tree.vertex_count() - 1, edges);
    out.field = s.field;
    for (VertexId v = 0; v < s.tree.vertex_count(); ++v) {
        if (v != leaf) out.vdim.push_back(s.vdim[v]);
    }
    for (EdgeId e = 0; e < s.tree.edge_count(); ++e) {
        if (e != gone) out.edim.push_back(s.edim[e]);
    }
    for (const auto& [key, m] : s.gamma) {
        if (key.first != leaf && key.second != gone) out.gamma[{nv(key.first), ne(key.second)}] = m;
    }
    return out;
}

/// Greedy leaf deletion while the check keeps failing.
Sheaf shrink(Sheaf s, const std::function<PropertyCheck(const Sheaf&)>& check) {
    bool progress = true;
    while (progress && s.tree.vertex_count() > 1) {
        progress = false;
        for (VertexId v : leaves(s.tree)) {
            Sheaf smaller = remove_leaf(s, v);
            PropertyCheck c = guarded([&] { return check(smaller); });
            if (c.applicable && !c.ok) {
                s = std::move(smaller);
                progress = true;
                break;
            }
        }
    }
    return s;
}

}  // namespace

Report cmd_validate(std::string_view text) {
    return guarded_command("validate", [&] {
        Instance inst = parse_instance(text);
        Report r;
        r.body = header("validate", inst);
        r.body["vertices"] = inst.sheaf.tree.vertex_count();
        r.body["edges"] = inst.sheaf.tree.edge_count();
        r.body["group_order"] = inst.equivariant ? json(inst.equivariant->group->order()) : json(nullptr);
        r.body["valid"] = true;
        return r;
    });
}

Report cmd_cohomology(std::string_view text) {
    return guarded_command("cohomology", [&] {
        Instance inst = parse_instance(text);
        Report r;
        r.body = header("cohomology", inst);
        CohomologyResult coh = cohomology(inst.sheaf);
        EulerCheck e = euler_check(inst.sheaf);
        r.body["h0_dim"] = coh.h0_dim;
        r.body["h1_dim"] = coh.h1_dim;
        r.body["euler"] = {{"lhs", e.lhs}, {"rhs", e.rhs}, {"holds", e.lhs == e.rhs}};
        if (inst.equivariant) {
            const EquivariantSheaf& es = *inst.equivariant;
            Character c0 = character(rep_on_h0(es, coh));
            Character c1 = character(rep_on_h1(es));
            r.body["group"] = {{"order", es.group->order()},
                               {"vertex_orbits", orbit_table(es, CellKind::Vertex)},
                               {"edge_orbits", orbit_table(es, CellKind::Edge)},
                               {"h0_character", strings(c0.values)},
                               {"h1_character", strings(c1.values)},
                               {"coboundary_equivariant", true}};
        }
        if (e.lhs != e.rhs) r.exit_code = kExitInternal;
        return r;
    });
}

Report cmd_decompose(std::string_view text) {
    json body;
    Report r = guarded_command("decompose", [&] {
        Instance inst = parse_instance(text);
        body = header("decompose", inst);
        EquivariantSheaf es = inst.equivariant ? *inst.equivariant : with_trivial_group(inst.sheaf);
        if (!inst.equivariant) body["warnings"] = json::array({"no group section; using the trivial group"});
        CohomologyResult coh = cohomology(es.sheaf);
        Representation rho0 = rep_on_h0(es, coh);
        body["h0_dim"] = coh.h0_dim;
        body["rank0"] = rank0(es);
        if (coh.h0_dim > 0) {
            IrreducibilityResult irr = is_irreducible(rho0);
            body["irreducibility"] = {{"verdict", to_string(irr.verdict)}, {"reason", irr.reason}};
        }
        Report out;
        try {
            DecompositionResult d = induction_decompose(es);
            json trace = json::array();
            for (TraceStep t : d.trace) trace.push_back(to_string(t));
            json dj = {{"variant", to_string(d.variant)}, {"trace", trace}, {"initial_rank0", d.initial_rank0}};
            if (d.variant != DecompositionResult::Variant::Zero) {
                dj["cell_kind"] = d.variant == DecompositionResult::Variant::VertexInduced ? "vertex" : "edge";
                dj["cell"] = d.cell;
                dj["stabilizer"] = d.stabilizer;
                dj["sigma"] = rep_json(*d.sigma);
            }
            dj["warnings"] = d.warnings;
            body["decomposition"] = dj;
            Certificate cert = verify_decomposition(es, d);
            json cj = {{"verified", true}, {"reason", cert.reason}};
            if (cert.intertwiner) {
                cj["transversal"] = cert.induced->transversal;
                cj["induced_dim"] = cert.induced->total.dim;
                cj["intertwiner"] = matrix_to_json(*cert.intertwiner);
                cj["determinant"] = determinant(*cert.intertwiner).to_string();
                cj["equation"] = "rho_ind(g) A = A rho_H0(g) for all g";
            }
            body["certificate"] = cj;
        } catch (const DecomposeError& err) {
            if (err.kind() != DecomposeError::Kind::HypothesisViolated) throw;
            body["error"] = error_json("HypothesisViolated", err.what());
            json ev;
            ev["ids"] = err.ids();
            bool verified = false;
            if (err.witness()) {
                const Subspace& w = *err.witness();
                verified = !w.is_zero() && w.dim() < rho0.dim && is_invariant(rho0, w);
                ev["invariant_subspace"] = subspace_json(w);
                ev["coordinates"] = "rref basis of H0";
                ev["h0_basis"] = matrix_to_json(coh.h0.basis());
            }
            ev["verified_invariant"] = verified;
            body["evidence"] = ev;
            out.exit_code = verified ? kExitHypothesisViolated : kExitInternal;
        }
        out.body = body;
        return out;
    });
    if (r.exit_code != kExitOk && body.contains("digest") && !r.body.contains("digest")) {
        // keep what was computed before the failure
        body["error"] = r.body["error"];
        r.body = std::move(body);
    }
    return r;
}

Report cmd_selftest(const SelftestParams& params) {
    return guarded_command("selftest", [&] {
        const std::vector<std::string> names{"euler",          "elliptic",           "unifacial",       "multifacial",
                                             "star_blocks",    "les_exactness",      "roundtrip",       "coboundary_equivariance",
                                             "sign_mutation",  "cohomology_reps",    "decomposition",   "roundtrip_equivariant"};
        std::map<std::string, PropertyTally> tallies;
        for (const auto& n : names) tallies[n].name = n;
        std::optional<std::string> repro;

        using SheafCheck = std::function<PropertyCheck(const Sheaf&)>;
        const std::vector<std::pair<std::string, SheafCheck>> sheaf_checks{
            {"euler", prop_euler},          {"elliptic", prop_elliptic},       {"unifacial", prop_unifacial},
            {"multifacial", prop_multifacial}, {"star_blocks", prop_star_blocks},
        };
        const Constraint cycle[] = {Constraint::None, Constraint::NoElliptic, Constraint::Multifacial};
        for (std::size_t i = 0; i < params.count; ++i) {
            Rng rng(params.seed * 0x9E3779B97F4A7C15ULL + i);
            const Field f = params.field ? *params.field : (i % 2 == 0 ? Field::rationals() : Field::prime(5));
            GenParams gp{f, params.max_vertices, params.max_stalk_dim, 0, cycle[i % 3]};
            Sheaf s = random_sheaf(rng, gp);
            Instance inst{s, std::nullopt};
            for (const auto& [name, check] : sheaf_checks) {
                PropertyCheck c = guarded([&] { return check(s); });
                PropertyTally& t = tallies[name];
                if (c.applicable && !c.ok && !t.reproducer) {
                    t.record(c, Instance{shrink(s, check), std::nullopt});
                } else {
                    t.record(c, inst);
                }
            }
            CellSubspaces sub = random_subsheaf(rng, s);
            tallies["les_exactness"].record(guarded([&] { return prop_les(s, sub); }), inst);
            tallies["roundtrip"].record(guarded([&] { return prop_roundtrip(inst); }), inst);

            EquivariantSheaf es = random_catalog_instance(rng, f, std::min<std::size_t>(params.max_vertices, 8),
                                                          std::min<std::size_t>(params.max_stalk_dim, 2));
            Instance einst{es.sheaf, es};
            const SignConvention sign = params.mutate_sign ? SignConvention::Unsigned : SignConvention::Oriented;
            tallies["coboundary_equivariance"].record(guarded([&] { return prop_equivariance(es, sign); }), einst);
            tallies["sign_mutation"].record(guarded([&] { return prop_mutation_detected(es); }), einst);
            tallies["cohomology_reps"].record(guarded([&] { return prop_cohomology_reps(es); }), einst);
            tallies["decomposition"].record(guarded([&] { return prop_decompose(es); }), einst);
            tallies["roundtrip_equivariant"].record(guarded([&] { return prop_roundtrip(einst); }), einst);
        }

        Report r;
        r.body["command"] = "selftest";
        r.body["seed"] = params.seed;
        r.body["count"] = params.count;
        r.body["max_vertices"] = params.max_vertices;
        r.body["max_stalk_dim"] = params.max_stalk_dim;
        r.body["field"] = params.field ? params.field->to_string() : "alternating Q, Fp:5";
        r.body["mutate_sign"] = params.mutate_sign;
        json props = json::array();
        bool ok = true;
        for (const auto& n : names) {
            const PropertyTally& t = tallies[n];
            props.push_back({{"name", n}, {"passed", t.passed}, {"failed", t.failed}, {"skipped", t.skipped}, {"failures", t.failures}});
            if (!t.ok()) {
                ok = false;
                if (!repro) repro = t.reproducer;
            }
        }
        r.body["properties"] = props;
        r.body["ok"] = ok;
        r.body["repro"] = nullptr;
        if (!ok) {
            r.exit_code = kExitInternal;
            if (repro && params.repro_path) {
                std::ofstream(*params.repro_path) << *repro;
                r.body["repro"] = *params.repro_path;
            }
        }
        return r;
    });
}

Report cmd_random(const RandomParams& params) {
    return guarded_command("random", [&] {
        Rng rng(params.seed);
        Instance inst;
        if (params.equivariant) {
            if (params.gen.constraint != Constraint::None) {
                throw InfeasibleConstraint("equivariant generation does not combine with " + to_string(params.gen.constraint));
            }
            EquivariantSheaf es = random_catalog_instance(rng, params.gen.field, params.gen.max_vertices, params.gen.max_stalk_dim);
            inst = Instance{es.sheaf, es};
        } else {
            inst = Instance{random_sheaf(rng, params.gen), std::nullopt};
        }
        Report r;
        r.body = instance_to_json(inst);
        return r;
    });
}

}  // namespace sheaftree
