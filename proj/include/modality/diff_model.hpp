#ifndef MODALITY_DIFF_MODEL_HPP
#define MODALITY_DIFF_MODEL_HPP

#include <utility>
#include <vector>

#include "modality/sym_model.hpp"

namespace modality {

namespace diffops {

/// The copy shift on (+)^K V: tag n |-> tag n+1; the top tag falls off the
/// carrier and marks the frontier.
inline LinearMap shift(const ModulePtr& sumv) {
    return LinearMap::from_images(sumv, sumv, [sumv](const BasisLabel& l) {
        Vector v(sumv);
        v.add_term(BasisLabel::copy(l.copy_tag() + 1, l.payload()), Scalar::one(sumv->rig()));
        return v;
    });
}

/// d-circ: multiply a generator into a monomial.
inline LinearMap mult_in(Workspace& ws, const ModulePtr& symv, const ModulePtr& sumv) {
    ModulePtr dom = ws.tensor2(symv, sumv);
    return LinearMap::from_images(dom, symv, [symv](const BasisLabel& l) {
        auto parts = detail::split_label(l, {1, 1});
        std::vector<BasisLabel> entries = parts[0].kids();
        entries.push_back(parts[1]);
        return Vector::basis(symv, BasisLabel::multiset(std::move(entries)));
    });
}

/// The differential D = d ; (1 (x) shift) ; d-circ on Sym((+)^K V).
inline LinearMap differential(Workspace& ws, const ModulePtr& symv, const ModulePtr& sumv) {
    LinearMap d = symops::derive(ws, symv, sumv);
    LinearMap mid = tensor_maps(ws, LinearMap::identity(symv), shift(sumv));
    return compose(compose(d, mid), mult_in(ws, symv, sumv));
}

/// psi = <D^n>: tag n |-> n-fold differential.
inline LinearMap psi(Workspace& ws, const ModulePtr& sum_of_diff, const ModulePtr& diffv,
                     const LinearMap& D) {
    return LinearMap::from_partial(
        sum_of_diff, diffv, [D, diffv](const BasisLabel& l) -> std::optional<Vector> {
            Vector acc = Vector::basis(diffv, l.payload());
            for (int n = 0; n < l.copy_tag(); ++n) {
                auto next = D.apply_vec(acc);
                if (!next) return std::nullopt;
                acc = std::move(*next);
            }
            return acc;
        });
}

}  // namespace diffops

struct DiffParams {
    int dim = 2;
    int dim2 = -1;
    int copies = 3;   // K: tags 0..K-1
    int degree = 3;   // monomial size cap
    int degree_nested = 3;
    int check_degree = 5;  // exhaustive-check degree bound on nested carriers
    std::uint64_t seed = 42;
};

namespace detail {

struct DiffParts {
    ModulePtr sumv;   // (+)^K V
    ModulePtr carrier;  // Sym((+)^K V)
};

inline DiffParts diff_parts(const ModalityModel& m, const ModulePtr& v, int copies) {
    std::vector<ModulePtr> comps(static_cast<std::size_t>(copies), v);
    ModulePtr sumv = m.ws().sum(comps);
    return {sumv, m.bang(v)};
}

}  // namespace detail

struct RefutationResult;
inline RefutationResult refutation_witness(const ModalityModel& diff,
                                           const std::vector<Scalar>& coeffs);

/// The free differential algebra modality Diff(V) = Sym((+)^K V): an
/// additive bialgebra modality with no deriving transformation. The
/// canonical failing candidate b = d;(1 (x) pi_0) is registered as d so the
/// differential suite exhibits the failure; the chain-rule sandwich is a
/// native law reproducing the separating values.
inline ModalityModel make_diff_model(std::shared_ptr<Workspace> ws, const DiffParams& p) {
    ModalityModel model("diff", Orientation::Opposite, ws, p.seed);
    Workspace& w = *ws;
    const int K = p.copies;
    int deg = p.degree, deg_nested = p.degree_nested;

    auto sum_of = [&w, K](const ModulePtr& v) {
        return w.sum(std::vector<ModulePtr>(static_cast<std::size_t>(K), v));
    };
    auto bang = [&w, sum_of, deg, deg_nested](ModulePtr v) {
        return w.sym_alg(sum_of(v), v->bang_depth() == 0 ? deg : deg_nested);
    };
    model.set_bang(bang, [&model, sum_of, K](const LinearMap& f) {
        // Sym((+) f): apply f under every copy tag, then lift multilinearly.
        ModulePtr sd = sum_of(f.dom());
        ModulePtr sc = sum_of(f.cod());
        LinearMap sum_f = LinearMap::from_partial(
            sd, sc, [f, sc](const BasisLabel& l) -> std::optional<Vector> {
                auto img = f.apply(l.payload());
                if (!img) return std::nullopt;
                Vector out(sc);
                for (const auto& [il, ic] : img->terms())
                    out.add_term(BasisLabel::copy(l.copy_tag(), il), ic);
                return out;
            });
        return symops::sym_lift(sum_f, model.bang(f.dom()), model.bang(f.cod()));
    });

    auto reg = [&model](const std::string& name, BuildFn build) {
        model.register_symbol(name, standard_arity(name), standard_sig(name), std::move(build));
    };

    // delta <- nu = Sym(psi);mu, the monad multiplication
    reg("delta", [K](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto parts = detail::diff_parts(m, a[0], K);
        LinearMap D = diffops::differential(m.ws(), parts.carrier, parts.sumv);
        ModulePtr diff2 = m.bang(m.bang(a[0]));
        ModulePtr sum_of_diff = m.ws().sum(
            std::vector<ModulePtr>(static_cast<std::size_t>(K), parts.carrier));
        LinearMap ps = diffops::psi(m.ws(), sum_of_diff, parts.carrier, D);
        ModulePtr sym_sym = m.ws().sym_alg(parts.carrier, diff2->cap());
        LinearMap sym_psi = symops::sym_lift(ps, diff2, sym_sym);
        return compose(sym_psi, symops::flatten(sym_sym, parts.carrier));
    });
    // eps <- alpha = iota_0 ; eta
    reg("eps", [K](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto parts = detail::diff_parts(m, a[0], K);
        return compose(injection(m.ws(), parts.sumv, 0),
                       symops::monad_unit(parts.sumv, parts.carrier));
    });
    reg("Delta", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::concat(m.ws(), m.bang(a[0]));
    });
    reg("e", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::alg_unit(m.ws(), m.bang(a[0]));
    });
    reg("nabla", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::unshuffle(m.ws(), m.bang(a[0]));
    });
    reg("u", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::counit(m.ws(), m.bang(a[0]));
    });
    // d <- the canonical candidate b = d_Sym ; (1 (x) pi_0)
    reg("d", [K](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto parts = detail::diff_parts(m, a[0], K);
        LinearMap d = symops::derive(m.ws(), parts.carrier, parts.sumv);
        LinearMap fhat = projection(m.ws(), parts.sumv, 0);
        return compose(d, tensor_maps(m.ws(), LinearMap::identity(parts.carrier), fhat));
    });

    ModulePtr M = w.base("M", p.dim);
    ModulePtr N = w.base("N", p.dim2 < 0 ? p.dim : p.dim2, {"p", "q", "r", "s"});
    model.set_slots({M, N});
    model.set_check_cap(p.check_degree);

    model.add_native(
        {"diff.leibniz-D", "nabla ; D = (1 (x) D) ; nabla + (D (x) 1) ; nabla",
         "differential", false, [K](const ModalityModel& m) {
             auto parts = detail::diff_parts(m, m.slots()[0], K);
             Workspace& w2 = m.ws();
             LinearMap D = diffops::differential(w2, parts.carrier, parts.sumv);
             LinearMap conc = symops::concat(w2, parts.carrier);
             LinearMap lhs = compose(conc, D);
             LinearMap rhs = add_maps(
                 compose(tensor_maps(w2, LinearMap::identity(parts.carrier), D), conc),
                 compose(tensor_maps(w2, D, LinearMap::identity(parts.carrier)), conc));
             auto rep = maps_equal(lhs, rhs, m.check_cap());
             NativeOutcome o;
             o.equal = rep.equal;
             o.frontier_limited = rep.frontier_limited;
             o.checked = rep.checked;
             o.skipped = rep.skipped;
             if (rep.witness) {
                 o.witness = w2.render(*rep.witness);
                 o.lhs_value = rep.lhs_value->render(w2);
                 o.rhs_value = rep.rhs_value->render(w2);
             }
             return o;
         }});
    model.add_native(
        {"diff.refutation",
         "chain-rule sandwich for b = d;(1 (x) fhat): left side = 1 (x) 1 + sigma, "
         "right side = 0",
         "differential", false, [K](const ModalityModel& m) {
             NativeOutcome o;
             const Rig r = m.rig();
             // canonical candidate pi_0 plus a seeded family of sections
             std::vector<std::vector<Scalar>> family{{Scalar::one(r)}};
             std::mt19937_64 rng(m.seed() ^ 0x5eedf00dULL);
             int lo = r.has_negatives() ? -2 : 0;
             std::uniform_int_distribution<int> entry(lo, 2);
             for (int i = 0; i < 5; ++i) {
                 std::vector<Scalar> c{Scalar::one(r)};
                 for (int k = 1; k < K; ++k) c.push_back(Scalar::from_int(r, entry(rng)));
                 family.push_back(std::move(c));
             }
             std::size_t refuted = 0;
             for (std::size_t i = 0; i < family.size(); ++i) {
                 RefutationResult rr = refutation_witness(m, family[i]);
                 bool this_ok = rr.lhs_check.equal && rr.rhs_check.equal &&
                                !rr.disagreement.equal;
                 o.checked += rr.disagreement.checked;
                 if (i == 0 && rr.disagreement.witness) {
                     o.witness = m.ws().render(*rr.disagreement.witness);
                     o.lhs_value = rr.disagreement.lhs_value->render(m.ws());
                     o.rhs_value = rr.disagreement.rhs_value->render(m.ws());
                 }
                 if (this_ok) refuted += 1;
             }
             o.equal = refuted == family.size();
             o.note = "refuted for the canonical section pi_0 and " +
                      std::to_string(family.size() - 1) +
                      " seeded natural sections of iota_0";
             return o;
         }});
    model.add_note("refutation",
                   "refuted: the chain-rule sandwich separates every candidate "
                   "b = d;(1 (x) fhat) in the probe family; the universal claim over all "
                   "natural transformations is the cited theorem, not a mechanical proof");
    return model;
}

// ---------------------------------------------------------------------------
// The impossibility witness: for any natural section fhat of iota_0, the
// chain-rule sandwich around b = d;(1 (x) fhat) evaluates to 1(x)1 + sigma on
// the left and 0 on the right, so no candidate satisfies the chain rule.
// ---------------------------------------------------------------------------

struct RefutationResult {
    LinearMap lhs, rhs;          // both M (x) M -> M (x) M
    LinearMap expected_lhs;      // 1(x)1 + sigma
    LinearMap expected_rhs;     // 0
    EqReport lhs_check, rhs_check, disagreement;
};

/// fhat = sum_k c_k pi_k with c_0 = 1 (the general natural form of a section
/// of iota_0).
inline LinearMap natural_section(Workspace& ws, const ModulePtr& sumv,
                                 const std::vector<Scalar>& coeffs) {
    ModulePtr comp = sumv->parts().at(0);
    return LinearMap::from_images(sumv, comp, [comp, coeffs](const BasisLabel& l) {
        Vector v(comp);
        std::size_t tag = static_cast<std::size_t>(l.copy_tag());
        if (tag < coeffs.size()) v.add_term(l.payload(), coeffs[tag]);
        return v;
    });
}

/// Evaluates the two proof composites for candidate b = d;(1 (x) fhat),
/// where fhat is given by its copy-tag coefficients (c_0 must be 1).
inline RefutationResult refutation_witness(const ModalityModel& diff,
                                           const std::vector<Scalar>& coeffs) {
    Workspace& ws = diff.ws();
    ModulePtr M = diff.slots()[0];
    // Diff(M) = Sym((+)^K M): read K off the carrier.
    const int K = static_cast<int>(diff.bang(M)->parts()[0]->parts().size());

    auto carrier_of = [&](const ModulePtr& v) { return diff.bang(v); };
    auto sum_of = [&](const ModulePtr& v) {
        return ws.sum(std::vector<ModulePtr>(static_cast<std::size_t>(K), v));
    };
    auto candidate = [&](const ModulePtr& v) {
        ModulePtr sv = sum_of(v);
        ModulePtr cv = carrier_of(v);
        LinearMap fhat = natural_section(ws, sv, coeffs);
        if (!maps_equal(compose(injection(ws, sv, 0), fhat), LinearMap::identity(v)).equal)
            throw Error("invalid candidate");
        return compose(symops::derive(ws, cv, sv),
                       tensor_maps(ws, LinearMap::identity(cv), fhat));
    };

    ModulePtr DM = carrier_of(M);        // Diff(M)
    ModulePtr DDM = carrier_of(DM);      // Diff(Diff(M))
    ModulePtr sumM = sum_of(M);
    ModulePtr sumDM = sum_of(DM);

    LinearMap alpha = diff.structural("eps", {M}).under;     // M -> Diff M
    LinearMap nu = diff.structural("delta", {M}).under;      // Diff(Diff M) -> Diff M
    LinearMap concat = diff.structural("Delta", {M}).under;  // Diff M (x) Diff M -> Diff M
    LinearMap bM = candidate(M);
    LinearMap bDM = candidate(DM);

    // shared prefix: (alpha (x) alpha) ; concat ; iota_1 ; eta
    LinearMap prefix = compose(
        compose(tensor_maps(ws, alpha, alpha), concat),
        compose(injection(ws, sumDM, 1), symops::monad_unit(sumDM, DDM)));

    // shared suffix: (eps;pi_1) (x) 1, with eps the degree-1 projection
    LinearMap eps_pi1 = compose(symops::proj_deg1(DM, sumM), projection(ws, sumM, 1));
    LinearMap suffix = tensor_maps(ws, eps_pi1, LinearMap::identity(M));

    LinearMap lhs = compose(compose(prefix, compose(nu, bM)), suffix);
    LinearMap rhs = compose(
        compose(prefix, bDM),
        compose(compose(tensor_maps(ws, nu, bM),
                        tensor_maps(ws, concat, LinearMap::identity(M))),
                suffix));

    ModulePtr MM = ws.tensor2(M, M);
    LinearMap expected_lhs = add_maps(LinearMap::identity(MM), symmetry(ws, M, M));
    LinearMap expected_rhs = LinearMap::zero_map(MM, MM);

    RefutationResult r{lhs, rhs, expected_lhs, expected_rhs, {}, {}, {}};
    r.lhs_check = maps_equal(lhs, expected_lhs);
    r.rhs_check = maps_equal(rhs, expected_rhs);
    r.disagreement = maps_equal(lhs, rhs);
    return r;
}

inline RefutationResult refutation_witness(const ModalityModel& diff) {
    std::vector<Scalar> c{Scalar::one(diff.rig())};
    return refutation_witness(diff, c);  // fhat = pi_0
}

}  // namespace modality

#endif
