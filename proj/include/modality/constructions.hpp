#ifndef MODALITY_CONSTRUCTIONS_HPP
#define MODALITY_CONSTRUCTIONS_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "modality/model.hpp"

namespace modality {

// ---------------------------------------------------------------------------
// Structure-to-structure builders. Each derived family is defined by an arrow
// expression over the source structure, so deriving and checking share one
// evaluation path. Builders never mutate the source model.
// ---------------------------------------------------------------------------

/// m_tensor from an additive bialgebra modality (slots A, B).
inline const char* m_from_additive_expr() {
    return "compose("
           "tens(delta(A),delta(B)),"
           "tens(lift(tens(id(bang(A)),u(B))),lift(tens(u(A),id(bang(B))))),"
           "nabla(tens(bang(A),bang(B))),"
           "delta(tens(bang(A),bang(B))),"
           "lift(Delta(tens(bang(A),bang(B)))),"
           "lift(tens(lift(tens(eps(A),e(B))),lift(tens(e(A),eps(B))))),"
           "lift(tens(eps(A),eps(B))))";
}

/// m_K from an additive bialgebra modality.
inline const char* mK_from_additive_expr() {
    return "compose(u(K),delta(K),lift(e(K)))";
}

/// nabla from a monoidal coalgebra modality (slot A).
inline const char* nabla_from_monoidal_expr() {
    return "compose("
           "tens(delta(A),delta(A)),"
           "m(bang(A),bang(A)),"
           "lift(sum(tens(eps(A),e(A)),tens(e(A),eps(A)))))";
}

/// u from a monoidal coalgebra modality (slot A).
inline const char* u_from_monoidal_expr() {
    return "compose(mK(),lift(zero(K,A)))";
}

inline const char* d_from_eta_expr() {
    return "compose(tens(id(bang(A)),eta(A)),nabla(A))";
}

inline const char* eta_from_d_expr() {
    return "compose(tens(u(A),id(A)),d(A))";
}

/// Registers m/mK on the model, built from its additive bialgebra structure.
inline void register_derived_monoidal(ModalityModel& model) {
    model.register_symbol(
        "m", 2, standard_sig("m"),
        [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
            return m.evaluate(m_from_additive_expr(), {a[0], a[1]}).under;
        });
    model.register_symbol(
        "mK", 0, standard_sig("mK"),
        [](const ModalityModel& m, const std::vector<ModulePtr>&) {
            return m.evaluate(mK_from_additive_expr(), {}).under;
        });
}

/// Registers d := (1 (x) eta) ; nabla.
inline void register_derived_d(ModalityModel& model) {
    model.register_symbol("d", 1, standard_sig("d"),
                          [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
                              return m.evaluate(d_from_eta_expr(), {a[0]}).under;
                          });
}

struct DerivedMonoidal {
    std::function<FormalMap(const ModulePtr&, const ModulePtr&)> m;
    std::function<FormalMap()> mK;
};

inline DerivedMonoidal m_from_additive(const ModalityModel& model) {
    auto src = std::make_shared<ModalityModel>(model);
    return {[src](const ModulePtr& a, const ModulePtr& b) {
                return src->evaluate(m_from_additive_expr(), {a, b});
            },
            [src]() { return src->evaluate(mK_from_additive_expr(), {}); }};
}

struct DerivedBialgebra {
    std::function<FormalMap(const ModulePtr&)> nabla;
    std::function<FormalMap(const ModulePtr&)> u;
};

inline DerivedBialgebra nabla_from_monoidal(const ModalityModel& model) {
    auto src = std::make_shared<ModalityModel>(model);
    return {[src](const ModulePtr& a) {
                return src->evaluate(nabla_from_monoidal_expr(), {a});
            },
            [src](const ModulePtr& a) { return src->evaluate(u_from_monoidal_expr(), {a}); }};
}

inline std::function<FormalMap(const ModulePtr&)> d_from_eta(const ModalityModel& model) {
    auto src = std::make_shared<ModalityModel>(model);
    return [src](const ModulePtr& a) { return src->evaluate(d_from_eta_expr(), {a}); };
}

inline std::function<FormalMap(const ModulePtr&)> eta_from_d(const ModalityModel& model) {
    auto src = std::make_shared<ModalityModel>(model);
    return [src](const ModulePtr& a) { return src->evaluate(eta_from_d_expr(), {a}); };
}

/// p/i section-retraction quadruple at (A, B).
struct PiMaps {
    FormalMap p0, p1, i0, i1;
};

inline PiMaps pi_maps(const ModalityModel& m, const ModulePtr& a, const ModulePtr& b) {
    return {m.evaluate("tens(eps(A),e(B))", {a, b}), m.evaluate("tens(e(A),eps(B))", {a, b}),
            m.evaluate("tens(eta(A),u(B))", {a, b}), m.evaluate("tens(u(A),eta(B))", {a, b})};
}

/// Seely maps at (A, B): chi, chi^{-1} (additive route when nabla/u exist,
/// monoidal route otherwise), chi_T, chi_T^{-1}.
struct SeelyMaps {
    FormalMap chi, chi_inv, chiT, chiT_inv;
};

inline const char* chi_expr() {
    return "compose(Delta(sum(A,B)),tens(lift(proj(0,A,B)),lift(proj(1,A,B))))";
}
inline const char* chi_inv_additive_expr() {
    return "compose(tens(lift(inj(0,A,B)),lift(inj(1,A,B))),nabla(sum(A,B)))";
}
inline const char* chi_inv_monoidal_expr() {
    return "compose(tens(delta(A),delta(B)),m(bang(A),bang(B)),"
           "lift(sum(compose(tens(eps(A),e(B)),inj(0,A,B)),"
           "compose(tens(e(A),eps(B)),inj(1,A,B)))))";
}

inline SeelyMaps seely(const ModalityModel& m, const ModulePtr& a, const ModulePtr& b) {
    const char* inv = (m.has_symbol("nabla") && m.has_symbol("u")) ? chi_inv_additive_expr()
                                                                   : chi_inv_monoidal_expr();
    return {m.evaluate(chi_expr(), {a, b}), m.evaluate(inv, {a, b}),
            m.evaluate("e(O)", {}), m.evaluate("u(O)", {})};
}

// ---------------------------------------------------------------------------
// The non-additive bialgebra modality !^B A = !B (x) !A over an additive one.
// ---------------------------------------------------------------------------

/// Builds !^B from an additive bialgebra modality with codereliction. The
/// result is a bialgebra modality with codereliction u (x) eta which fails
/// the additivity laws (the classifier records the witness).
inline ModalityModel make_opB_model(const ModalityModel& inner, const ModulePtr& bmod) {
    if (!inner.has_symbol("m") || !inner.has_symbol("nabla"))
        throw Error("opB construction needs an additive model with monoidal structure");
    auto src = std::make_shared<ModalityModel>(inner);
    ModalityModel model(inner.name() + "+opB:" + std::to_string(bmod->dim_base()),
                        inner.orientation(), inner.ws_ptr(), inner.seed());

    model.set_bang(
        [src, bmod](ModulePtr v) {
            return src->ws().tensor2(src->bang(bmod), src->bang(v));
        },
        [src, bmod](const LinearMap& f) {
            return tensor_maps(src->ws(), LinearMap::identity(src->bang(bmod)),
                               src->bang_arrow(f));
        });

    // Families are inner-model composites with slots (A := B-object, B := base).
    auto reg = [&model, src, bmod](const std::string& name, const char* expr) {
        model.register_symbol(name, standard_arity(name), standard_sig(name),
                              [src, bmod, expr](const ModalityModel&,
                                                const std::vector<ModulePtr>& args) {
                                  std::vector<ModulePtr> slots{bmod};
                                  for (const auto& a : args) slots.push_back(a);
                                  return src->evaluate(expr, slots).under;
                              });
    };
    reg("delta",
        "compose(tens(Delta(A),id(bang(B))),"
        "tens(id(bang(A)),delta(A),delta(B)),"
        "tens(id(bang(A)),m(bang(A),bang(B))))");
    reg("eps", "tens(e(A),eps(B))");
    reg("Delta",
        "compose(tens(Delta(A),Delta(B)),"
        "tens(id(bang(A)),sym(bang(A),bang(B)),id(bang(B))))");
    reg("e", "tens(e(A),e(B))");
    reg("nabla",
        "compose(tens(id(bang(A)),sym(bang(A),bang(B)),id(bang(B))),"
        "tens(nabla(A),nabla(B)))");
    reg("u", "tens(u(A),u(B))");
    reg("eta", "tens(u(A),eta(B))");
    register_derived_d(model);

    model.set_slots(inner.slots());
    model.add_note("construction", "!^B over " + bmod->id() + " from " + inner.name());
    return model;
}

// ---------------------------------------------------------------------------
// Biproduct completion: objects are lists (represented as direct-sum
// modules), maps are matrices (represented as block linear maps).
// ---------------------------------------------------------------------------

inline std::vector<ModulePtr> list_components(const ModulePtr& m) {
    if (m->shape() == ModuleShape::Sum) return m->parts();
    if (m->shape() == ModuleShape::Base && m->dim_base() == 0) return {};
    return {m};
}

/// A map of object-lists as an explicit grid of formal entries f_ij.
struct MatrixMap {
    ModulePtr dom, cod;  // sum modules (or single objects / O)
    std::vector<std::vector<FormalMap>> entries;  // [i][j]: dom_i -> cod_j
};

/// Extracts the matrix of a formal map between list objects via
/// iota_i ; F ; pi_j.
inline MatrixMap matrix_of(const ModalityModel& m, const FormalMap& F) {
    auto dcomps = list_components(F.fdom);
    auto ccomps = list_components(F.fcod);
    Workspace& ws = m.ws();
    MatrixMap out{F.fdom, F.fcod, {}};
    for (std::size_t i = 0; i < dcomps.size(); ++i) {
        std::vector<FormalMap> row;
        for (std::size_t j = 0; j < ccomps.size(); ++j) {
            FormalMap ii = dcomps.size() == 1
                               ? m.fid(F.fdom)
                               : m.flift_raw(dcomps[i], F.fdom,
                                             m.orientation() == Orientation::Direct
                                                 ? injection(ws, F.fdom, static_cast<int>(i))
                                                 : projection(ws, F.fdom, static_cast<int>(i)));
            FormalMap pj = ccomps.size() == 1
                               ? m.fid(F.fcod)
                               : m.flift_raw(F.fcod, ccomps[j],
                                             m.orientation() == Orientation::Direct
                                                 ? projection(ws, F.fcod, static_cast<int>(j))
                                                 : injection(ws, F.fcod, static_cast<int>(j)));
            row.push_back(m.fcompose(m.fcompose(ii, F), pj));
        }
        out.entries.push_back(std::move(row));
    }
    return out;
}

/// Reassembles a block map: F = sum_{ij} pi_i ; f_ij ; iota_j.
inline FormalMap block_of(const ModalityModel& m, const MatrixMap& mat) {
    auto dcomps = list_components(mat.dom);
    auto ccomps = list_components(mat.cod);
    Workspace& ws = m.ws();
    auto [ud, uc] = m.underlying_sig(mat.dom, mat.cod);
    FormalMap acc{mat.dom, mat.cod, LinearMap::zero_map(ud, uc)};
    for (std::size_t i = 0; i < dcomps.size(); ++i) {
        for (std::size_t j = 0; j < ccomps.size(); ++j) {
            FormalMap pi = dcomps.size() == 1
                               ? m.fid(mat.dom)
                               : m.flift_raw(mat.dom, dcomps[i],
                                             m.orientation() == Orientation::Direct
                                                 ? projection(ws, mat.dom, static_cast<int>(i))
                                                 : injection(ws, mat.dom, static_cast<int>(i)));
            FormalMap ij = ccomps.size() == 1
                               ? m.fid(mat.cod)
                               : m.flift_raw(ccomps[j], mat.cod,
                                             m.orientation() == Orientation::Direct
                                                 ? injection(ws, mat.cod, static_cast<int>(j))
                                                 : projection(ws, mat.cod, static_cast<int>(j)));
            acc = m.fsum(acc, m.fcompose(m.fcompose(pi, mat.entries[i][j]), ij));
        }
    }
    return acc;
}

/// Standard matrix multiplication: entry (i,j) is sum_k f_ik ; g_kj.
inline MatrixMap matrix_compose(const ModalityModel& m, const MatrixMap& f,
                                const MatrixMap& g) {
    if (f.cod != g.dom) throw TypeError("matrix compose mismatch");
    auto mid = list_components(f.cod);
    MatrixMap out{f.dom, g.cod, {}};
    for (std::size_t i = 0; i < f.entries.size(); ++i) {
        std::vector<FormalMap> row;
        for (std::size_t j = 0; j < g.entries[0].size(); ++j) {
            FormalMap acc = m.fcompose(f.entries[i][0], g.entries[0][j]);
            for (std::size_t k = 1; k < mid.size(); ++k)
                acc = m.fsum(acc, m.fcompose(f.entries[i][k], g.entries[k][j]));
            row.push_back(acc);
        }
        out.entries.push_back(std::move(row));
    }
    return out;
}

/// Standard identity matrix: delta_ij entries.
inline MatrixMap matrix_identity(const ModalityModel& m, const ModulePtr& obj) {
    auto comps = list_components(obj);
    MatrixMap out{obj, obj, {}};
    for (std::size_t i = 0; i < comps.size(); ++i) {
        std::vector<FormalMap> row;
        for (std::size_t j = 0; j < comps.size(); ++j) {
            auto [ud, uc] = m.underlying_sig(comps[i], comps[j]);
            row.push_back(i == j ? m.fid(comps[i])
                                 : FormalMap{comps[i], comps[j],
                                             LinearMap::zero_map(ud, uc)});
        }
        out.entries.push_back(std::move(row));
    }
    return out;
}

namespace detail {

// n-fold comultiplication !X -> (!X)^(x)fan and n-fold multiplication.
inline FormalMap comult_fan(const ModalityModel& inner, const ModulePtr& base, int fan) {
    if (fan == 0) return inner.structural("e", {base});
    FormalMap acc = inner.fid(inner.bang(base));
    for (int i = 1; i < fan; ++i) {
        // acc: !X -> (!X)^i ; widen last factor with Delta
        FormalMap step = inner.structural("Delta", {base});
        std::vector<FormalMap> fs;
        for (int j = 0; j + 1 < i; ++j) fs.push_back(inner.fid(inner.bang(base)));
        fs.push_back(step);
        acc = inner.fcompose(acc, fs.size() == 1 ? fs[0] : inner.ftensor(fs));
    }
    return acc;
}

inline FormalMap mult_fan(const ModalityModel& inner, const ModulePtr& base, int fan) {
    if (fan == 0) return inner.structural("u", {base});
    FormalMap acc = inner.fid(inner.bang(base));
    for (int width = fan; width >= 2; --width) {
        std::vector<FormalMap> fs{inner.structural("nabla", {base})};
        for (int j = 0; j < width - 2; ++j) fs.push_back(inner.fid(inner.bang(base)));
        FormalMap stage = fs.size() == 1 ? fs[0] : inner.ftensor(fs);
        acc = width == fan ? stage : inner.fcompose(acc, stage);
    }
    return acc;
}

// Permutation of tensor factors: maps factor t to position perm[t].
inline FormalMap permute_tensor(const ModalityModel& m, const std::vector<ModulePtr>& factors,
                                const std::vector<int>& perm) {
    Workspace& ws = m.ws();
    ModulePtr dom = ws.tensor(factors);
    std::vector<ModulePtr> out_factors(factors.size());
    for (std::size_t t = 0; t < factors.size(); ++t)
        out_factors[static_cast<std::size_t>(perm[t])] = factors[t];
    ModulePtr cod = ws.tensor(out_factors);
    std::vector<int> counts;
    for (const auto& f : factors) counts.push_back(f->factor_count());
    auto build = [counts, perm](ModulePtr target) {
        return [counts, perm, target](const BasisLabel& l) {
            auto parts = modality::detail::split_label(l, counts);
            std::vector<BasisLabel> out(parts.size());
            for (std::size_t t = 0; t < parts.size(); ++t)
                out[static_cast<std::size_t>(perm[t])] = parts[t];
            return Vector::basis(target, BasisLabel::tensor(out));
        };
    };
    LinearMap u = m.orientation() == Orientation::Direct
                      ? LinearMap::from_images(dom, cod, build(cod))
                      : [&] {
                            // underlying runs cod -> dom: invert the permutation
                            std::vector<int> inv(perm.size());
                            for (std::size_t t = 0; t < perm.size(); ++t)
                                inv[static_cast<std::size_t>(perm[t])] = static_cast<int>(t);
                            std::vector<int> ccounts(counts.size());
                            for (std::size_t t = 0; t < counts.size(); ++t)
                                ccounts[static_cast<std::size_t>(perm[t])] = counts[t];
                            return LinearMap::from_images(
                                cod, dom, [ccounts, inv, dom](const BasisLabel& l) {
                                    auto parts = modality::detail::split_label(l, ccounts);
                                    std::vector<BasisLabel> out(parts.size());
                                    for (std::size_t t = 0; t < parts.size(); ++t)
                                        out[static_cast<std::size_t>(inv[t])] = parts[t];
                                    return Vector::basis(dom, BasisLabel::tensor(out));
                                });
                        }();
    return {dom, cod, u};
}

}  // namespace detail

/// The completed functor on a matrix: fan each !A_i out with iterated
/// comultiplication, route copy (i,j) through !(f_ij), and fold each column
/// with iterated multiplication.
inline FormalMap completed_lift(const ModalityModel& inner, const FormalMap& F) {
    auto dcomps = list_components(F.fdom);
    auto ccomps = list_components(F.fcod);
    const int n = static_cast<int>(dcomps.size());
    const int mcols = static_cast<int>(ccomps.size());
    Workspace& ws = inner.ws();

    MatrixMap mat = matrix_of(inner, F);

    // stage 1: (x)_i comult_fan(mcols)
    std::vector<FormalMap> fans;
    for (int i = 0; i < n; ++i) fans.push_back(detail::comult_fan(inner, dcomps[i], mcols));
    FormalMap stage1 = fans.empty()
                           ? inner.fid(ws.unit())
                           : (fans.size() == 1 ? fans[0] : inner.ftensor(fans));

    // stage 2: permute (i-major) -> (j-major)
    std::vector<ModulePtr> facts;
    std::vector<int> perm;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < mcols; ++j) {
            facts.push_back(inner.bang(dcomps[i]));
            perm.push_back(j * n + i);
        }
    FormalMap stage2 = facts.empty() ? inner.fid(ws.unit())
                                     : detail::permute_tensor(inner, facts, perm);

    // stage 3: (x)_j ( (x)_i !(f_ij) ; mult_fan(n) )
    std::vector<FormalMap> cols;
    for (int j = 0; j < mcols; ++j) {
        if (n == 0) {
            cols.push_back(inner.structural("u", {ccomps[j]}));
            continue;
        }
        std::vector<FormalMap> lifted;
        for (int i = 0; i < n; ++i) {
            const FormalMap& fij = mat.entries[static_cast<std::size_t>(i)]
                                              [static_cast<std::size_t>(j)];
            lifted.push_back(FormalMap{inner.bang(fij.fdom), inner.bang(fij.fcod),
                                       inner.bang_arrow(fij.under)});
        }
        FormalMap col = lifted.size() == 1 ? lifted[0] : inner.ftensor(lifted);
        cols.push_back(inner.fcompose(col, detail::mult_fan(inner, ccomps[j], n)));
    }
    FormalMap stage3 = cols.empty() ? inner.fid(ws.unit())
                                    : (cols.size() == 1 ? cols[0] : inner.ftensor(cols));

    return inner.fcompose(inner.fcompose(stage1, stage2), stage3);
}

/// The biproduct completion of an additive model: objects are lists
/// (direct-sum modules, the empty list being O), !(A_1,...,A_n) is
/// !A_1 (x) ... (x) !A_n, and arrows are block maps.
inline ModalityModel make_biproduct_model(const ModalityModel& inner) {
    if (!inner.has_symbol("nabla") || !inner.has_symbol("u"))
        throw Error("biproduct completion needs an additive bialgebra modality");
    auto src = std::make_shared<ModalityModel>(inner);
    ModalityModel model(inner.name() + "+biprod", inner.orientation(), inner.ws_ptr(),
                        inner.seed());

    std::function<ModulePtr(ModulePtr)> bangc = [src](ModulePtr v) -> ModulePtr {
        auto comps = list_components(v);
        if (comps.empty()) return src->ws().unit();
        std::vector<ModulePtr> bs;
        for (const auto& c : comps) bs.push_back(src->bang(c));
        return src->ws().tensor(bs);
    };
    model.set_bang(bangc, [src](const LinearMap& under) {
        // reconstruct the formal matrix from the underlying block map
        ModulePtr fd, fc;
        if (src->orientation() == Orientation::Direct) {
            fd = under.dom();
            fc = under.cod();
        } else {
            fd = under.cod();
            fc = under.dom();
        }
        FormalMap F{fd, fc, under};
        return completed_lift(*src, F).under;
    });

    // Structural families per component count (0, 1, 2 supported).
    auto by_arity = [src](const char* e0, const char* e1, const char* e2) {
        return [src, e0, e1, e2](const ModalityModel&, const std::vector<ModulePtr>& args) {
            auto comps = list_components(args[0]);
            if (comps.size() == 1) return src->evaluate(e1, {comps[0]}).under;
            if (comps.size() == 2) return src->evaluate(e2, {comps[0], comps[1]}).under;
            return src->evaluate(e0, {}).under;
        };
    };
    model.register_symbol(
        "delta", 1, standard_sig("delta"),
        by_arity("id(K)", "delta(A)", "compose(tens(delta(A),delta(B)),m(bang(A),bang(B)))"));
    model.register_symbol(
        "eps", 1, standard_sig("eps"),
        by_arity("zero(K,O)", "eps(A)",
                 "sum(compose(tens(eps(A),e(B)),inj(0,A,B)),"
                 "compose(tens(e(A),eps(B)),inj(1,A,B)))"));
    model.register_symbol(
        "Delta", 1, standard_sig("Delta"),
        by_arity("id(K)", "Delta(A)",
                 "compose(tens(Delta(A),Delta(B)),"
                 "tens(id(bang(A)),sym(bang(A),bang(B)),id(bang(B))))"));
    model.register_symbol("e", 1, standard_sig("e"), by_arity("id(K)", "e(A)", "tens(e(A),e(B))"));
    model.register_symbol(
        "nabla", 1, standard_sig("nabla"),
        by_arity("id(K)", "nabla(A)",
                 "compose(tens(id(bang(A)),sym(bang(A),bang(B)),id(bang(B))),"
                 "tens(nabla(A),nabla(B)))"));
    model.register_symbol("u", 1, standard_sig("u"), by_arity("id(K)", "u(A)", "tens(u(A),u(B))"));
    if (inner.has_symbol("eta")) {
        model.register_symbol(
            "eta", 1, standard_sig("eta"),
            by_arity("zero(O,K)", "eta(A)",
                     "sum(compose(proj(0,A,B),tens(eta(A),u(B))),"
                     "compose(proj(1,A,B),tens(u(A),eta(B))))"));
        register_derived_d(model);
    }

    Workspace& ws = inner.ws();
    ModulePtr a1 = ws.base("P1", 1, {"v"});
    ModulePtr a2 = ws.base("P2", 1, {"w"});
    ModulePtr b1 = ws.base("P3", 1, {"s"});
    ModulePtr b2 = ws.base("P4", 1, {"t"});
    model.set_slots({ws.sum({a1, a2}), ws.sum({b1, b2})});
    model.set_check_cap(inner.check_cap());
    model.add_note("construction", "biproduct completion of " + inner.name() +
                                       " (lists of length <= 2)");

    model.add_native(
        {"biprod.matrix-category",
         "matrix composition is the sum formula and satisfies the category laws",
         "biproduct", false, [](const ModalityModel& m) {
             ModulePtr X = m.slots()[0], Y = m.slots()[1];
             const auto& pool_xy = m.probe_pool(X, Y);
             const auto& pool_yx = m.probe_pool(Y, X);
             NativeOutcome o;
             auto merge = [&o, &m](const EqReport& r) {
                 o.checked += r.checked;
                 o.skipped += r.skipped;
                 o.frontier_limited = o.frontier_limited || r.frontier_limited;
                 if (o.equal && !r.equal) {
                     o.equal = false;
                     o.witness = m.ws().render(*r.witness);
                     o.lhs_value = r.lhs_value->render(m.ws());
                     o.rhs_value = r.rhs_value->render(m.ws());
                 }
             };
             for (std::size_t i = 0; i < 3; ++i) {
                 FormalMap F = m.flift_raw(X, Y, pool_xy[i]);
                 FormalMap G = m.flift_raw(Y, X, pool_yx[i]);
                 FormalMap H = m.flift_raw(X, Y, pool_xy[i + 1]);
                 MatrixMap MF = matrix_of(m, F), MG = matrix_of(m, G), MH = matrix_of(m, H);
                 // the sum formula agrees with plain composition
                 merge(maps_equal(block_of(m, matrix_compose(m, MF, MG)).under,
                                  m.fcompose(F, G).under, m.check_cap()));
                 // associativity and identities of the matrix category
                 merge(maps_equal(
                     block_of(m, matrix_compose(m, matrix_compose(m, MF, MG), MH)).under,
                     block_of(m, matrix_compose(m, MF, matrix_compose(m, MG, MH))).under,
                     m.check_cap()));
                 merge(maps_equal(
                     block_of(m, matrix_compose(m, matrix_identity(m, X), MF)).under,
                     F.under, m.check_cap()));
                 merge(maps_equal(
                     block_of(m, matrix_compose(m, MF, matrix_identity(m, Y))).under,
                     F.under, m.check_cap()));
             }
             o.note = "3 seeded matrix triples";
             return o;
         }});
    return model;
}

}  // namespace modality

#endif
