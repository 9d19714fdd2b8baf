#ifndef MODALITY_SYM_MODEL_HPP
#define MODALITY_SYM_MODEL_HPP

#include <utility>
#include <vector>

#include "modality/constructions.hpp"
#include "modality/model.hpp"

namespace modality {

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

namespace symops {

/// Multiset union (concatenation of commutative words).
inline LinearMap concat(Workspace& ws, const ModulePtr& symv) {
    ModulePtr dom = ws.tensor2(symv, symv);
    return LinearMap::from_images(dom, symv, [symv](const BasisLabel& l) {
        auto parts = detail::split_label(l, {1, 1});
        std::vector<BasisLabel> entries = parts[0].kids();
        const auto& more = parts[1].kids();
        entries.insert(entries.end(), more.begin(), more.end());
        return Vector::basis(symv, BasisLabel::multiset(std::move(entries)));
    });
}

/// Unit of the algebra: 1 |-> empty monomial.
inline LinearMap alg_unit(Workspace& ws, const ModulePtr& symv) {
    return LinearMap::from_images(ws.unit(), symv, [symv](const BasisLabel&) {
        return Vector::basis(symv, BasisLabel::multiset({}));
    });
}

/// Counit of the coalgebra: empty monomial |-> 1, higher degrees |-> 0.
inline LinearMap counit(Workspace& ws, const ModulePtr& symv) {
    ModulePtr k = ws.unit();
    return LinearMap::from_images(symv, k, [k](const BasisLabel& l) {
        Vector v(k);
        if (l.kids().empty()) v.add_term(BasisLabel::unit(), Scalar::one(k->rig()));
        return v;
    });
}

// distinct entries with multiplicities, canonical order
inline std::vector<std::pair<BasisLabel, int>> runs(const BasisLabel& monomial) {
    std::vector<std::pair<BasisLabel, int>> out;
    for (const auto& e : monomial.kids()) {
        if (!out.empty() && out.back().first == e)
            out.back().second += 1;
        else
            out.emplace_back(e, 1);
    }
    return out;
}

/// Unshuffle comultiplication: sum over sub-multiset splits with binomial
/// multiplicities.
inline LinearMap unshuffle(Workspace& ws, const ModulePtr& symv) {
    ModulePtr cod = ws.tensor2(symv, symv);
    const Rig rig = ws.rig();
    return LinearMap::from_images(symv, cod, [cod, rig](const BasisLabel& l) {
        auto rs = runs(l);
        Vector out(cod);
        std::vector<int> pick(rs.size(), 0);
        while (true) {
            BigInt coef = 1;
            std::vector<BasisLabel> left, right;
            for (std::size_t i = 0; i < rs.size(); ++i) {
                coef *= binomial(rs[i].second, pick[i]);
                for (int j = 0; j < pick[i]; ++j) left.push_back(rs[i].first);
                for (int j = pick[i]; j < rs[i].second; ++j) right.push_back(rs[i].first);
            }
            out.add_term(BasisLabel::tensor2(BasisLabel::multiset(std::move(left)),
                                             BasisLabel::multiset(std::move(right))),
                         Scalar::from_integer(rig, coef));
            std::size_t i = 0;
            for (; i < rs.size(); ++i) {
                if (pick[i] < rs[i].second) {
                    pick[i] += 1;
                    break;
                }
                pick[i] = 0;
            }
            if (i == rs.size()) break;
        }
        return out;
    });
}

/// Monad multiplication: flatten a monomial of monomials by union.
inline LinearMap flatten(const ModulePtr& sym_sym, const ModulePtr& symv) {
    return LinearMap::from_images(sym_sym, symv, [symv](const BasisLabel& l) {
        std::vector<BasisLabel> entries;
        for (const auto& inner : l.kids())
            entries.insert(entries.end(), inner.kids().begin(), inner.kids().end());
        return Vector::basis(symv, BasisLabel::multiset(std::move(entries)));
    });
}

/// Monad unit: v |-> degree-1 monomial {v}.
inline LinearMap monad_unit(const ModulePtr& v, const ModulePtr& symv) {
    return LinearMap::from_images(v, symv, [symv](const BasisLabel& l) {
        return Vector::basis(symv, BasisLabel::multiset({l}));
    });
}

/// Degree-1 projection: {v} |-> v, all other degrees |-> 0.
inline LinearMap proj_deg1(const ModulePtr& symv, const ModulePtr& v) {
    return LinearMap::from_images(symv, v, [v](const BasisLabel& l) {
        Vector out(v);
        if (l.kids().size() == 1) out.add_term(l.kids()[0], Scalar::one(v->rig()));
        return out;
    });
}

/// d(a1...an) = sum_i (a1...a_{i-1} a_{i+1}...an) (x) a_i, with multiset
/// multiplicities.
inline LinearMap derive(Workspace& ws, const ModulePtr& symv, const ModulePtr& v) {
    ModulePtr cod = ws.tensor2(symv, v);
    const Rig rig = ws.rig();
    return LinearMap::from_images(symv, cod, [cod, rig](const BasisLabel& l) {
        Vector out(cod);
        auto rs = runs(l);
        for (std::size_t i = 0; i < rs.size(); ++i) {
            std::vector<BasisLabel> rest;
            for (std::size_t j = 0; j < rs.size(); ++j) {
                int count = rs[j].second - (j == i ? 1 : 0);
                for (int c = 0; c < count; ++c) rest.push_back(rs[j].first);
            }
            out.add_term(BasisLabel::tensor2(BasisLabel::multiset(std::move(rest)), rs[i].first),
                         Scalar::from_integer(rig, BigInt(rs[i].second)));
        }
        return out;
    });
}

/// Functorial lift: monomial over f's domain |-> product of images,
/// expanded multilinearly and re-canonicalized.
inline LinearMap sym_lift(const LinearMap& f, const ModulePtr& sym_dom,
                          const ModulePtr& sym_cod) {
    const Rig rig = sym_cod->rig();
    return LinearMap::from_partial(
        sym_dom, sym_cod, [f, sym_cod, rig](const BasisLabel& l) -> std::optional<Vector> {
            std::map<std::vector<BasisLabel>, Scalar> acc;
            acc.emplace(std::vector<BasisLabel>{}, Scalar::one(rig));
            for (const auto& entry : l.kids()) {
                auto img = f.apply(entry);
                if (!img) return std::nullopt;
                std::map<std::vector<BasisLabel>, Scalar> next;
                for (const auto& [labels, c] : acc) {
                    for (const auto& [el, ec] : img->terms()) {
                        auto ls = labels;
                        ls.push_back(el);
                        Scalar nc = c * ec;
                        if (nc.is_zero()) continue;
                        auto [it, ins] = next.emplace(std::move(ls), nc);
                        if (!ins) it->second += nc;
                    }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            Vector out(sym_cod);
            for (const auto& [labels, c] : acc)
                out.add_term(BasisLabel::multiset(labels), c);
            return out;
        });
}

/// Seely split: Sym(A (+) B) -> Sym A (x) Sym B, partitioning entries by
/// copy tag (a bijection on basis monomials).
inline LinearMap seely_split(Workspace& ws, const ModulePtr& sym_sum,
                             const ModulePtr& sym_a, const ModulePtr& sym_b) {
    ModulePtr cod = ws.tensor2(sym_a, sym_b);
    return LinearMap::from_images(sym_sum, cod, [cod](const BasisLabel& l) {
        std::vector<BasisLabel> left, right;
        for (const auto& e : l.kids())
            (e.copy_tag() == 0 ? left : right).push_back(e.payload());
        return Vector::basis(cod, BasisLabel::tensor2(BasisLabel::multiset(std::move(left)),
                                                      BasisLabel::multiset(std::move(right))));
    });
}

inline LinearMap seely_merge(Workspace& ws, const ModulePtr& sym_a, const ModulePtr& sym_b,
                             const ModulePtr& sym_sum) {
    ModulePtr dom = ws.tensor2(sym_a, sym_b);
    return LinearMap::from_images(dom, sym_sum, [sym_sum](const BasisLabel& l) {
        auto parts = detail::split_label(l, {1, 1});
        std::vector<BasisLabel> entries;
        for (const auto& e : parts[0].kids()) entries.push_back(BasisLabel::copy(0, e));
        for (const auto& e : parts[1].kids()) entries.push_back(BasisLabel::copy(1, e));
        return Vector::basis(sym_sum, BasisLabel::multiset(std::move(entries)));
    });
}

}  // namespace symops

struct SymParams {
    int dim = 2;
    int dim2 = -1;        // slot-B dimension, defaults to dim
    int degree = 4;       // carrier cap for first-level modality objects
    int degree_nested = 3;  // cap once the base already contains a modality object
    int check_degree = 6;   // exhaustive-check degree bound on nested carriers
    std::uint64_t seed = 42;
};

/// The free symmetric algebra modality on modules over the chosen rig,
/// registered in the Opposite orientation with full additive-bialgebra,
/// deriving, codereliction, and (derived) monoidal structure.
inline ModalityModel make_sym_model(std::shared_ptr<Workspace> ws, const SymParams& p) {
    ModalityModel model("sym", Orientation::Opposite, ws, p.seed);
    Workspace& w = *ws;

    int deg = p.degree, deg_nested = p.degree_nested;
    auto bang = [&w, deg, deg_nested](ModulePtr v) {
        return w.sym_alg(v, v->bang_depth() == 0 ? deg : deg_nested);
    };
    model.set_bang(bang, [&model](const LinearMap& f) {
        return symops::sym_lift(f, model.bang(f.dom()), model.bang(f.cod()));
    });

    auto reg = [&model](const std::string& name, BuildFn build) {
        model.register_symbol(name, standard_arity(name), standard_sig(name), std::move(build));
    };
    reg("delta", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::flatten(m.bang(m.bang(a[0])), m.bang(a[0]));
    });
    reg("eps", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::monad_unit(a[0], m.bang(a[0]));
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
    reg("d", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::derive(m.ws(), m.bang(a[0]), a[0]);
    });
    reg("eta", [](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return symops::proj_deg1(m.bang(a[0]), a[0]);
    });
    register_derived_monoidal(model);

    ModulePtr M = w.base("M", p.dim);
    ModulePtr N = w.base("N", p.dim2 < 0 ? p.dim : p.dim2, {"p", "q", "r", "s"});
    model.set_slots({M, N});
    model.set_check_cap(p.check_degree);
    return model;
}

}  // namespace modality

#endif
