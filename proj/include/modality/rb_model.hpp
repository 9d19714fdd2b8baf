#ifndef MODALITY_RB_MODEL_HPP
#define MODALITY_RB_MODEL_HPP

#include <utility>
#include <vector>

#include "modality/diff_model.hpp"
#include "modality/sym_model.hpp"

namespace modality {

namespace rbops {

// shuffle of two concrete words, with multiplicities when letters repeat
inline void shuffle_words(const std::vector<BasisLabel>& a, std::size_t ia,
                          const std::vector<BasisLabel>& b, std::size_t ib,
                          std::vector<BasisLabel>& cur,
                          std::map<BasisLabel, BigInt>& out) {
    if (ia == a.size() && ib == b.size()) {
        out[BasisLabel::word(cur)] += 1;
        return;
    }
    if (ia < a.size()) {
        cur.push_back(a[ia]);
        shuffle_words(a, ia + 1, b, ib, cur, out);
        cur.pop_back();
    }
    if (ib < b.size()) {
        cur.push_back(b[ib]);
        shuffle_words(a, ia, b, ib + 1, cur, out);
        cur.pop_back();
    }
}

/// The shuffle product on words.
inline LinearMap shuffle(Workspace& ws, const ModulePtr& shv) {
    ModulePtr dom = ws.tensor2(shv, shv);
    const Rig rig = ws.rig();
    return LinearMap::from_images(dom, shv, [shv, rig](const BasisLabel& l) {
        auto parts = detail::split_label(l, {1, 1});
        std::map<BasisLabel, BigInt> counts;
        std::vector<BasisLabel> cur;
        shuffle_words(parts[0].kids(), 0, parts[1].kids(), 0, cur, counts);
        Vector v(shv);
        for (const auto& [w, c] : counts) v.add_term(w, Scalar::from_integer(rig, c));
        return v;
    });
}

/// Deconcatenation: sum of prefix (x) suffix over all cut positions.
inline LinearMap deconcat(Workspace& ws, const ModulePtr& shv) {
    ModulePtr cod = ws.tensor2(shv, shv);
    return LinearMap::from_images(shv, cod, [cod](const BasisLabel& l) {
        Vector v(cod);
        const auto& ks = l.kids();
        for (std::size_t cut = 0; cut <= ks.size(); ++cut) {
            std::vector<BasisLabel> pre(ks.begin(), ks.begin() + cut);
            std::vector<BasisLabel> suf(ks.begin() + cut, ks.end());
            v.add_term(BasisLabel::tensor2(BasisLabel::word(std::move(pre)),
                                           BasisLabel::word(std::move(suf))),
                       Scalar::one(cod->rig()));
        }
        return v;
    });
}

/// Letterwise functorial lift Sh(f).
inline LinearMap word_lift(const LinearMap& f, const ModulePtr& sh_dom,
                           const ModulePtr& sh_cod) {
    return LinearMap::from_partial(
        sh_dom, sh_cod, [f, sh_cod](const BasisLabel& l) -> std::optional<Vector> {
            std::map<std::vector<BasisLabel>, Scalar> acc;
            acc.emplace(std::vector<BasisLabel>{}, Scalar::one(sh_cod->rig()));
            for (const auto& letter : l.kids()) {
                auto img = f.apply(letter);
                if (!img) return std::nullopt;
                std::map<std::vector<BasisLabel>, Scalar> next;
                for (const auto& [word, c] : acc) {
                    for (const auto& [el, ec] : img->terms()) {
                        auto w = word;
                        w.push_back(el);
                        Scalar nc = c * ec;
                        if (nc.is_zero()) continue;
                        auto [it, ins] = next.emplace(std::move(w), nc);
                        if (!ins) it->second += nc;
                    }
                }
                acc = std::move(next);
                if (acc.empty()) break;
            }
            Vector out(sh_cod);
            for (const auto& [word, c] : acc) out.add_term(BasisLabel::word(word), c);
            return out;
        });
}

/// A Rota-Baxter carrier Sh(A) (x) A together with its structure maps.
struct RBStructure {
    ModulePtr algebra;   // A
    ModulePtr sh;        // Sh(A)
    ModulePtr carrier;   // Sh(A) (x) A
    LinearMap alg_mult;  // A (x) A -> A
    BasisLabel alg_unit;
    LinearMap diamond;   // carrier (x) carrier -> carrier
    LinearMap rb_op;     // P
};

/// (w (x) a) diamond (v (x) b) = (w shuffle v) (x) (a.b)
inline LinearMap make_diamond(Workspace& ws, const ModulePtr& sh, const ModulePtr& alg,
                              const LinearMap& alg_mult) {
    ModulePtr carrier = ws.tensor2(sh, alg);
    ModulePtr dom = ws.tensor2(carrier, carrier);
    LinearMap shuf = shuffle(ws, sh);
    return LinearMap::from_partial(
        dom, carrier,
        [carrier, shuf, alg_mult](const BasisLabel& l) -> std::optional<Vector> {
            auto p = detail::split_label(l, {1, 1, 1, 1});
            auto words = shuf.apply(BasisLabel::tensor2(p[0], p[2]));
            auto elems = alg_mult.apply(BasisLabel::tensor2(p[1], p[3]));
            if (!words || !elems) return std::nullopt;
            Vector out(carrier);
            for (const auto& [wl, wc] : words->terms())
                for (const auto& [al, ac] : elems->terms())
                    out.add_term(BasisLabel::tensor2(wl, al), wc * ac);
            return out;
        });
}

/// P(w (x) b): scalar words absorb b as a one-letter word; otherwise b is
/// appended, and the algebra factor resets to 1.
inline LinearMap make_rb_operator(Workspace& ws, const ModulePtr& sh, const ModulePtr& alg,
                                  const BasisLabel& alg_unit) {
    ModulePtr carrier = ws.tensor2(sh, alg);
    return LinearMap::from_images(carrier, carrier, [carrier, alg_unit](const BasisLabel& l) {
        auto p = detail::split_label(l, {1, 1});
        std::vector<BasisLabel> letters = p[0].kids();
        letters.push_back(p[1]);
        return Vector::basis(carrier,
                             BasisLabel::tensor2(BasisLabel::word(std::move(letters)), alg_unit));
    });
}

inline RBStructure make_rb_structure(Workspace& ws, const ModulePtr& alg,
                                     const LinearMap& alg_mult, const BasisLabel& alg_unit,
                                     int word_len) {
    RBStructure s;
    s.algebra = alg;
    s.sh = ws.word_alg(alg, word_len);
    s.carrier = ws.tensor2(s.sh, alg);
    s.alg_mult = alg_mult;
    s.alg_unit = alg_unit;
    s.diamond = make_diamond(ws, s.sh, alg, alg_mult);
    s.rb_op = make_rb_operator(ws, s.sh, alg, alg_unit);
    return s;
}

/// omega((b_1,...,b_n) (x) b) = Q(...Q(Q(b_1).b_2)....b_n).b, the left-nested
/// Rota-Baxter fold.
inline LinearMap omega(Workspace& ws, const ModulePtr& sh_of_b, const ModulePtr& b,
                       const LinearMap& mult_b, const LinearMap& q) {
    ModulePtr dom = ws.tensor2(sh_of_b, b);
    auto mul = [mult_b](const Vector& x, const BasisLabel& y) -> std::optional<Vector> {
        Vector out(mult_b.cod());
        for (const auto& [xl, xc] : x.terms()) {
            auto img = mult_b.apply(BasisLabel::tensor2(xl, y));
            if (!img) return std::nullopt;
            for (const auto& [il, ic] : img->terms()) out.add_term(il, ic * xc);
        }
        return out;
    };
    std::vector<int> counts{sh_of_b->factor_count(), b->factor_count()};
    return LinearMap::from_partial(
        dom, b, [b, q, mul, counts](const BasisLabel& l) -> std::optional<Vector> {
            auto p = detail::split_label(l, counts);
            const auto& letters = p[0].kids();
            if (letters.empty()) return Vector::basis(b, p[1]);
            auto acc = q.apply(letters[0]);
            if (!acc) return std::nullopt;
            for (std::size_t i = 1; i < letters.size(); ++i) {
                auto prod = mul(*acc, letters[i]);
                if (!prod) return std::nullopt;
                acc = q.apply_vec(*prod);
                if (!acc) return std::nullopt;
            }
            return mul(*acc, p[1]);
        });
}

/// Algebra evaluation Sym(B) -> B: fold the (commutative) multiplication
/// over the entries of a monomial, empty monomial to the unit.
inline LinearMap alg_eval(const ModulePtr& sym_b, const ModulePtr& b, const LinearMap& mult_b,
                          const BasisLabel& unit_b) {
    auto mul = [mult_b](const Vector& x, const BasisLabel& y) -> std::optional<Vector> {
        Vector out(mult_b.cod());
        for (const auto& [xl, xc] : x.terms()) {
            auto img = mult_b.apply(BasisLabel::tensor2(xl, y));
            if (!img) return std::nullopt;
            for (const auto& [il, ic] : img->terms()) out.add_term(il, ic * xc);
        }
        return out;
    };
    return LinearMap::from_partial(
        sym_b, b, [b, unit_b, mul](const BasisLabel& l) -> std::optional<Vector> {
            Vector acc = Vector::basis(b, unit_b);
            for (const auto& entry : l.kids()) {
                auto next = mul(acc, entry);
                if (!next) return std::nullopt;
                acc = std::move(*next);
            }
            return acc;
        });
}

}  // namespace rbops

struct RBParams {
    int dim = 1;
    int dim2 = -1;
    int degree = 2;    // inner Sym degree N
    int word_len = 2;  // word length L
    int check_degree = 6;  // exhaustive-check degree bound on big carriers
    std::uint64_t seed = 42;
};

/// The free Rota-Baxter algebra modality RB(Sym V) = Sh(Sym V) (x) Sym V: a
/// coalgebra modality with a deriving transformation 1 (x) d but no
/// bialgebra structure (deconcatenation is not cocommutative).
inline ModalityModel make_rb_model(std::shared_ptr<Workspace> ws, const RBParams& p) {
    ModalityModel model("rb", Orientation::Opposite, ws, p.seed);
    Workspace& w = *ws;
    const int N = p.degree, L = p.word_len;

    auto bang = [&w, N, L](ModulePtr v) {
        ModulePtr symv = w.sym_alg(v, N);
        return w.tensor2(w.word_alg(symv, L), symv);
    };
    model.set_bang(bang, [&model, &w, N, L](const LinearMap& f) {
        ModulePtr sd = w.sym_alg(f.dom(), N), sc = w.sym_alg(f.cod(), N);
        LinearMap sf = symops::sym_lift(f, sd, sc);
        LinearMap wf = rbops::word_lift(sf, w.word_alg(sd, L), w.word_alg(sc, L));
        return tensor_maps(w, wf, sf);
    });

    // per-base Rota-Baxter structure over the free commutative algebra Sym V
    auto structure = [&w, N, L](const ModulePtr& v) {
        ModulePtr symv = w.sym_alg(v, N);
        return rbops::make_rb_structure(w, symv, symops::concat(w, symv),
                                        BasisLabel::multiset({}), L);
    };

    auto reg = [&model](const std::string& name, BuildFn build) {
        model.register_symbol(name, standard_arity(name), standard_sig(name), std::move(build));
    };
    // delta <- the composite-adjunction monad multiplication: evaluate the
    // inner and outer free-algebra layers into T V, then fold with omega.
    reg("delta", [structure, N, L](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        Workspace& w2 = m.ws();
        auto s = structure(a[0]);
        ModulePtr symt = w2.sym_alg(s.carrier, N);
        LinearMap eval_b = rbops::alg_eval(
            symt, s.carrier, s.diamond,
            BasisLabel::tensor2(BasisLabel::word({}), BasisLabel::multiset({})));
        LinearMap sh_eval = rbops::word_lift(eval_b, w2.word_alg(symt, L),
                                             w2.word_alg(s.carrier, L));
        LinearMap om = rbops::omega(w2, w2.word_alg(s.carrier, L), s.carrier, s.diamond,
                                    s.rb_op);
        return compose(tensor_maps(w2, sh_eval, eval_b), om);
    });
    // eps <- the monad unit v |-> () (x) {v}
    reg("eps", [structure](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto s = structure(a[0]);
        ModulePtr carrier = s.carrier;
        return LinearMap::from_images(a[0], carrier, [carrier](const BasisLabel& l) {
            return Vector::basis(carrier,
                                 BasisLabel::tensor2(BasisLabel::word({}),
                                                     BasisLabel::multiset({l})));
        });
    });
    // Delta <- the algebra multiplication diamond
    reg("Delta", [structure](const ModalityModel&, const std::vector<ModulePtr>& a) {
        return structure(a[0]).diamond;
    });
    // e <- the algebra unit
    reg("e", [structure](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto s = structure(a[0]);
        ModulePtr carrier = s.carrier;
        return LinearMap::from_images(m.ws().unit(), carrier, [carrier](const BasisLabel&) {
            return Vector::basis(carrier, BasisLabel::tensor2(BasisLabel::word({}),
                                                              BasisLabel::multiset({})));
        });
    });
    // d <- 1 (x) d: the symmetric-algebra deriving on the algebra factor
    reg("d", [structure](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto s = structure(a[0]);
        return tensor_maps(m.ws(), LinearMap::identity(s.sh),
                           symops::derive(m.ws(), s.algebra, a[0]));
    });

    ModulePtr M = w.base("M", p.dim);
    ModulePtr N2 = w.base("N", p.dim2 < 0 ? p.dim : p.dim2, {"p", "q", "r", "s"});
    model.set_slots({M, N2});
    model.set_check_cap(p.check_degree);

    // -- native laws ---------------------------------------------------------

    auto snap = [structure, &w](const ModalityModel& m) {
        return structure(m.slots()[0]);
    };
    auto to_outcome = [](const EqReport& rep, const Workspace& wsr) {
        NativeOutcome o;
        o.equal = rep.equal;
        o.frontier_limited = rep.frontier_limited;
        o.checked = rep.checked;
        o.skipped = rep.skipped;
        if (rep.witness) {
            o.witness = wsr.render(*rep.witness);
            o.lhs_value = rep.lhs_value->render(wsr);
            o.rhs_value = rep.rhs_value->render(wsr);
        }
        return o;
    };

    model.add_native(
        {"rb.rota-baxter-eq", "P(a)P(b) = P(aP(b)) + P(P(a)b)", "rotabaxter", false,
         [to_outcome, N, L](const ModalityModel& m) {
             // extra word-length headroom: both sides append two letters
             Workspace& w2 = m.ws();
             ModulePtr symv = w2.sym_alg(m.slots()[0], N);
             auto s = rbops::make_rb_structure(w2, symv, symops::concat(w2, symv),
                                               BasisLabel::multiset({}), L + 2);
             LinearMap pp = compose(tensor_maps(w2, s.rb_op, s.rb_op), s.diamond);
             LinearMap r1 = compose(
                 compose(tensor_maps(w2, LinearMap::identity(s.carrier), s.rb_op), s.diamond),
                 s.rb_op);
             LinearMap r2 = compose(
                 compose(tensor_maps(w2, s.rb_op, LinearMap::identity(s.carrier)), s.diamond),
                 s.rb_op);
             return to_outcome(maps_equal(pp, add_maps(r1, r2), m.check_cap()), w2);
         }});
    model.add_native(
        {"rb.omega-mult", "(1 (x) diamond) ; omega = (omega (x) 1) ; diamond", "rotabaxter",
         false, [snap, to_outcome, L](const ModalityModel& m) {
             auto s = snap(m);
             Workspace& w2 = m.ws();
             ModulePtr shb = w2.word_alg(s.carrier, L);
             LinearMap om = rbops::omega(w2, shb, s.carrier, s.diamond, s.rb_op);
             LinearMap lhs = compose(
                 tensor_maps(w2, LinearMap::identity(shb), s.diamond), om);
             LinearMap rhs = compose(
                 tensor_maps(w2, om, LinearMap::identity(s.carrier)), s.diamond);
             return to_outcome(maps_equal(lhs, rhs, m.check_cap()), w2);
         }});
    model.add_native(
        {"rb.omega-deriving", "omega ; (1 (x) d) = (1 (x) 1 (x) d) ; (omega (x) 1)",
         "rotabaxter", false, [snap, to_outcome, L](const ModalityModel& m) {
             auto s = snap(m);
             Workspace& w2 = m.ws();
             ModulePtr shb = w2.word_alg(s.carrier, L);
             ModulePtr base = m.slots()[0];
             LinearMap dT = tensor_maps(w2, LinearMap::identity(s.sh),
                                        symops::derive(w2, s.algebra, base));
             LinearMap om = rbops::omega(w2, shb, s.carrier, s.diamond, s.rb_op);
             LinearMap lhs = compose(om, dT);
             LinearMap rhs = compose(tensor_maps(w2, LinearMap::identity(shb), dT),
                                     tensor_maps(w2, om, LinearMap::identity(base)));
             return to_outcome(maps_equal(lhs, rhs, m.check_cap()), w2);
         }});
    model.add_native(
        {"sh.cocommutativity", "deconcatenation vs sigma ; deconcatenation", "bialgebra",
         true, [snap, to_outcome](const ModalityModel& m) {
             auto s = snap(m);
             Workspace& w2 = m.ws();
             LinearMap dec = rbops::deconcat(w2, s.sh);
             LinearMap swapped = compose(dec, symmetry(w2, s.sh, s.sh));
             auto o = to_outcome(maps_equal(dec, swapped, m.check_cap()), w2);
             o.note = "the shuffle coalgebra comultiplication is not cocommutative";
             return o;
         }});
    model.add_native(
        {"rb.seely-obstruction", "Sh is not strong monoidal: dim RB(Sym(M (+) N)) vs "
                                 "dim RB(Sym M) (x) RB(Sym N)",
         "seely", true, [](const ModalityModel& m) {
             Workspace& w2 = m.ws();
             ModulePtr a = m.slots()[0], b = m.slots()[1];
             ModulePtr lhs = m.bang(w2.sum({a, b}));
             ModulePtr rhs = w2.tensor2(m.bang(a), m.bang(b));
             NativeOutcome o;
             o.equal = lhs->dim() == rhs->dim();
             o.checked = 1;
             o.note = "dim " + lhs->id() + " = " + std::to_string(lhs->dim()) + ", dim " +
                      rhs->id() + " = " + std::to_string(rhs->dim()) +
                      " at matched truncation";
             return o;
         }});

    model.add_note("bialgebra",
                   "no bialgebra structure registered; deconcatenation gives a "
                   "non-cocommutative comultiplication (witnessed), so the classification "
                   "is 'not established' rather than a mechanical non-existence proof");
    return model;
}

// ---------------------------------------------------------------------------
// Differential Rota-Baxter composite: the free Rota-Baxter algebra over the
// free differential algebra, classification-only.
// ---------------------------------------------------------------------------

struct RBDiffParams {
    int dim = 1;
    int dim2 = -1;
    int copies = 2;    // K of the inner Diff layer
    int degree = 2;    // inner Sym degree
    int word_len = 2;  // word length
    int check_degree = 5;
    std::uint64_t seed = 42;
};

/// Weight-0 differential on Sh(A) (x) A over a differential algebra (A, D):
/// D(w (x) b) = (w' (x) (a_n . b)) + (w (x) D b) for w = (a_1,...,a_n).
inline LinearMap rbdiff_differential(Workspace& ws, const ModulePtr& sh, const ModulePtr& alg,
                                     const LinearMap& alg_mult, const LinearMap& d_alg) {
    ModulePtr carrier = ws.tensor2(sh, alg);
    return LinearMap::from_partial(
        carrier, carrier,
        [carrier, alg_mult, d_alg](const BasisLabel& l) -> std::optional<Vector> {
            auto p = detail::split_label(l, {1, 1});
            const auto& letters = p[0].kids();
            Vector out(carrier);
            auto db = d_alg.apply(p[1]);
            if (!db) return std::nullopt;
            for (const auto& [bl, bc] : db->terms())
                out.add_term(BasisLabel::tensor2(p[0], bl), bc);
            if (!letters.empty()) {
                std::vector<BasisLabel> shorter(letters.begin(), letters.end() - 1);
                auto prod = alg_mult.apply(BasisLabel::tensor2(letters.back(), p[1]));
                if (!prod) return std::nullopt;
                BasisLabel w2 = BasisLabel::word(std::move(shorter));
                for (const auto& [al, ac] : prod->terms())
                    out.add_term(BasisLabel::tensor2(w2, al), ac);
            }
            return out;
        });
}

/// RB over Diff: a coalgebra modality that is neither comonoidal nor
/// differential (classification cites the Diff refutation for the latter).
inline ModalityModel make_rbdiff_model(std::shared_ptr<Workspace> ws, const RBDiffParams& p) {
    ModalityModel model("rb-diff", Orientation::Opposite, ws, p.seed);
    Workspace& w = *ws;
    const int N = p.degree, L = p.word_len, K = p.copies;

    auto sum_of = [&w, K](const ModulePtr& v) {
        return w.sum(std::vector<ModulePtr>(static_cast<std::size_t>(K), v));
    };
    auto diff_of = [&w, sum_of, N](const ModulePtr& v) { return w.sym_alg(sum_of(v), N); };
    auto bang = [&w, diff_of, L](ModulePtr v) {
        ModulePtr dv = diff_of(v);
        return w.tensor2(w.word_alg(dv, L), dv);
    };
    model.set_bang(bang, [&w, sum_of, diff_of, L](const LinearMap& f) {
        ModulePtr sd = sum_of(f.dom()), sc = sum_of(f.cod());
        LinearMap sum_f = LinearMap::from_partial(
            sd, sc, [f, sc](const BasisLabel& l) -> std::optional<Vector> {
                auto img = f.apply(l.payload());
                if (!img) return std::nullopt;
                Vector out(sc);
                for (const auto& [il, ic] : img->terms())
                    out.add_term(BasisLabel::copy(l.copy_tag(), il), ic);
                return out;
            });
        LinearMap df = symops::sym_lift(sum_f, diff_of(f.dom()), diff_of(f.cod()));
        LinearMap wf = rbops::word_lift(df, w.word_alg(diff_of(f.dom()), L),
                                        w.word_alg(diff_of(f.cod()), L));
        return tensor_maps(w, wf, df);
    });

    // differential Rota-Baxter structure on T' V = Sh(Diff V) (x) Diff V
    struct Carrier {
        rbops::RBStructure rb;
        LinearMap d_carrier;  // differential on the carrier
    };
    auto structure = [&w, sum_of, diff_of, L](const ModulePtr& v) {
        ModulePtr dv = diff_of(v);
        LinearMap mult = symops::concat(w, dv);
        auto rb = rbops::make_rb_structure(w, dv, mult, BasisLabel::multiset({}), L);
        LinearMap d_alg = diffops::differential(w, dv, sum_of(v));
        return Carrier{rb, rbdiff_differential(w, rb.sh, dv, mult, d_alg)};
    };

    auto reg = [&model](const std::string& name, BuildFn build) {
        model.register_symbol(name, standard_arity(name), standard_sig(name), std::move(build));
    };
    reg("delta", [structure, sum_of, N, L](const ModalityModel& m,
                                           const std::vector<ModulePtr>& a) {
        Workspace& w2 = m.ws();
        auto s = structure(a[0]);
        ModulePtr B = s.rb.carrier;
        // Diff-evaluation into the differential algebra B, then the RB fold
        ModulePtr sumB = sum_of(B);
        ModulePtr diffB = w2.sym_alg(sumB, N);
        LinearMap psiB = diffops::psi(w2, sumB, B, s.d_carrier);
        ModulePtr symB = w2.sym_alg(B, N);
        LinearMap eval_b =
            compose(symops::sym_lift(psiB, diffB, symB),
                    rbops::alg_eval(symB, B, s.rb.diamond,
                                    BasisLabel::tensor2(BasisLabel::word({}),
                                                        BasisLabel::multiset({}))));
        LinearMap sh_eval =
            rbops::word_lift(eval_b, w2.word_alg(diffB, L), w2.word_alg(B, L));
        LinearMap om = rbops::omega(w2, w2.word_alg(B, L), B, s.rb.diamond, s.rb.rb_op);
        return compose(tensor_maps(w2, sh_eval, eval_b), om);
    });
    reg("eps", [structure](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto s = structure(a[0]);
        ModulePtr carrier = s.rb.carrier;
        return LinearMap::from_images(a[0], carrier, [carrier](const BasisLabel& l) {
            return Vector::basis(
                carrier, BasisLabel::tensor2(
                             BasisLabel::word({}),
                             BasisLabel::multiset({BasisLabel::copy(0, l)})));
        });
    });
    reg("Delta", [structure](const ModalityModel&, const std::vector<ModulePtr>& a) {
        return structure(a[0]).rb.diamond;
    });
    reg("e", [structure](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        auto s = structure(a[0]);
        ModulePtr carrier = s.rb.carrier;
        return LinearMap::from_images(m.ws().unit(), carrier, [carrier](const BasisLabel&) {
            return Vector::basis(carrier, BasisLabel::tensor2(BasisLabel::word({}),
                                                              BasisLabel::multiset({})));
        });
    });

    ModulePtr M = w.base("M", p.dim);
    ModulePtr N2 = w.base("N", p.dim2 < 0 ? p.dim : p.dim2, {"p", "q", "r", "s"});
    model.set_slots({M, N2});
    model.set_check_cap(p.check_degree);

    model.add_native(
        {"rbdiff.PD", "P ; D = 1 (the Rota-Baxter operator sections the differential)",
         "rotabaxter", false, [structure](const ModalityModel& m) {
             auto s = structure(m.slots()[0]);
             auto rep = maps_equal(compose(s.rb.rb_op, s.d_carrier),
                                   LinearMap::identity(s.rb.carrier), m.check_cap());
             NativeOutcome o;
             o.equal = rep.equal;
             o.frontier_limited = rep.frontier_limited;
             o.checked = rep.checked;
             o.skipped = rep.skipped;
             if (rep.witness) {
                 o.witness = m.ws().render(*rep.witness);
                 o.lhs_value = rep.lhs_value->render(m.ws());
                 o.rhs_value = rep.rhs_value->render(m.ws());
             }
             return o;
         }});
    model.add_note("deriving",
                   "no deriving candidate registered; the chain rule fails as for the free "
                   "differential algebra (see the diff refutation witness)");
    model.add_note("bialgebra", "not comonoidal, as for the free Rota-Baxter modality");
    return model;
}

}  // namespace modality

#endif
