#ifndef MODALITY_LINMAP_HPP
#define MODALITY_LINMAP_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modality/module.hpp"

namespace modality {

struct ObjectMismatchError : Error {
    explicit ObjectMismatchError(const std::string& detail)
        : Error("object mismatch: " + detail) {}
};

/// An exact linear map between free modules, specified on basis labels and
/// evaluated lazily with a shared memo table.
///
/// Truncation frontier: apply() returns nullopt on a label whose true image
/// cannot be represented inside the codomain carrier. Builders compute the
/// untruncated image and the wrapper checks membership of its support, so the
/// exactness mask is per label and propagates through compose/tensor/sum.
class LinearMap {
public:
    using RawFn = std::function<std::optional<Vector>(const BasisLabel&)>;

    LinearMap() = default;

    const ModulePtr& dom() const { return state_->dom; }
    const ModulePtr& cod() const { return state_->cod; }
    bool valid() const { return static_cast<bool>(state_); }

    /// Builder for maps given by an untruncated image formula. The image's
    /// support is membership-checked against the codomain; any escape marks
    /// the label as beyond the frontier.
    static LinearMap from_images(ModulePtr dom, ModulePtr cod,
                                 std::function<Vector(const BasisLabel&)> fn) {
        return from_partial(std::move(dom), std::move(cod),
                            [fn = std::move(fn)](const BasisLabel& l) {
                                return std::optional<Vector>(fn(l));
                            });
    }

    /// Same, but the formula may itself report frontier exhaustion.
    static LinearMap from_partial(ModulePtr dom, ModulePtr cod, RawFn fn) {
        auto st = std::make_shared<State>();
        st->dom = std::move(dom);
        st->cod = std::move(cod);
        ModulePtr c = st->cod;
        st->fn = [fn = std::move(fn), c](const BasisLabel& l) -> std::optional<Vector> {
            auto v = fn(l);
            if (!v) return std::nullopt;
            for (const auto& [lab, coef] : v->terms())
                if (!c->contains(lab)) return std::nullopt;
            return v;
        };
        return LinearMap(std::move(st));
    }

    static LinearMap identity(ModulePtr m) {
        auto st = std::make_shared<State>();
        st->dom = m;
        st->cod = m;
        st->fn = [m](const BasisLabel& l) {
            return std::optional<Vector>(Vector::basis(m, l));
        };
        return LinearMap(std::move(st));
    }

    static LinearMap zero_map(ModulePtr dom, ModulePtr cod) {
        auto st = std::make_shared<State>();
        st->dom = std::move(dom);
        st->cod = cod;
        st->fn = [cod](const BasisLabel&) { return std::optional<Vector>(Vector(cod)); };
        return LinearMap(std::move(st));
    }

    std::optional<Vector> apply(const BasisLabel& l) const {
        auto& cache = state_->cache;
        auto it = cache.find(l);
        if (it != cache.end()) return it->second;
        auto v = state_->fn(l);
        cache.emplace(l, v);
        return v;
    }

    /// Linear extension; nullopt if any supporting label is beyond frontier.
    std::optional<Vector> apply_vec(const Vector& v) const {
        Vector out(cod());
        for (const auto& [l, c] : v.terms()) {
            auto img = apply(l);
            if (!img) return std::nullopt;
            for (const auto& [ol, oc] : img->terms()) out.add_term(ol, oc * c);
        }
        return out;
    }

    Vector apply_strict(const BasisLabel& l) const {
        auto v = apply(l);
        if (!v) throw TruncationError();
        return *v;
    }

    bool exact_at(const BasisLabel& l) const { return apply(l).has_value(); }

    /// Largest D such that every domain label of degree <= D is exact
    /// (-1 if even degree 0 is not).
    int frontier_degree() const {
        int best = -1;
        for (int d = 0; d <= dom()->max_degree(); ++d) {
            for (const auto& l : dom()->stratum(d))
                if (!exact_at(l)) return best;
            best = d;
        }
        return best;
    }

private:
    struct State {
        ModulePtr dom, cod;
        RawFn fn;
        std::map<BasisLabel, std::optional<Vector>> cache;
    };
    explicit LinearMap(std::shared_ptr<State> st) : state_(std::move(st)) {}
    std::shared_ptr<State> state_;
};

/// Diagrammatic composite: first f, then g.
inline LinearMap compose(const LinearMap& f, const LinearMap& g) {
    if (f.cod() != g.dom())
        throw ObjectMismatchError("compose " + f.cod()->id() + " vs " + g.dom()->id());
    return LinearMap::from_partial(
        f.dom(), g.cod(), [f, g](const BasisLabel& l) -> std::optional<Vector> {
            auto mid = f.apply(l);
            if (!mid) return std::nullopt;
            return g.apply_vec(*mid);
        });
}

inline LinearMap add_maps(const LinearMap& f, const LinearMap& g) {
    if (f.dom() != g.dom() || f.cod() != g.cod())
        throw ObjectMismatchError("add_maps needs parallel maps");
    return LinearMap::from_partial(
        f.dom(), f.cod(), [f, g](const BasisLabel& l) -> std::optional<Vector> {
            auto a = f.apply(l);
            auto b = g.apply(l);
            if (!a || !b) return std::nullopt;
            Vector out = *a;
            out += *b;
            return out;
        });
}

inline LinearMap scale_map(const Scalar& s, const LinearMap& f) {
    return LinearMap::from_partial(
        f.dom(), f.cod(), [s, f](const BasisLabel& l) -> std::optional<Vector> {
            auto v = f.apply(l);
            if (!v) return std::nullopt;
            return v->scaled(s);
        });
}

namespace detail {

// Split a flat tensor label into per-factor sublabels by factor counts.
inline std::vector<BasisLabel> split_label(const BasisLabel& l,
                                           const std::vector<int>& counts) {
    auto at = l.atoms();
    std::vector<BasisLabel> parts;
    std::size_t pos = 0;
    for (int c : counts) {
        if (c == 0) {
            parts.push_back(BasisLabel::unit());
        } else if (c == 1) {
            parts.push_back(at.at(pos));
            pos += 1;
        } else {
            std::vector<BasisLabel> sub(at.begin() + pos, at.begin() + pos + c);
            parts.push_back(BasisLabel::tensor(sub));
            pos += c;
        }
    }
    return parts;
}

}  // namespace detail

/// Tensor product of maps, acting factorwise on flat tensor labels with
/// coefficient products (bilinear over sums of maps by construction).
inline LinearMap tensor_maps(Workspace& ws, const std::vector<LinearMap>& fs) {
    std::vector<ModulePtr> doms, cods;
    std::vector<int> counts;
    for (const auto& f : fs) {
        doms.push_back(f.dom());
        cods.push_back(f.cod());
        counts.push_back(f.dom()->factor_count());
    }
    ModulePtr dom = ws.tensor(doms);
    ModulePtr cod = ws.tensor(cods);
    return LinearMap::from_partial(
        dom, cod, [fs, counts, cod](const BasisLabel& l) -> std::optional<Vector> {
            auto parts = detail::split_label(l, counts);
            Vector acc = Vector::basis(cod, BasisLabel::unit());
            // running tensor product of the factor images
            for (std::size_t i = 0; i < fs.size(); ++i) {
                auto img = fs[i].apply(parts[i]);
                if (!img) return std::nullopt;
                Vector next(cod);
                for (const auto& [al, ac] : acc.terms())
                    for (const auto& [bl, bc] : img->terms())
                        next.add_term(BasisLabel::tensor2(al, bl), ac * bc);
                acc = std::move(next);
                if (acc.is_zero()) break;
            }
            return acc;
        });
}

inline LinearMap tensor_maps(Workspace& ws, const LinearMap& f, const LinearMap& g) {
    return tensor_maps(ws, std::vector<LinearMap>{f, g});
}

/// sigma_{A,B}: A (x) B -> B (x) A.
inline LinearMap symmetry(Workspace& ws, const ModulePtr& a, const ModulePtr& b) {
    ModulePtr dom = ws.tensor2(a, b);
    ModulePtr cod = ws.tensor2(b, a);
    std::vector<int> counts{a->factor_count(), b->factor_count()};
    return LinearMap::from_images(dom, cod, [counts, cod](const BasisLabel& l) {
        auto parts = detail::split_label(l, counts);
        return Vector::basis(cod, BasisLabel::tensor2(parts[1], parts[0]));
    });
}

inline LinearMap injection(Workspace& /*ws*/, const ModulePtr& sum, int i) {
    if (sum->shape() != ModuleShape::Sum) throw ObjectMismatchError("injection into non-sum");
    ModulePtr comp = sum->parts().at(static_cast<std::size_t>(i));
    return LinearMap::from_images(comp, sum, [sum, i](const BasisLabel& l) {
        return Vector::basis(sum, BasisLabel::copy(i, l));
    });
}

inline LinearMap projection(Workspace& /*ws*/, const ModulePtr& sum, int i) {
    if (sum->shape() != ModuleShape::Sum) throw ObjectMismatchError("projection from non-sum");
    ModulePtr comp = sum->parts().at(static_cast<std::size_t>(i));
    return LinearMap::from_images(sum, comp, [comp, i](const BasisLabel& l) {
        Vector v(comp);
        if (l.copy_tag() == i) v.add_term(l.payload(), Scalar::one(comp->rig()));
        return v;
    });
}

/// Outcome of an exhaustive basis comparison within the truncation frontier.
struct EqReport {
    bool equal = true;            // no disagreement among checked labels
    bool frontier_limited = false;  // some labels could not be checked
    std::size_t checked = 0;
    std::size_t skipped = 0;
    int frontier_degree = -1;  // largest degree fully checked
    std::optional<BasisLabel> witness;
    std::optional<Vector> lhs_value, rhs_value;
};

/// Compares f and g on every domain basis label of degree <= degree_bound
/// (whole carrier if negative), in canonical order. Labels beyond either
/// frontier are skipped and reported, never silently passed.
inline EqReport maps_equal(const LinearMap& f, const LinearMap& g, int degree_bound = -1) {
    if (f.dom() != g.dom() || f.cod() != g.cod())
        throw ObjectMismatchError("maps_equal needs parallel maps (" + f.dom()->id() +
                                  "->" + f.cod()->id() + " vs " + g.dom()->id() + "->" +
                                  g.cod()->id() + ")");
    EqReport rep;
    const auto& dom = *f.dom();
    int hi = degree_bound < 0 ? dom.max_degree() : std::min(degree_bound, dom.max_degree());
    for (int d = 0; d <= hi; ++d) {
        bool full_degree = true;
        for (const auto& l : dom.stratum(d)) {
            auto a = f.apply(l);
            auto b = g.apply(l);
            if (!a || !b) {
                rep.skipped += 1;
                rep.frontier_limited = true;
                full_degree = false;
                continue;
            }
            rep.checked += 1;
            if (rep.equal && *a != *b) {
                rep.equal = false;
                rep.witness = l;
                rep.lhs_value = *a;
                rep.rhs_value = *b;
            }
        }
        if (full_degree && rep.frontier_degree == d - 1) rep.frontier_degree = d;
    }
    return rep;
}

/// Spec-strict variant: refuses to judge if any label within the bound lies
/// beyond either frontier.
inline EqReport maps_equal_strict(const LinearMap& f, const LinearMap& g, int degree_bound) {
    EqReport rep = maps_equal(f, g, degree_bound);
    if (rep.frontier_limited) throw TruncationError();
    return rep;
}

}  // namespace modality

#endif
