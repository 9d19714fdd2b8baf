#ifndef MODALITY_MODULE_HPP
#define MODALITY_MODULE_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "modality/basis.hpp"
#include "modality/rig.hpp"

namespace modality {

class FreeModule;
using ModulePtr = std::shared_ptr<const FreeModule>;

class Workspace;

enum class ModuleShape : std::uint8_t {
    Base,     // finitely many degree-0 generators
    UnitK,    // the monoidal unit, basis {Unit}
    Tensor,   // flat tensor of >= 2 atomic factors
    Sum,      // direct sum, labels Copy(i, _)
    SymAlg,   // multisets over base of graded weight <= cap
    WordAlg,  // words over base of length <= cap
};

/// A graded free module with a structured, deterministically enumerable
/// basis. Immutable; interned per Workspace so pointer equality decides
/// object equality. Enumeration is stratified by degree and computed lazily,
/// so large nested carriers cost nothing until a law actually walks them.
class FreeModule : public std::enable_shared_from_this<FreeModule> {
public:
    ModuleShape shape() const { return shape_; }
    const Rig& rig() const { return rig_; }
    const std::string& id() const { return id_; }
    int base_id() const { return base_id_; }
    int dim_base() const { return dim_; }
    const std::vector<ModulePtr>& parts() const { return parts_; }
    int cap() const { return cap_; }

    /// Nesting depth of modality carriers inside this object (drives the
    /// nested-truncation policy).
    int bang_depth() const { return bang_depth_; }

    /// Number of atomic tensor slots this module occupies inside a flat
    /// tensor label: 0 for K, #factors for Tensor, 1 otherwise.
    int factor_count() const {
        if (shape_ == ModuleShape::UnitK) return 0;
        if (shape_ == ModuleShape::Tensor) return static_cast<int>(parts_.size());
        return 1;
    }

    /// Largest degree a basis label of this module can have.
    int max_degree() const { return max_degree_; }

    bool contains(const BasisLabel& l) const {
        if (l.degree() > max_degree_) return false;
        switch (shape_) {
            case ModuleShape::Base:
                return l.kind() == LabelKind::Gen && l.module_id() == base_id_ &&
                       l.gen_index() >= 0 && l.gen_index() < dim_;
            case ModuleShape::UnitK:
                return l.kind() == LabelKind::Unit;
            case ModuleShape::Tensor: {
                auto at = l.atoms();
                if (static_cast<int>(at.size()) != factor_count()) return false;
                if (l.kind() != LabelKind::Tensor) return false;
                for (std::size_t i = 0; i < at.size(); ++i)
                    if (!parts_[i]->contains(at[i])) return false;
                return true;
            }
            case ModuleShape::Sum: {
                if (l.kind() != LabelKind::Copy) return false;
                int t = l.copy_tag();
                if (t < 0 || t >= static_cast<int>(parts_.size())) return false;
                return parts_[t]->contains(l.payload());
            }
            case ModuleShape::SymAlg: {
                if (l.kind() != LabelKind::Multiset) return false;
                if (static_cast<int>(l.kids().size()) > cap_) return false;
                for (const auto& k : l.kids())
                    if (!parts_[0]->contains(k)) return false;
                return true;
            }
            case ModuleShape::WordAlg: {
                if (l.kind() != LabelKind::Word) return false;
                if (static_cast<int>(l.kids().size()) > cap_) return false;
                for (const auto& k : l.kids())
                    if (!parts_[0]->contains(k)) return false;
                return true;
            }
        }
        return false;
    }

    /// All basis labels of exactly the given degree, canonical order.
    const std::vector<BasisLabel>& stratum(int degree) const;

    /// Total dimension (forces full enumeration).
    std::size_t dim() const {
        std::size_t n = 0;
        for (int d = 0; d <= max_degree_; ++d) n += stratum(d).size();
        return n;
    }

    std::vector<BasisLabel> all_labels(int degree_bound = -1) const {
        int hi = degree_bound < 0 ? max_degree_ : std::min(degree_bound, max_degree_);
        std::vector<BasisLabel> out;
        for (int d = 0; d <= hi; ++d) {
            const auto& s = stratum(d);
            out.insert(out.end(), s.begin(), s.end());
        }
        return out;
    }

private:
    friend class Workspace;
    FreeModule() = default;

    ModuleShape shape_ = ModuleShape::UnitK;
    Rig rig_;
    std::string id_;
    int base_id_ = -1;
    int dim_ = 0;
    std::vector<ModulePtr> parts_;
    int cap_ = 0;
    int bang_depth_ = 0;
    int max_degree_ = 0;

    mutable std::vector<std::optional<std::vector<BasisLabel>>> strata_;
};

/// Interning registry for modules plus the generator-name table used when
/// rendering witnesses. One Workspace per model build / CLI run.
class Workspace {
public:
    explicit Workspace(Rig rig) : rig_(rig) {}

    const Rig& rig() const { return rig_; }

    /// A base module with `dim` degree-0 generators. Names default to
    /// x, y, z, w, then x4, x5, ...
    ModulePtr base(const std::string& name, int dim,
                   std::vector<std::string> gen_names = {}) {
        auto it = by_id_.find(name);
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::Base;
        m->rig_ = rig_;
        m->id_ = name;
        m->base_id_ = next_base_id_++;
        m->dim_ = dim;
        m->max_degree_ = 0;
        if (gen_names.empty()) {
            static const char* defaults[] = {"x", "y", "z", "w"};
            for (int i = 0; i < dim; ++i)
                gen_names.push_back(i < 4 ? defaults[i] : "x" + std::to_string(i));
        }
        gen_names_[m->base_id_] = gen_names;
        return intern(m);
    }

    /// Base module with word-style generator names a, b, c, ...
    ModulePtr base_letters(const std::string& name, int dim) {
        std::vector<std::string> names;
        for (int i = 0; i < dim; ++i)
            names.push_back(i < 8 ? std::string(1, static_cast<char>('a' + i))
                                  : "a" + std::to_string(i));
        return base(name, dim, std::move(names));
    }

    ModulePtr unit() {
        auto it = by_id_.find("K");
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::UnitK;
        m->rig_ = rig_;
        m->id_ = "K";
        m->max_degree_ = 0;
        return intern(m);
    }

    ModulePtr zero() { return base("O", 0); }

    ModulePtr tensor(const std::vector<ModulePtr>& factors) {
        std::vector<ModulePtr> flat;
        for (const auto& f : factors) {
            check_rig(f);
            if (f->shape() == ModuleShape::UnitK) continue;
            if (f->shape() == ModuleShape::Tensor)
                flat.insert(flat.end(), f->parts().begin(), f->parts().end());
            else
                flat.push_back(f);
        }
        if (flat.empty()) return unit();
        if (flat.size() == 1) return flat.front();
        std::string id = "ts(";
        for (std::size_t i = 0; i < flat.size(); ++i) {
            if (i) id += ",";
            id += flat[i]->id();
        }
        id += ")";
        auto it = by_id_.find(id);
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::Tensor;
        m->rig_ = rig_;
        m->id_ = id;
        m->parts_ = flat;
        int md = 0, bd = 0;
        for (const auto& f : flat) {
            md += f->max_degree();
            bd = std::max(bd, f->bang_depth());
        }
        m->max_degree_ = md;
        m->bang_depth_ = bd;
        return intern(m);
    }

    ModulePtr tensor2(const ModulePtr& a, const ModulePtr& b) { return tensor({a, b}); }

    ModulePtr sum(const std::vector<ModulePtr>& components) {
        std::string id = "sum(";
        int md = 0, bd = 0;
        for (std::size_t i = 0; i < components.size(); ++i) {
            check_rig(components[i]);
            if (i) id += ",";
            id += components[i]->id();
            md = std::max(md, components[i]->max_degree());
            bd = std::max(bd, components[i]->bang_depth());
        }
        id += ")";
        auto it = by_id_.find(id);
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::Sum;
        m->rig_ = rig_;
        m->id_ = id;
        m->parts_ = components;
        m->max_degree_ = md;
        m->bang_depth_ = bd;
        return intern(m);
    }

    /// Sym_{<=cap}: multisets of at most cap entries over `base`.
    ModulePtr sym_alg(const ModulePtr& base, int cap, int bang_depth_bump = 1) {
        check_rig(base);
        std::string id = "sym" + std::to_string(cap) + "(" + base->id() + ")";
        auto it = by_id_.find(id);
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::SymAlg;
        m->rig_ = rig_;
        m->id_ = id;
        m->parts_ = {base};
        m->cap_ = cap;
        m->max_degree_ = cap * (1 + base->max_degree());
        m->bang_depth_ = base->bang_depth() + bang_depth_bump;
        return intern(m);
    }

    /// Sh_{<=cap}: words over `base` of length at most cap.
    ModulePtr word_alg(const ModulePtr& base, int cap, int bang_depth_bump = 1) {
        check_rig(base);
        std::string id = "sh" + std::to_string(cap) + "(" + base->id() + ")";
        auto it = by_id_.find(id);
        if (it != by_id_.end()) return it->second;
        auto m = std::shared_ptr<FreeModule>(new FreeModule());
        m->shape_ = ModuleShape::WordAlg;
        m->rig_ = rig_;
        m->id_ = id;
        m->parts_ = {base};
        m->cap_ = cap;
        m->max_degree_ = cap * (1 + base->max_degree());
        m->bang_depth_ = base->bang_depth() + bang_depth_bump;
        return intern(m);
    }

    ModulePtr lookup(const std::string& id) const {
        auto it = by_id_.find(id);
        return it == by_id_.end() ? nullptr : it->second;
    }

    std::string gen_name(std::int32_t base_id, std::int32_t index) const {
        auto it = gen_names_.find(base_id);
        if (it != gen_names_.end() && index >= 0 &&
            index < static_cast<std::int32_t>(it->second.size()))
            return it->second[index];
        return "g" + std::to_string(base_id) + "_" + std::to_string(index);
    }

    std::string render(const BasisLabel& l) const {
        return l.render([this](std::int32_t m, std::int32_t i) { return gen_name(m, i); });
    }

private:
    ModulePtr intern(std::shared_ptr<FreeModule> m) {
        by_id_[m->id_] = m;
        return m;
    }
    void check_rig(const ModulePtr& m) const {
        if (m->rig() != rig_) throw RigMismatchError();
    }

    Rig rig_;
    int next_base_id_ = 0;
    std::map<std::string, ModulePtr> by_id_;
    std::map<std::int32_t, std::vector<std::string>> gen_names_;
};

namespace detail {

// Multisets over `base` of graded degree exactly `d` (entry count plus entry
// degrees) and at most `cap` entries, drawn in canonical order starting at
// stratum/index position (lo_deg, lo_idx).
inline void enum_multisets(const FreeModule& base, int d, int cap, int lo_deg,
                           std::size_t lo_idx, std::vector<BasisLabel>& cur,
                           std::vector<BasisLabel>& out) {
    if (d == 0) {
        out.push_back(BasisLabel::multiset(cur));
        return;
    }
    if (cap == 0) return;
    // next entry contributes 1 + deg(entry) to the degree
    for (int ed = lo_deg; ed + 1 <= d && ed <= base.max_degree(); ++ed) {
        const auto& s = base.stratum(ed);
        std::size_t start = (ed == lo_deg) ? lo_idx : 0;
        for (std::size_t i = start; i < s.size(); ++i) {
            cur.push_back(s[i]);
            enum_multisets(base, d - 1 - ed, cap - 1, ed, i, cur, out);
            cur.pop_back();
        }
    }
}

// Words over `base` of degree exactly d and length <= cap.
inline void enum_words(const FreeModule& base, int d, int cap,
                       std::vector<BasisLabel>& cur, std::vector<BasisLabel>& out) {
    if (d == 0) {
        out.push_back(BasisLabel::word(cur));
        return;
    }
    if (cap == 0) return;
    for (int ed = 0; ed + 1 <= d && ed <= base.max_degree(); ++ed) {
        for (const auto& e : base.stratum(ed)) {
            cur.push_back(e);
            enum_words(base, d - 1 - ed, cap - 1, cur, out);
            cur.pop_back();
        }
    }
}

// Tensor strata: distribute degree d over the factors.
inline void enum_tensor(const std::vector<ModulePtr>& parts, std::size_t i, int d,
                        std::vector<BasisLabel>& cur, std::vector<BasisLabel>& out) {
    if (i == parts.size()) {
        if (d == 0) out.push_back(BasisLabel::tensor(cur));
        return;
    }
    for (int ed = 0; ed <= std::min(d, parts[i]->max_degree()); ++ed) {
        for (const auto& e : parts[i]->stratum(ed)) {
            cur.push_back(e);
            enum_tensor(parts, i + 1, d - ed, cur, out);
            cur.pop_back();
        }
    }
}

}  // namespace detail

inline const std::vector<BasisLabel>& FreeModule::stratum(int degree) const {
    static const std::vector<BasisLabel> kEmpty;
    if (degree < 0 || degree > max_degree_) return kEmpty;
    if (strata_.size() <= static_cast<std::size_t>(degree))
        strata_.resize(static_cast<std::size_t>(max_degree_) + 1);
    auto& slot = strata_[degree];
    if (slot) return *slot;

    std::vector<BasisLabel> out;
    std::vector<BasisLabel> cur;
    switch (shape_) {
        case ModuleShape::Base:
            if (degree == 0)
                for (int i = 0; i < dim_; ++i) out.push_back(BasisLabel::gen(base_id_, i));
            break;
        case ModuleShape::UnitK:
            if (degree == 0) out.push_back(BasisLabel::unit());
            break;
        case ModuleShape::Tensor:
            detail::enum_tensor(parts_, 0, degree, cur, out);
            break;
        case ModuleShape::Sum:
            for (std::size_t i = 0; i < parts_.size(); ++i)
                for (const auto& l : parts_[i]->stratum(degree))
                    out.push_back(BasisLabel::copy(static_cast<int>(i), l));
            break;
        case ModuleShape::SymAlg:
            detail::enum_multisets(*parts_[0], degree, cap_, 0, 0, cur, out);
            break;
        case ModuleShape::WordAlg:
            detail::enum_words(*parts_[0], degree, cap_, cur, out);
            break;
    }
    std::sort(out.begin(), out.end());
    slot = std::move(out);
    return *slot;
}

/// A finitely supported exact-coefficient element of a free module.
/// Zero coefficients are never stored.
class Vector {
public:
    Vector() = default;
    explicit Vector(ModulePtr mod) : mod_(std::move(mod)) {}

    static Vector basis(ModulePtr mod, const BasisLabel& l) {
        Vector v(std::move(mod));
        v.terms_.emplace(l, Scalar::one(v.mod_->rig()));
        return v;
    }

    const ModulePtr& module() const { return mod_; }
    const std::map<BasisLabel, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const BasisLabel& l, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(l, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Vector& operator+=(const Vector& o) {
        for (const auto& [l, c] : o.terms_) add_term(l, c);
        return *this;
    }

    Vector scaled(const Scalar& s) const {
        Vector v(mod_);
        if (s.is_zero()) return v;
        for (const auto& [l, c] : terms_) v.add_term(l, c * s);
        return v;
    }

    Scalar coeff(const BasisLabel& l) const {
        auto it = terms_.find(l);
        return it == terms_.end() ? Scalar::zero(mod_->rig()) : it->second;
    }

    friend bool operator==(const Vector& a, const Vector& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Vector& a, const Vector& b) { return !(a == b); }

    std::string render(const Workspace& ws) const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [l, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            if (!c.is_one()) s += c.render() + "·";  // ·
            s += ws.render(l);
        }
        return s;
    }

private:
    ModulePtr mod_;
    std::map<BasisLabel, Scalar> terms_;
};

}  // namespace modality

#endif
