#ifndef MODALITY_MODEL_HPP
#define MODALITY_MODEL_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "modality/expr.hpp"
#include "modality/linmap.hpp"

namespace modality {

struct TypeError : Error {
    explicit TypeError(const std::string& what) : Error("type error: " + what) {}
};

/// How the registered structural maps realize the coalgebra-orientation
/// diagrams: Direct reads them as written, Opposite reverses composition
/// (the co-differential reading used by every module-category model here).
enum class Orientation : std::uint8_t { Direct, Opposite };

/// An evaluated arrow expression: formal signature plus the underlying
/// linear map (which runs backwards for Opposite models).
struct FormalMap {
    ModulePtr fdom, fcod;
    LinearMap under;
};

class ModalityModel;

using SigFn = std::function<std::pair<ModulePtr, ModulePtr>(const ModalityModel&,
                                                            const std::vector<ModulePtr>&)>;
using BuildFn =
    std::function<LinearMap(const ModalityModel&, const std::vector<ModulePtr>&)>;

struct SymbolDef {
    int arity = 1;
    SigFn sig;
    BuildFn build;
};

/// Pass/fail record produced by a native (non-DSL) law check.
struct NativeOutcome {
    bool applicable = true;
    bool equal = true;
    bool frontier_limited = false;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    std::string witness, lhs_value, rhs_value, note;
};

struct NativeLaw {
    std::string name;
    std::string anchor;
    std::string suite;
    bool expect_fail = false;  // a separating counterexample rather than a law
    std::function<NativeOutcome(const ModalityModel&)> run;
};

/// A registry of one model's objects, arrow lifting, and structural maps,
/// in a declared category orientation. Immutable once built; evaluation
/// memoizes structural families per base object.
class ModalityModel {
public:
    ModalityModel(std::string name, Orientation orient, std::shared_ptr<Workspace> ws,
                  std::uint64_t seed)
        : name_(std::move(name)), orient_(orient), ws_(std::move(ws)), seed_(seed) {}

    const std::string& name() const { return name_; }
    Orientation orientation() const { return orient_; }
    const Rig& rig() const { return ws_->rig(); }
    Workspace& ws() const { return *ws_; }
    std::shared_ptr<Workspace> ws_ptr() const { return ws_; }
    std::uint64_t seed() const { return seed_; }

    void set_bang(std::function<ModulePtr(ModulePtr)> obj,
                  std::function<LinearMap(const LinearMap&)> arrow) {
        bang_obj_ = std::move(obj);
        bang_arrow_ = std::move(arrow);
    }

    ModulePtr bang(const ModulePtr& m) const { return bang_obj_(m); }
    LinearMap bang_arrow(const LinearMap& f) const { return bang_arrow_(f); }

    void register_symbol(const std::string& name, int arity, SigFn sig, BuildFn build) {
        symbols_[name] = SymbolDef{arity, std::move(sig), std::move(build)};
    }

    bool has_symbol(const std::string& name) const { return symbols_.count(name) > 0; }

    std::vector<std::string> registered_symbols() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : symbols_) out.push_back(k);
        return out;
    }

    /// The base objects laws quantify over (slot A, slot B, ...).
    void set_slots(std::vector<ModulePtr> slots) { slots_ = std::move(slots); }
    const std::vector<ModulePtr>& slots() const { return slots_; }

    void add_native(NativeLaw law) { natives_.push_back(std::move(law)); }
    const std::vector<NativeLaw>& natives() const { return natives_; }

    void add_note(const std::string& key, const std::string& text) { notes_[key] = text; }
    const std::map<std::string, std::string>& notes() const { return notes_; }

    /// Degree bound for exhaustive checks on this model's carriers
    /// (-1 = enumerate whole carriers; set where nested carriers explode).
    void set_check_cap(int cap) { check_cap_ = cap; }
    int check_cap() const { return check_cap_; }

    // -- object resolution ---------------------------------------------------

    ModulePtr resolve(const ObjPtr& o, const std::vector<ModulePtr>& slots) const {
        switch (o->kind) {
            case ObjExpr::Kind::Slot: {
                if (o->slot >= static_cast<int>(slots.size()))
                    throw TypeError("missing base object for slot " +
                                    std::string(1, static_cast<char>('A' + o->slot)));
                return slots[static_cast<std::size_t>(o->slot)];
            }
            case ObjExpr::Kind::Unit: return ws_->unit();
            case ObjExpr::Kind::Zero: return ws_->zero();
            case ObjExpr::Kind::Bang: return bang(resolve(o->kids[0], slots));
            case ObjExpr::Kind::Tens: {
                std::vector<ModulePtr> fs;
                for (const auto& k : o->kids) fs.push_back(resolve(k, slots));
                return ws_->tensor(fs);
            }
            case ObjExpr::Kind::Sum:
                return ws_->sum({resolve(o->kids[0], slots), resolve(o->kids[1], slots)});
        }
        throw TypeError("bad object expression");
    }

    // -- typechecking ----------------------------------------------------------

    /// Resolves the formal signature, raising TypeError at the first
    /// ill-typed node (named by its textual form).
    std::pair<ModulePtr, ModulePtr> typecheck(const ArrowPtr& a,
                                              const std::vector<ModulePtr>& slots) const {
        switch (a->kind) {
            case ArrowExpr::Kind::Id: {
                auto m = resolve(a->objs[0], slots);
                return {m, m};
            }
            case ArrowExpr::Kind::Zero:
                return {resolve(a->objs[0], slots), resolve(a->objs[1], slots)};
            case ArrowExpr::Kind::Sym: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                return {ws_->tensor2(x, y), ws_->tensor2(y, x)};
            }
            case ArrowExpr::Kind::Inj: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                auto s = ws_->sum({x, y});
                return {a->index == 0 ? x : y, s};
            }
            case ArrowExpr::Kind::Proj: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                auto s = ws_->sum({x, y});
                return {s, a->index == 0 ? x : y};
            }
            case ArrowExpr::Kind::Probe:
                return {resolve(a->objs[0], slots), resolve(a->objs[1], slots)};
            case ArrowExpr::Kind::Struct: {
                auto it = symbols_.find(a->symbol);
                if (it == symbols_.end())
                    throw TypeError("unregistered symbol '" + a->symbol + "' in model " + name_);
                if (static_cast<int>(a->objs.size()) != it->second.arity)
                    throw TypeError("symbol '" + a->symbol + "' expects " +
                                    std::to_string(it->second.arity) + " object argument(s)");
                std::vector<ModulePtr> args;
                for (const auto& o : a->objs) args.push_back(resolve(o, slots));
                return it->second.sig(*this, args);
            }
            case ArrowExpr::Kind::Lift: {
                auto [d, c] = typecheck(a->kids[0], slots);
                return {bang(d), bang(c)};
            }
            case ArrowExpr::Kind::Compose: {
                auto [d, c] = typecheck(a->kids[0], slots);
                for (std::size_t i = 1; i < a->kids.size(); ++i) {
                    auto [d2, c2] = typecheck(a->kids[i], slots);
                    if (c != d2)
                        throw TypeError("compose mismatch at " + to_text(a->kids[i]) + ": " +
                                        c->id() + " vs " + d2->id());
                    c = c2;
                }
                return {d, c};
            }
            case ArrowExpr::Kind::Tensor: {
                std::vector<ModulePtr> ds, cs;
                for (const auto& k : a->kids) {
                    auto [d, c] = typecheck(k, slots);
                    ds.push_back(d);
                    cs.push_back(c);
                }
                return {ws_->tensor(ds), ws_->tensor(cs)};
            }
            case ArrowExpr::Kind::Sum: {
                auto [d, c] = typecheck(a->kids[0], slots);
                for (std::size_t i = 1; i < a->kids.size(); ++i) {
                    auto [d2, c2] = typecheck(a->kids[i], slots);
                    if (d != d2 || c != c2)
                        throw TypeError("sum of non-parallel maps at " + to_text(a->kids[i]));
                }
                return {d, c};
            }
        }
        throw TypeError("bad arrow expression");
    }

    // -- evaluation --------------------------------------------------------

    /// Underlying domain/codomain of a formal signature under this
    /// orientation.
    std::pair<ModulePtr, ModulePtr> underlying_sig(const ModulePtr& fdom,
                                                   const ModulePtr& fcod) const {
        return orient_ == Orientation::Direct ? std::make_pair(fdom, fcod)
                                              : std::make_pair(fcod, fdom);
    }

    FormalMap evaluate(const ArrowPtr& a, const std::vector<ModulePtr>& slots) const {
        switch (a->kind) {
            case ArrowExpr::Kind::Id: {
                auto m = resolve(a->objs[0], slots);
                return {m, m, LinearMap::identity(m)};
            }
            case ArrowExpr::Kind::Zero: {
                auto d = resolve(a->objs[0], slots);
                auto c = resolve(a->objs[1], slots);
                auto [ud, uc] = underlying_sig(d, c);
                return {d, c, LinearMap::zero_map(ud, uc)};
            }
            case ArrowExpr::Kind::Sym: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                LinearMap u = orient_ == Orientation::Direct ? symmetry(*ws_, x, y)
                                                             : symmetry(*ws_, y, x);
                return {ws_->tensor2(x, y), ws_->tensor2(y, x), u};
            }
            case ArrowExpr::Kind::Inj: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                auto s = ws_->sum({x, y});
                LinearMap u = orient_ == Orientation::Direct ? injection(*ws_, s, a->index)
                                                             : projection(*ws_, s, a->index);
                return {a->index == 0 ? x : y, s, u};
            }
            case ArrowExpr::Kind::Proj: {
                auto x = resolve(a->objs[0], slots);
                auto y = resolve(a->objs[1], slots);
                auto s = ws_->sum({x, y});
                LinearMap u = orient_ == Orientation::Direct ? projection(*ws_, s, a->index)
                                                             : injection(*ws_, s, a->index);
                return {s, a->index == 0 ? x : y, u};
            }
            case ArrowExpr::Kind::Probe: {
                auto d = resolve(a->objs[0], slots);
                auto c = resolve(a->objs[1], slots);
                const auto& pool = probe_pool(d, c);
                return {d, c, pool.at(static_cast<std::size_t>(a->index) % pool.size())};
            }
            case ArrowExpr::Kind::Struct: {
                typecheck(a, slots);  // arity/registration errors first
                std::vector<ModulePtr> args;
                for (const auto& o : a->objs) args.push_back(resolve(o, slots));
                return structural(a->symbol, args);
            }
            case ArrowExpr::Kind::Lift: {
                FormalMap f = evaluate(a->kids[0], slots);
                return {bang(f.fdom), bang(f.fcod), bang_arrow_(f.under)};
            }
            case ArrowExpr::Kind::Compose: {
                FormalMap acc = evaluate(a->kids[0], slots);
                for (std::size_t i = 1; i < a->kids.size(); ++i)
                    acc = fcompose(acc, evaluate(a->kids[i], slots));
                return acc;
            }
            case ArrowExpr::Kind::Tensor: {
                std::vector<FormalMap> fs;
                for (const auto& k : a->kids) fs.push_back(evaluate(k, slots));
                return ftensor(fs);
            }
            case ArrowExpr::Kind::Sum: {
                FormalMap acc = evaluate(a->kids[0], slots);
                for (std::size_t i = 1; i < a->kids.size(); ++i) {
                    FormalMap next = evaluate(a->kids[i], slots);
                    if (next.fdom != acc.fdom || next.fcod != acc.fcod)
                        throw TypeError("sum of non-parallel maps at " + to_text(a->kids[i]));
                    acc.under = add_maps(acc.under, next.under);
                }
                return acc;
            }
        }
        throw TypeError("bad arrow expression");
    }

    FormalMap evaluate(const std::string& text, const std::vector<ModulePtr>& slots) const {
        return evaluate(parse_arrow(text), slots);
    }

    /// Structural family lookup, memoized per (symbol, base objects).
    FormalMap structural(const std::string& name, const std::vector<ModulePtr>& args) const {
        auto it = symbols_.find(name);
        if (it == symbols_.end())
            throw TypeError("unregistered symbol '" + name + "' in model " + name_);
        auto [fd, fc] = it->second.sig(*this, args);
        std::string key = name;
        for (const auto& m : args) key += "|" + m->id();
        auto cit = struct_cache_->find(key);
        if (cit != struct_cache_->end()) return {fd, fc, cit->second};
        LinearMap u = it->second.build(*this, args);
        auto [ud, uc] = underlying_sig(fd, fc);
        if (u.dom() != ud || u.cod() != uc)
            throw TypeError("structural map '" + name + "' has underlying signature " +
                            u.dom()->id() + " -> " + u.cod()->id() + ", expected " +
                            ud->id() + " -> " + uc->id());
        struct_cache_->emplace(key, u);
        return {fd, fc, u};
    }

    // -- formal-map combinators (used by native checks) ------------------------

    FormalMap fcompose(const FormalMap& f, const FormalMap& g) const {
        if (f.fcod != g.fdom)
            throw TypeError("compose mismatch: " + f.fcod->id() + " vs " + g.fdom->id());
        LinearMap u = orient_ == Orientation::Direct ? compose(f.under, g.under)
                                                     : compose(g.under, f.under);
        return {f.fdom, g.fcod, u};
    }

    FormalMap ftensor(const std::vector<FormalMap>& fs) const {
        std::vector<ModulePtr> ds, cs;
        std::vector<LinearMap> us;
        for (const auto& f : fs) {
            ds.push_back(f.fdom);
            cs.push_back(f.fcod);
            us.push_back(f.under);
        }
        return {ws_->tensor(ds), ws_->tensor(cs), tensor_maps(*ws_, us)};
    }

    FormalMap fsum(const FormalMap& f, const FormalMap& g) const {
        return {f.fdom, f.fcod, add_maps(f.under, g.under)};
    }

    FormalMap fid(const ModulePtr& m) const { return {m, m, LinearMap::identity(m)}; }

    /// Wraps an underlying map as a formal arrow (orientation-aware).
    FormalMap flift_raw(const ModulePtr& fdom, const ModulePtr& fcod, LinearMap under) const {
        auto [ud, uc] = underlying_sig(fdom, fcod);
        if (under.dom() != ud || under.cod() != uc)
            throw TypeError("raw formal map signature mismatch");
        return {fdom, fcod, std::move(under)};
    }

    // -- probes -----------------------------------------------------------

    /// Seeded pool of arrows fdom -> fcod (formal): sparse random maps with
    /// entries in {-2..2} ({0..2} without negatives), plus identity and zero.
    /// Reproducible from (seed, object ids).
    const std::vector<LinearMap>& probe_pool(const ModulePtr& fdom,
                                             const ModulePtr& fcod) const {
        auto [ud, uc] = underlying_sig(fdom, fcod);
        std::string key = fdom->id() + "->" + fcod->id();
        auto it = probe_cache_->find(key);
        if (it != probe_cache_->end()) return it->second;

        std::uint64_t h = seed_;
        for (char ch : key) h = (h ^ static_cast<std::uint64_t>(ch)) * 1099511628211ULL;
        std::mt19937_64 rng(h);
        const Rig r = rig();
        int lo = r.has_negatives() ? -2 : 0;
        std::uniform_int_distribution<int> entry(lo, 2);
        std::uniform_int_distribution<int> drop(0, 2);

        std::vector<LinearMap> pool;
        auto dom_labels = ud->all_labels();
        auto cod_labels = uc->all_labels();
        for (int p = 0; p < 8; ++p) {
            std::map<BasisLabel, Vector> images;
            for (const auto& dl : dom_labels) {
                Vector v(uc);
                for (const auto& cl : cod_labels) {
                    if (drop(rng) != 0) continue;  // sparsity
                    int e = entry(rng);
                    if (e != 0) v.add_term(cl, Scalar::from_int(r, e));
                }
                images.emplace(dl, std::move(v));
            }
            pool.push_back(LinearMap::from_images(
                ud, uc, [images](const BasisLabel& l) { return images.at(l); }));
        }
        if (ud == uc) pool.push_back(LinearMap::identity(ud));
        pool.push_back(LinearMap::zero_map(ud, uc));
        auto [pit, _] = probe_cache_->emplace(key, std::move(pool));
        return pit->second;
    }

    std::size_t probe_pool_size(const ModulePtr& fdom, const ModulePtr& fcod) const {
        return probe_pool(fdom, fcod).size();
    }

    /// Same registry, flipped orientation: evaluation composes in reverse.
    ModalityModel opposite_wrap() const {
        ModalityModel m = *this;
        m.orient_ = orient_ == Orientation::Direct ? Orientation::Opposite
                                                   : Orientation::Direct;
        m.name_ = name_ + "^op";
        return m;
    }

private:
    std::string name_;
    Orientation orient_;
    std::shared_ptr<Workspace> ws_;
    std::uint64_t seed_;
    std::function<ModulePtr(ModulePtr)> bang_obj_;
    std::function<LinearMap(const LinearMap&)> bang_arrow_;
    std::map<std::string, SymbolDef> symbols_;
    std::vector<ModulePtr> slots_;
    std::vector<NativeLaw> natives_;
    std::map<std::string, std::string> notes_;
    int check_cap_ = -1;
    std::shared_ptr<std::map<std::string, LinearMap>> struct_cache_ =
        std::make_shared<std::map<std::string, LinearMap>>();
    std::shared_ptr<std::map<std::string, std::vector<LinearMap>>> probe_cache_ =
        std::make_shared<std::map<std::string, std::vector<LinearMap>>>();
};

/// Standard signatures for the structural symbols of a (monoidal, additive)
/// coalgebra modality, in the formal orientation.
inline std::pair<ModulePtr, ModulePtr> standard_signature(const ModalityModel& m,
                                                          const std::string& name,
                                                          const std::vector<ModulePtr>& a) {
    Workspace& ws = m.ws();
    if (name == "delta") return {m.bang(a[0]), m.bang(m.bang(a[0]))};
    if (name == "eps") return {m.bang(a[0]), a[0]};
    if (name == "Delta") {
        auto b = m.bang(a[0]);
        return {b, ws.tensor2(b, b)};
    }
    if (name == "e") return {m.bang(a[0]), ws.unit()};
    if (name == "nabla") {
        auto b = m.bang(a[0]);
        return {ws.tensor2(b, b), b};
    }
    if (name == "u") return {ws.unit(), m.bang(a[0])};
    if (name == "m") {
        return {ws.tensor2(m.bang(a[0]), m.bang(a[1])), m.bang(ws.tensor2(a[0], a[1]))};
    }
    if (name == "mK") return {ws.unit(), m.bang(ws.unit())};
    if (name == "d") {
        auto b = m.bang(a[0]);
        return {ws.tensor2(b, a[0]), b};
    }
    if (name == "eta") return {a[0], m.bang(a[0])};
    throw TypeError("no standard signature for symbol '" + name + "'");
}

inline SigFn standard_sig(const std::string& name) {
    return [name](const ModalityModel& m, const std::vector<ModulePtr>& a) {
        return standard_signature(m, name, a);
    };
}

inline int standard_arity(const std::string& name) {
    if (name == "mK") return 0;
    if (name == "m") return 2;
    return 1;
}

}  // namespace modality

#endif
