#ifndef MODALITY_LAWCHECK_HPP
#define MODALITY_LAWCHECK_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "modality/model.hpp"

namespace modality {

/// A named pair of arrow expressions plus bookkeeping for applicability.
struct Law {
    std::string name, suite, desc;
    ArrowPtr lhs, rhs;
    int n_slots = 1;
    std::vector<std::string> symbols;
    bool has_probes = false;
};

inline std::vector<Law> parse_catalog(const std::string& text) {
    std::vector<Law> laws;
    std::istringstream in(text);
    std::string line;
    Law cur;
    bool open = false;
    auto flush = [&]() {
        if (!open) return;
        if (!cur.lhs || !cur.rhs)
            throw ParseError("law '" + cur.name + "' is missing lhs or rhs");
        cur.n_slots = std::max(max_slot(cur.lhs), max_slot(cur.rhs)) + 1;
        std::vector<std::string> syms;
        collect_symbols(cur.lhs, syms);
        collect_symbols(cur.rhs, syms);
        std::sort(syms.begin(), syms.end());
        syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
        cur.symbols = std::move(syms);
        cur.has_probes = uses_probes(cur.lhs) || uses_probes(cur.rhs);
        laws.push_back(cur);
        cur = Law{};
        open = false;
    };
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto space = line.find(' ');
        std::string key = line.substr(0, space);
        std::string val = space == std::string::npos ? "" : line.substr(space + 1);
        if (key == "law") {
            flush();
            open = true;
            cur.name = val;
        } else if (key == "suite") {
            cur.suite = val;
        } else if (key == "desc") {
            cur.desc = val;
        } else if (key == "lhs") {
            cur.lhs = parse_arrow(val);
        } else if (key == "rhs") {
            cur.rhs = parse_arrow(val);
        } else {
            throw ParseError("unknown catalog key: " + key);
        }
    }
    flush();
    return laws;
}

enum class LawStatus { Pass, FrontierLimited, Fail, Skipped };

inline const char* to_string(LawStatus s) {
    switch (s) {
        case LawStatus::Pass: return "pass";
        case LawStatus::FrontierLimited: return "frontier-limited";
        case LawStatus::Fail: return "fail";
        case LawStatus::Skipped: return "skipped";
    }
    return "?";
}

/// Result of one law on one model. `expected_fail` marks separating
/// counterexamples: for those, a recorded disagreement is the desired
/// outcome and ok() reflects that.
struct LawReport {
    std::string name, suite, anchor;
    LawStatus status = LawStatus::Skipped;
    bool expected_fail = false;
    std::size_t checked = 0;
    std::size_t skipped_labels = 0;
    int check_cap = -1;
    std::uint64_t seed = 0;
    std::string witness, lhs_value, rhs_value, note, probe_note;
    std::vector<std::string> missing;

    bool ok() const {
        if (status == LawStatus::Skipped) return true;
        bool failed = status == LawStatus::Fail;
        return expected_fail ? failed : !failed;
    }
};

namespace detail {

inline ArrowPtr with_probe_choice(const ArrowPtr& a, const std::map<int, int>& choice) {
    if (a->kind == ArrowExpr::Kind::Probe) {
        auto it = choice.find(a->index);
        if (it == choice.end()) return a;
        return ArrowExpr::probe(it->second, a->objs[0], a->objs[1]);
    }
    if (a->kids.empty()) return a;
    auto b = std::make_shared<ArrowExpr>(*a);
    for (auto& k : b->kids) k = with_probe_choice(k, choice);
    return b;
}

inline void collect_probe_slots(const ArrowPtr& a,
                                std::map<int, std::pair<ObjPtr, ObjPtr>>& out) {
    if (a->kind == ArrowExpr::Kind::Probe) out[a->index] = {a->objs[0], a->objs[1]};
    for (const auto& k : a->kids) collect_probe_slots(k, out);
}

}  // namespace detail

inline LawReport run_law(const ModalityModel& model, const Law& law) {
    LawReport rep;
    rep.name = law.name;
    rep.suite = law.suite;
    rep.anchor = law.desc;
    rep.seed = model.seed();
    rep.check_cap = model.check_cap();

    for (const auto& s : law.symbols)
        if (!model.has_symbol(s)) rep.missing.push_back(s);
    if (!rep.missing.empty()) {
        rep.status = LawStatus::Skipped;
        rep.note = "missing symbols";
        return rep;
    }
    std::vector<ModulePtr> slots(model.slots().begin(),
                                 model.slots().begin() +
                                     std::min<std::size_t>(model.slots().size(),
                                                           static_cast<std::size_t>(law.n_slots)));
    if (static_cast<int>(slots.size()) < law.n_slots) {
        rep.status = LawStatus::Skipped;
        rep.note = "model provides too few base objects";
        return rep;
    }

    std::pair<ModulePtr, ModulePtr> sig_l, sig_r;
    try {
        sig_l = model.typecheck(law.lhs, slots);
        sig_r = model.typecheck(law.rhs, slots);
    } catch (const TypeError& e) {
        rep.status = LawStatus::Skipped;
        rep.note = std::string("not applicable: ") + e.what();
        return rep;
    }
    if (sig_l != sig_r) {
        rep.status = LawStatus::Skipped;
        rep.note = "not applicable: sides have signatures " + sig_l.first->id() + " -> " +
                   sig_l.second->id() + " vs " + sig_r.first->id() + " -> " +
                   sig_r.second->id();
        return rep;
    }

    // enumerate probe assignments (identity assignment when there are none)
    std::map<int, std::pair<ObjPtr, ObjPtr>> probe_slots;
    detail::collect_probe_slots(law.lhs, probe_slots);
    detail::collect_probe_slots(law.rhs, probe_slots);
    std::vector<int> slot_ids;
    std::vector<std::size_t> pool_sizes;
    for (const auto& [idx, objs] : probe_slots) {
        slot_ids.push_back(idx);
        pool_sizes.push_back(model.probe_pool_size(model.resolve(objs.first, slots),
                                                   model.resolve(objs.second, slots)));
    }

    bool any_frontier = false;
    std::vector<std::size_t> pick(slot_ids.size(), 0);
    while (true) {
        std::map<int, int> choice;
        for (std::size_t i = 0; i < slot_ids.size(); ++i)
            choice[slot_ids[i]] = static_cast<int>(pick[i]);
        FormalMap l = model.evaluate(detail::with_probe_choice(law.lhs, choice), slots);
        FormalMap r = model.evaluate(detail::with_probe_choice(law.rhs, choice), slots);
        EqReport eq = maps_equal(l.under, r.under, model.check_cap());
        rep.checked += eq.checked;
        rep.skipped_labels += eq.skipped;
        any_frontier = any_frontier || eq.frontier_limited;
        if (!eq.equal) {
            rep.status = LawStatus::Fail;
            rep.witness = model.ws().render(*eq.witness);
            rep.lhs_value = eq.lhs_value->render(model.ws());
            rep.rhs_value = eq.rhs_value->render(model.ws());
            if (!slot_ids.empty()) {
                std::string pn = "probe assignment";
                for (std::size_t i = 0; i < slot_ids.size(); ++i)
                    pn += " f" + std::to_string(slot_ids[i]) + "=#" + std::to_string(pick[i]);
                rep.probe_note = pn;
            }
            return rep;
        }
        // advance the odometer
        std::size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < pool_sizes[i]) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
        if (pick.empty()) break;
    }
    rep.status = any_frontier ? LawStatus::FrontierLimited : LawStatus::Pass;
    return rep;
}

inline LawReport run_native(const ModalityModel& model, const NativeLaw& nl) {
    LawReport rep;
    rep.name = nl.name;
    rep.suite = nl.suite;
    rep.anchor = nl.anchor;
    rep.seed = model.seed();
    rep.check_cap = model.check_cap();
    rep.expected_fail = nl.expect_fail;
    NativeOutcome o = nl.run(model);
    if (!o.applicable) {
        rep.status = LawStatus::Skipped;
        rep.note = o.note;
        return rep;
    }
    rep.checked = o.checked;
    rep.skipped_labels = o.skipped;
    rep.witness = o.witness;
    rep.lhs_value = o.lhs_value;
    rep.rhs_value = o.rhs_value;
    rep.note = o.note;
    rep.status = !o.equal ? LawStatus::Fail
                          : (o.frontier_limited ? LawStatus::FrontierLimited : LawStatus::Pass);
    return rep;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{
        "comonad", "coalgebra", "monoidal",      "bialgebra", "additive",
        "differential", "codereliction", "seely", "rotabaxter", "biproduct"};
    return names;
}

inline std::string canonical_suite(std::string s) {
    if (s == "deriving") return "differential";
    if (s == "monad") return "comonad";
    return s;
}

/// Runs one suite (or "all") over catalog laws plus the model's native laws,
/// in catalog order. Deterministic for fixed (model, suite, params, seed).
inline std::vector<LawReport> run_suite(const ModalityModel& model,
                                        const std::vector<Law>& catalog,
                                        const std::string& suite_in) {
    std::string suite = canonical_suite(suite_in);
    std::vector<LawReport> out;
    for (const auto& law : catalog)
        if (suite == "all" || law.suite == suite) out.push_back(run_law(model, law));
    for (const auto& nl : model.natives())
        if (suite == "all" || nl.suite == suite) out.push_back(run_native(model, nl));
    return out;
}

// ---------------------------------------------------------------------------
// Cross-suite consistency: the equivalences between the deriving rules and
// the codereliction rules must agree in status on additive models.
// ---------------------------------------------------------------------------

inline std::vector<LawReport> meta_consistency(const std::vector<LawReport>& reports) {
    auto find = [&](const std::string& name) -> const LawReport* {
        for (const auto& r : reports)
            if (r.name == name) return &r;
        return nullptr;
    };
    auto passed = [](const LawReport* r) {
        return r && (r->status == LawStatus::Pass || r->status == LawStatus::FrontierLimited);
    };
    auto failed = [](const LawReport* r) { return r && r->status == LawStatus::Fail; };
    auto ran = [&](const LawReport* r) { return passed(r) || failed(r); };

    std::vector<LawReport> out;
    auto emit = [&](const std::string& name, bool applicable, bool okay,
                    const std::string& note) {
        LawReport rep;
        rep.name = name;
        rep.suite = "meta";
        rep.anchor = note;
        rep.status = !applicable ? LawStatus::Skipped
                                 : (okay ? LawStatus::Pass : LawStatus::Fail);
        out.push_back(rep);
    };

    const LawReport *d2 = find("d.2"), *d3 = find("d.3"), *d4 = find("d.4"),
                    *dnab = find("d.nabla"), *dm = find("d.m");
    bool given = passed(d3) && passed(d4);
    {
        std::vector<const LawReport*> eq{d2, dnab, dm};
        bool applicable = given;
        bool okay = true;
        int yes = 0, no = 0;
        for (auto* r : eq) {
            if (!ran(r)) continue;
            (passed(r) ? yes : no) += 1;
        }
        okay = (yes == 0) || (no == 0);
        emit("meta.d-rule-equivalence", applicable, okay,
             "given [d.3] and [d.4]: [d.2], [d.nabla], [d.m] agree in status");
    }
    {
        const LawReport *c3 = find("dC.3"), *c2 = find("dC.2"), *cm = find("dC.m");
        bool applicable = passed(c3);
        bool okay = (!ran(c2) || passed(c2)) && (!ran(cm) || passed(cm));
        emit("meta.dC3-implies-dC2-dCm", applicable, okay,
             "[dC.3] implies [dC.2] and [dC.m] (when applicable)");
    }
    {
        auto suite_verdict = [&](const std::string& suite) -> int {
            // 1 pass, 0 mixed/none, -1 failed
            bool any = false, bad = false;
            for (const auto& r : reports) {
                if (r.suite != suite) continue;
                if (r.status == LawStatus::Skipped) continue;
                any = true;
                if (!r.ok()) bad = true;
            }
            if (!any) return 0;
            return bad ? -1 : 1;
        };
        int add = suite_verdict("additive"), bia = suite_verdict("bialgebra"),
            coa = suite_verdict("coalgebra");
        bool okay = !(add == 1 && bia == -1) && !(bia == 1 && coa == -1);
        emit("meta.suite-containment", add != 0 || bia != 0, okay,
             "additive pass implies bialgebra pass implies coalgebra pass");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classification: the Venn-diagram verdict for one model.
// ---------------------------------------------------------------------------

enum class Tri { Yes, No, NotEstablished };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::NotEstablished: return "not-established";
    }
    return "?";
}

struct Classification {
    Tri coalgebra = Tri::NotEstablished;
    Tri monoidal = Tri::NotEstablished;
    Tri bialgebra = Tri::NotEstablished;
    Tri additive = Tri::NotEstablished;
    Tri deriving = Tri::NotEstablished;
    Tri codereliction = Tri::NotEstablished;
    std::map<std::string, std::string> flags;
    std::vector<LawReport> reports;
};

inline Classification classify(const ModalityModel& model, const std::vector<Law>& catalog) {
    Classification c;
    c.reports = run_suite(model, catalog, "all");
    auto meta = meta_consistency(c.reports);
    c.reports.insert(c.reports.end(), meta.begin(), meta.end());

    auto suites_ok = [&](std::initializer_list<const char*> suites) -> std::optional<bool> {
        bool any = false, bad = false;
        for (const auto& r : c.reports) {
            bool in = false;
            for (const char* s : suites) in = in || r.suite == s;
            if (!in || r.status == LawStatus::Skipped) continue;
            any = true;
            if (!r.ok()) bad = true;
        }
        if (!any) return std::nullopt;
        return !bad;
    };
    auto tri_of = [](std::optional<bool> v) {
        if (!v) return Tri::NotEstablished;
        return *v ? Tri::Yes : Tri::No;
    };
    auto witness_of = [&](const char* suite) -> std::string {
        for (const auto& r : c.reports)
            if (r.suite == suite && r.status == LawStatus::Fail && !r.witness.empty())
                return r.name + " at " + r.witness;
        return "";
    };

    c.coalgebra = tri_of(suites_ok({"comonad", "coalgebra"}));

    bool has_bialg = model.has_symbol("nabla") && model.has_symbol("u");
    if (has_bialg) {
        c.bialgebra = tri_of(suites_ok({"bialgebra"}));
        c.additive = tri_of(suites_ok({"additive"}));
        if (c.additive == Tri::No)
            c.flags["additive"] = "fails with witness: " + witness_of("additive");
    } else {
        c.bialgebra = Tri::NotEstablished;
        c.additive = Tri::NotEstablished;
        auto it = model.notes().find("bialgebra");
        if (it != model.notes().end()) c.flags["bialgebra"] = it->second;
    }

    if (model.has_symbol("m")) {
        c.monoidal = tri_of(suites_ok({"monoidal"}));
    } else if (c.additive == Tri::Yes) {
        c.monoidal = Tri::Yes;
        c.flags["monoidal"] = "via the additive<->monoidal correspondence";
    } else if (c.additive == Tri::No) {
        c.monoidal = Tri::No;
        c.flags["monoidal"] =
            "via the additive<->monoidal correspondence (additivity refuted)";
    } else {
        c.monoidal = tri_of(suites_ok({"seely"}));
        if (c.monoidal != Tri::Yes) {
            auto w = witness_of("seely");
            if (!w.empty()) c.flags["monoidal"] = "obstruction witnessed: " + w;
        }
    }

    if (model.has_symbol("d")) {
        c.deriving = tri_of(suites_ok({"differential"}));
        if (c.deriving == Tri::No) {
            auto w = witness_of("differential");
            c.flags["deriving"] = "fails with witness: " + w;
            auto it = model.notes().find("refutation");
            if (it != model.notes().end()) c.flags["deriving"] += "; " + it->second;
        }
    } else {
        auto it = model.notes().find("deriving");
        if (it != model.notes().end()) {
            c.deriving = Tri::No;
            c.flags["deriving"] = it->second;
        }
    }

    if (model.has_symbol("eta")) {
        c.codereliction = tri_of(suites_ok({"codereliction"}));
    } else if (c.additive == Tri::Yes && c.deriving == Tri::No) {
        c.codereliction = Tri::No;
        c.flags["codereliction"] =
            "via the d<->eta correspondence on additive bialgebra modalities";
    }

    // monotone consistency (suite containment)
    auto rank = [](Tri t) { return t == Tri::Yes ? 2 : (t == Tri::NotEstablished ? 1 : 0); };
    if (rank(c.additive) > rank(c.bialgebra) || rank(c.bialgebra) > rank(c.coalgebra))
        c.flags["consistency"] = "violated (bug): additive > bialgebra > coalgebra ranks";
    return c;
}

}  // namespace modality

#endif
