#ifndef MODALITY_EXPR_HPP
#define MODALITY_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "modality/rig.hpp"

namespace modality {

struct ObjExpr;
using ObjPtr = std::shared_ptr<const ObjExpr>;

/// Formal object expression: base-object slots A/B/C, the unit K, the zero
/// object O, bang(_), tens(...), sum(_,_).
struct ObjExpr {
    enum class Kind { Slot, Unit, Zero, Bang, Tens, Sum };
    Kind kind;
    int slot = 0;
    std::vector<ObjPtr> kids;

    static ObjPtr make_slot(int i) {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Slot;
        o->slot = i;
        return o;
    }
    static ObjPtr unit() {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Unit;
        return o;
    }
    static ObjPtr zero() {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Zero;
        return o;
    }
    static ObjPtr bang(ObjPtr x) {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Bang;
        o->kids = {std::move(x)};
        return o;
    }
    static ObjPtr tens(std::vector<ObjPtr> xs) {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Tens;
        o->kids = std::move(xs);
        return o;
    }
    static ObjPtr sum2(ObjPtr a, ObjPtr b) {
        auto o = std::make_shared<ObjExpr>();
        o->kind = Kind::Sum;
        o->kids = {std::move(a), std::move(b)};
        return o;
    }
};

struct ArrowExpr;
using ArrowPtr = std::shared_ptr<const ArrowExpr>;

/// Formal arrow expression in the coalgebra orientation. Structural symbols
/// are referenced by name with explicit base-object arguments; probe(i,X,Y)
/// ranges over the model's seeded pool of maps X -> Y.
struct ArrowExpr {
    enum class Kind { Id, Zero, Sym, Inj, Proj, Probe, Struct, Lift, Compose, Tensor, Sum };
    Kind kind;
    std::string symbol;        // Struct
    int index = 0;             // Inj/Proj/Probe
    std::vector<ObjPtr> objs;  // object arguments
    std::vector<ArrowPtr> kids;

    static ArrowPtr id(ObjPtr x) { return mk(Kind::Id, {std::move(x)}, {}); }
    static ArrowPtr zero(ObjPtr a, ObjPtr b) {
        return mk(Kind::Zero, {std::move(a), std::move(b)}, {});
    }
    static ArrowPtr sym(ObjPtr a, ObjPtr b) {
        return mk(Kind::Sym, {std::move(a), std::move(b)}, {});
    }
    static ArrowPtr inj(int i, ObjPtr a, ObjPtr b) {
        auto e = mk(Kind::Inj, {std::move(a), std::move(b)}, {});
        const_cast<ArrowExpr*>(e.get())->index = i;
        return e;
    }
    static ArrowPtr proj(int i, ObjPtr a, ObjPtr b) {
        auto e = mk(Kind::Proj, {std::move(a), std::move(b)}, {});
        const_cast<ArrowExpr*>(e.get())->index = i;
        return e;
    }
    static ArrowPtr probe(int i, ObjPtr a, ObjPtr b) {
        auto e = mk(Kind::Probe, {std::move(a), std::move(b)}, {});
        const_cast<ArrowExpr*>(e.get())->index = i;
        return e;
    }
    static ArrowPtr structural(std::string name, std::vector<ObjPtr> objs) {
        auto e = mk(Kind::Struct, std::move(objs), {});
        const_cast<ArrowExpr*>(e.get())->symbol = std::move(name);
        return e;
    }
    static ArrowPtr lift(ArrowPtr f) { return mk(Kind::Lift, {}, {std::move(f)}); }
    static ArrowPtr compose(std::vector<ArrowPtr> fs) {
        return mk(Kind::Compose, {}, std::move(fs));
    }
    static ArrowPtr tens(std::vector<ArrowPtr> fs) {
        return mk(Kind::Tensor, {}, std::move(fs));
    }
    static ArrowPtr sum(std::vector<ArrowPtr> fs) { return mk(Kind::Sum, {}, std::move(fs)); }

private:
    static ArrowPtr mk(Kind k, std::vector<ObjPtr> objs, std::vector<ArrowPtr> kids) {
        auto e = std::make_shared<ArrowExpr>();
        e->kind = k;
        e->objs = std::move(objs);
        e->kids = std::move(kids);
        return e;
    }
};

// ---------------------------------------------------------------------------
// Textual form: prefix notation, stable across catalog files and reports.
// ---------------------------------------------------------------------------

inline std::string to_text(const ObjPtr& o) {
    switch (o->kind) {
        case ObjExpr::Kind::Slot: return std::string(1, static_cast<char>('A' + o->slot));
        case ObjExpr::Kind::Unit: return "K";
        case ObjExpr::Kind::Zero: return "O";
        case ObjExpr::Kind::Bang: return "bang(" + to_text(o->kids[0]) + ")";
        case ObjExpr::Kind::Tens: {
            std::string s = "tens(";
            for (std::size_t i = 0; i < o->kids.size(); ++i) {
                if (i) s += ",";
                s += to_text(o->kids[i]);
            }
            return s + ")";
        }
        case ObjExpr::Kind::Sum:
            return "sum(" + to_text(o->kids[0]) + "," + to_text(o->kids[1]) + ")";
    }
    return "?";
}

inline std::string to_text(const ArrowPtr& a) {
    auto objlist = [&](std::size_t from = 0) {
        std::string s;
        for (std::size_t i = from; i < a->objs.size(); ++i) {
            if (i > from) s += ",";
            s += to_text(a->objs[i]);
        }
        return s;
    };
    auto kidlist = [&]() {
        std::string s;
        for (std::size_t i = 0; i < a->kids.size(); ++i) {
            if (i) s += ",";
            s += to_text(a->kids[i]);
        }
        return s;
    };
    switch (a->kind) {
        case ArrowExpr::Kind::Id: return "id(" + objlist() + ")";
        case ArrowExpr::Kind::Zero: return "zero(" + objlist() + ")";
        case ArrowExpr::Kind::Sym: return "sym(" + objlist() + ")";
        case ArrowExpr::Kind::Inj:
            return "inj(" + std::to_string(a->index) + "," + objlist() + ")";
        case ArrowExpr::Kind::Proj:
            return "proj(" + std::to_string(a->index) + "," + objlist() + ")";
        case ArrowExpr::Kind::Probe:
            return "probe(" + std::to_string(a->index) + "," + objlist() + ")";
        case ArrowExpr::Kind::Struct: return a->symbol + "(" + objlist() + ")";
        case ArrowExpr::Kind::Lift: return "lift(" + kidlist() + ")";
        case ArrowExpr::Kind::Compose: return "compose(" + kidlist() + ")";
        case ArrowExpr::Kind::Tensor: return "tens(" + kidlist() + ")";
        case ArrowExpr::Kind::Sum: return "sum(" + kidlist() + ")";
    }
    return "?";
}

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string text) : text_(std::move(text)) {}

    ObjPtr parse_obj_all() {
        auto o = parse_obj();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return o;
    }
    ArrowPtr parse_arrow_all() {
        auto a = parse_arrow();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing input");
        return a;
    }

    ObjPtr parse_obj() {
        std::string tok = ident();
        if (tok.size() == 1 && tok[0] >= 'A' && tok[0] <= 'H' && tok != "K")
            return ObjExpr::make_slot(tok[0] - 'A');
        if (tok == "K") return ObjExpr::unit();
        if (tok == "O") return ObjExpr::zero();
        if (tok == "bang") {
            expect('(');
            auto x = parse_obj();
            expect(')');
            return ObjExpr::bang(x);
        }
        if (tok == "tens") {
            expect('(');
            std::vector<ObjPtr> xs{parse_obj()};
            while (peek() == ',') {
                expect(',');
                xs.push_back(parse_obj());
            }
            expect(')');
            return ObjExpr::tens(std::move(xs));
        }
        if (tok == "sum") {
            expect('(');
            auto x = parse_obj();
            expect(',');
            auto y = parse_obj();
            expect(')');
            return ObjExpr::sum2(x, y);
        }
        fail("unknown object: " + tok);
        return nullptr;
    }

    ArrowPtr parse_arrow() {
        std::string tok = ident();
        if (tok == "id") {
            expect('(');
            auto x = parse_obj();
            expect(')');
            return ArrowExpr::id(x);
        }
        if (tok == "zero" || tok == "sym") {
            expect('(');
            auto x = parse_obj();
            expect(',');
            auto y = parse_obj();
            expect(')');
            return tok == "zero" ? ArrowExpr::zero(x, y) : ArrowExpr::sym(x, y);
        }
        if (tok == "inj" || tok == "proj" || tok == "probe") {
            expect('(');
            int i = integer();
            expect(',');
            auto x = parse_obj();
            expect(',');
            auto y = parse_obj();
            expect(')');
            if (tok == "inj") return ArrowExpr::inj(i, x, y);
            if (tok == "proj") return ArrowExpr::proj(i, x, y);
            return ArrowExpr::probe(i, x, y);
        }
        if (tok == "lift") {
            expect('(');
            auto f = parse_arrow();
            expect(')');
            return ArrowExpr::lift(f);
        }
        if (tok == "compose" || tok == "tens" || tok == "sum") {
            expect('(');
            std::vector<ArrowPtr> fs{parse_arrow()};
            while (peek() == ',') {
                expect(',');
                fs.push_back(parse_arrow());
            }
            expect(')');
            if (tok == "compose") return ArrowExpr::compose(std::move(fs));
            if (tok == "tens") return ArrowExpr::tens(std::move(fs));
            return ArrowExpr::sum(std::move(fs));
        }
        // structural symbol with object arguments
        expect('(');
        std::vector<ObjPtr> objs;
        if (peek() != ')') {
            objs.push_back(parse_obj());
            while (peek() == ',') {
                expect(',');
                objs.push_back(parse_obj());
            }
        }
        expect(')');
        return ArrowExpr::structural(tok, std::move(objs));
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_' || text_[pos_] == '.'))
            ++pos_;
        if (pos_ == start) fail("expected identifier");
        return text_.substr(start, pos_ - start);
    }
    int integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail("expected integer");
        return std::stoi(text_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("arrow-expression parse error at offset " +
                         std::to_string(pos_) + ": " + why + " in: " + text_);
    }

    std::string text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline ArrowPtr parse_arrow(const std::string& text) {
    return detail::ExprParser(text).parse_arrow_all();
}

inline ObjPtr parse_obj(const std::string& text) {
    return detail::ExprParser(text).parse_obj_all();
}

/// Highest base-object slot referenced (-1 if none): drives how many base
/// objects a law must be instantiated with.
inline int max_slot(const ObjPtr& o) {
    int m = o->kind == ObjExpr::Kind::Slot ? o->slot : -1;
    for (const auto& k : o->kids) m = std::max(m, max_slot(k));
    return m;
}

inline int max_slot(const ArrowPtr& a) {
    int m = -1;
    for (const auto& o : a->objs) m = std::max(m, max_slot(o));
    for (const auto& k : a->kids) m = std::max(m, max_slot(k));
    return m;
}

inline void collect_symbols(const ArrowPtr& a, std::vector<std::string>& out) {
    if (a->kind == ArrowExpr::Kind::Struct) out.push_back(a->symbol);
    for (const auto& k : a->kids) collect_symbols(k, out);
}

inline bool uses_probes(const ArrowPtr& a) {
    if (a->kind == ArrowExpr::Kind::Probe) return true;
    for (const auto& k : a->kids)
        if (uses_probes(k)) return true;
    return false;
}

inline int max_probe_index(const ArrowPtr& a) {
    int m = a->kind == ArrowExpr::Kind::Probe ? a->index : -1;
    for (const auto& k : a->kids) m = std::max(m, max_probe_index(k));
    return m;
}

}  // namespace modality

#endif
