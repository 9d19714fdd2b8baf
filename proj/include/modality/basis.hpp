#ifndef MODALITY_BASIS_HPP
#define MODALITY_BASIS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modality/rig.hpp"

namespace modality {

enum class LabelKind : std::uint8_t {
    Unit,      // basis of the monoidal unit K
    Gen,       // generator (base module id, index)
    Multiset,  // sorted multiset of labels (Sym^n bases)
    Word,      // ordered word of labels (Sh bases)
    Tensor,    // flat n-ary tensor (n >= 2, no Unit entries, never nested)
    Copy,      // tagged copy (direct sums)
};

/// Canonical name of a basis vector. Immutable value type; tensors are kept
/// flat with unit factors dropped (strict monoidal conventions), multisets
/// sorted under the global canonical order.
///
/// Degree counts total "letters": Multiset/Word add one per entry plus the
/// entries' own degrees, Tensor adds, Copy and Gen are transparent.
class BasisLabel {
public:
    BasisLabel() : kind_(LabelKind::Unit) {}

    static BasisLabel unit() { return BasisLabel(); }

    static BasisLabel gen(std::int32_t module_id, std::int32_t index) {
        BasisLabel l;
        l.kind_ = LabelKind::Gen;
        l.a_ = module_id;
        l.b_ = index;
        return l;
    }

    static BasisLabel multiset(std::vector<BasisLabel> entries) {
        BasisLabel l;
        l.kind_ = LabelKind::Multiset;
        std::sort(entries.begin(), entries.end());
        l.kids_ = std::move(entries);
        l.finish();
        return l;
    }

    static BasisLabel word(std::vector<BasisLabel> entries) {
        BasisLabel l;
        l.kind_ = LabelKind::Word;
        l.kids_ = std::move(entries);
        l.finish();
        return l;
    }

    /// Flattening tensor: nested tensors splice in, unit entries vanish,
    /// a single surviving factor collapses to itself.
    static BasisLabel tensor(const std::vector<BasisLabel>& factors) {
        std::vector<BasisLabel> flat;
        for (const auto& f : factors) {
            if (f.kind_ == LabelKind::Unit) continue;
            if (f.kind_ == LabelKind::Tensor) {
                flat.insert(flat.end(), f.kids_.begin(), f.kids_.end());
            } else {
                flat.push_back(f);
            }
        }
        if (flat.empty()) return unit();
        if (flat.size() == 1) return flat.front();
        BasisLabel l;
        l.kind_ = LabelKind::Tensor;
        l.kids_ = std::move(flat);
        l.finish();
        return l;
    }

    static BasisLabel tensor2(const BasisLabel& a, const BasisLabel& b) {
        return tensor({a, b});
    }

    static BasisLabel copy(std::int32_t tag, BasisLabel payload) {
        BasisLabel l;
        l.kind_ = LabelKind::Copy;
        l.a_ = tag;
        l.kids_.push_back(std::move(payload));
        l.finish();
        return l;
    }

    LabelKind kind() const { return kind_; }
    std::int32_t module_id() const { return a_; }
    std::int32_t gen_index() const { return b_; }
    std::int32_t copy_tag() const { return a_; }
    const std::vector<BasisLabel>& kids() const { return kids_; }
    const BasisLabel& payload() const { return kids_.front(); }

    int degree() const { return degree_; }

    /// Atomic tensor factors: [] for Unit, kids for Tensor, [*this] otherwise.
    std::vector<BasisLabel> atoms() const {
        if (kind_ == LabelKind::Unit) return {};
        if (kind_ == LabelKind::Tensor) return kids_;
        return {*this};
    }

    friend bool operator==(const BasisLabel& a, const BasisLabel& b) {
        return a.kind_ == b.kind_ && a.a_ == b.a_ && a.b_ == b.b_ && a.kids_ == b.kids_;
    }
    friend bool operator!=(const BasisLabel& a, const BasisLabel& b) { return !(a == b); }

    /// Global canonical order: degree first, then structural lex. Total,
    /// deterministic across runs; witnesses and multiset normal forms use it.
    friend bool operator<(const BasisLabel& a, const BasisLabel& b) {
        return a.cmp(b) < 0;
    }

    int cmp(const BasisLabel& o) const {
        if (degree_ != o.degree_) return degree_ < o.degree_ ? -1 : 1;
        return cmp_struct(o);
    }

    std::string render(const std::function<std::string(std::int32_t, std::int32_t)>& gen_name) const {
        switch (kind_) {
            case LabelKind::Unit: return "1";
            case LabelKind::Gen: return gen_name(a_, b_);
            case LabelKind::Multiset: {
                if (kids_.empty()) return "{}";
                std::string s = "{";
                for (std::size_t i = 0; i < kids_.size(); ++i) {
                    if (i) s += ",";
                    s += kids_[i].render(gen_name);
                }
                return s + "}";
            }
            case LabelKind::Word: {
                std::string s = "(";
                for (std::size_t i = 0; i < kids_.size(); ++i) {
                    if (i) s += ",";
                    s += kids_[i].render(gen_name);
                }
                return s + ")";
            }
            case LabelKind::Tensor: {
                std::string s;
                for (std::size_t i = 0; i < kids_.size(); ++i) {
                    if (i) s += "⊗";  // ⊗
                    s += kids_[i].render(gen_name);
                }
                return s;
            }
            case LabelKind::Copy:
                return kids_.front().render(gen_name) + "@" + std::to_string(a_);
        }
        return "?";
    }

private:
    void finish() {
        int d = 0;
        switch (kind_) {
            case LabelKind::Multiset:
            case LabelKind::Word:
                d = static_cast<int>(kids_.size());
                for (const auto& k : kids_) d += k.degree_;
                break;
            case LabelKind::Tensor:
                for (const auto& k : kids_) d += k.degree_;
                break;
            case LabelKind::Copy:
                d = kids_.front().degree_;
                break;
            default:
                break;
        }
        degree_ = d;
    }

    int cmp_struct(const BasisLabel& o) const {
        if (kind_ != o.kind_) return kind_ < o.kind_ ? -1 : 1;
        if (a_ != o.a_) return a_ < o.a_ ? -1 : 1;
        if (b_ != o.b_) return b_ < o.b_ ? -1 : 1;
        if (kids_.size() != o.kids_.size())
            return kids_.size() < o.kids_.size() ? -1 : 1;
        for (std::size_t i = 0; i < kids_.size(); ++i) {
            int c = kids_[i].cmp(o.kids_[i]);
            if (c != 0) return c;
        }
        return 0;
    }

    LabelKind kind_;
    std::int32_t a_ = 0;
    std::int32_t b_ = 0;
    int degree_ = 0;
    std::vector<BasisLabel> kids_;
};

}  // namespace modality

#endif
