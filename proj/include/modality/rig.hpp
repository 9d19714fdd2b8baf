#ifndef MODALITY_RIG_HPP
#define MODALITY_RIG_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace modality {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct RigMismatchError : Error {
    RigMismatchError() : Error("rig mismatch") {}
};

struct NoNegativesError : Error {
    NoNegativesError() : Error("no negatives") {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

struct TruncationError : Error {
    TruncationError() : Error("truncation frontier exceeded") {}
};

enum class RigKind : std::uint8_t {
    Rationals,
    Integers,
    IntegersMod,
    Booleans,
    Naturals,
};

/// A commutative rig of scalars. IntegersMod carries its modulus (n >= 2).
class Rig {
public:
    constexpr Rig() : kind_(RigKind::Rationals), modulus_(0) {}

    static Rig rationals() { return Rig(RigKind::Rationals, 0); }
    static Rig integers() { return Rig(RigKind::Integers, 0); }
    static Rig integers_mod(std::uint32_t n) {
        if (n < 2) throw Error("modulus must be >= 2");
        return Rig(RigKind::IntegersMod, n);
    }
    static Rig booleans() { return Rig(RigKind::Booleans, 0); }
    static Rig naturals() { return Rig(RigKind::Naturals, 0); }

    RigKind kind() const { return kind_; }
    std::uint32_t modulus() const { return modulus_; }

    bool has_negatives() const {
        return kind_ == RigKind::Rationals || kind_ == RigKind::Integers ||
               kind_ == RigKind::IntegersMod;
    }

    std::string name() const {
        switch (kind_) {
            case RigKind::Rationals: return "Q";
            case RigKind::Integers: return "Z";
            case RigKind::IntegersMod: return "Z/" + std::to_string(modulus_);
            case RigKind::Booleans: return "bool";
            case RigKind::Naturals: return "nat";
        }
        return "?";
    }

    /// Parses "Q", "Z", "Zmod:<n>", "bool", "nat" (the CLI spelling).
    static Rig from_name(const std::string& s) {
        if (s == "Q" || s == "q") return rationals();
        if (s == "Z" || s == "z") return integers();
        if (s == "bool") return booleans();
        if (s == "nat") return naturals();
        if (s.rfind("Zmod:", 0) == 0 || s.rfind("zmod:", 0) == 0) {
            unsigned long n = std::stoul(s.substr(5));
            return integers_mod(static_cast<std::uint32_t>(n));
        }
        throw ParseError("unknown rig: " + s);
    }

    friend bool operator==(const Rig& a, const Rig& b) {
        return a.kind_ == b.kind_ && a.modulus_ == b.modulus_;
    }
    friend bool operator!=(const Rig& a, const Rig& b) { return !(a == b); }

private:
    Rig(RigKind k, std::uint32_t m) : kind_(k), modulus_(m) {}
    RigKind kind_;
    std::uint32_t modulus_;
};

/// An exact scalar in a chosen rig. Rationals are kept in lowest terms with
/// positive denominator (cpp_rational maintains that); residues live in [0, n);
/// booleans are 0/1.
class Scalar {
public:
    Scalar() : rig_(Rig::integers()), z_(0) {}

    static Scalar zero(const Rig& r) { return from_integer(r, 0); }
    static Scalar one(const Rig& r) { return from_integer(r, 1); }

    static Scalar from_integer(const Rig& r, BigInt v) {
        Scalar s;
        s.rig_ = r;
        switch (r.kind()) {
            case RigKind::Rationals:
                s.q_ = BigRat(v);
                break;
            case RigKind::Integers:
                s.z_ = std::move(v);
                break;
            case RigKind::IntegersMod: {
                BigInt n(r.modulus());
                BigInt rem = v % n;
                if (rem < 0) rem += n;
                s.z_ = rem;
                break;
            }
            case RigKind::Booleans:
                s.z_ = (v != 0) ? 1 : 0;
                if (v < 0) throw NoNegativesError();
                break;
            case RigKind::Naturals:
                if (v < 0) throw NoNegativesError();
                s.z_ = std::move(v);
                break;
        }
        return s;
    }

    static Scalar from_int(const Rig& r, long v) { return from_integer(r, BigInt(v)); }

    static Scalar rational(BigInt num, BigInt den) {
        if (den == 0) throw ParseError("denominator 0");
        Scalar s;
        s.rig_ = Rig::rationals();
        s.q_ = BigRat(std::move(num), std::move(den));
        return s;
    }

    const Rig& rig() const { return rig_; }

    bool is_zero() const {
        return rig_.kind() == RigKind::Rationals ? q_.is_zero() : z_ == 0;
    }
    bool is_one() const {
        return rig_.kind() == RigKind::Rationals ? q_ == 1 : z_ == 1;
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        a.check_same(b);
        Scalar s;
        s.rig_ = a.rig_;
        switch (a.rig_.kind()) {
            case RigKind::Rationals: s.q_ = a.q_ + b.q_; break;
            case RigKind::Integers:
            case RigKind::Naturals: s.z_ = a.z_ + b.z_; break;
            case RigKind::IntegersMod: s.z_ = (a.z_ + b.z_) % BigInt(a.rig_.modulus()); break;
            case RigKind::Booleans: s.z_ = (a.z_ != 0 || b.z_ != 0) ? 1 : 0; break;
        }
        return s;
    }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        a.check_same(b);
        Scalar s;
        s.rig_ = a.rig_;
        switch (a.rig_.kind()) {
            case RigKind::Rationals: s.q_ = a.q_ * b.q_; break;
            case RigKind::Integers:
            case RigKind::Naturals: s.z_ = a.z_ * b.z_; break;
            case RigKind::IntegersMod: s.z_ = (a.z_ * b.z_) % BigInt(a.rig_.modulus()); break;
            case RigKind::Booleans: s.z_ = (a.z_ != 0 && b.z_ != 0) ? 1 : 0; break;
        }
        return s;
    }

    Scalar negate() const {
        if (!rig_.has_negatives()) throw NoNegativesError();
        Scalar s;
        s.rig_ = rig_;
        switch (rig_.kind()) {
            case RigKind::Rationals: s.q_ = -q_; break;
            case RigKind::Integers: s.z_ = -z_; break;
            case RigKind::IntegersMod: {
                BigInt n(rig_.modulus());
                s.z_ = (n - z_) % n;
                break;
            }
            default: break;
        }
        return s;
    }

    Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
    Scalar& operator*=(const Scalar& b) { return *this = *this * b; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.rig_ != b.rig_) return false;
        return a.rig_.kind() == RigKind::Rationals ? a.q_ == b.q_ : a.z_ == b.z_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string render() const {
        if (rig_.kind() == RigKind::Rationals) {
            std::string s = numerator(q_).str();
            if (denominator(q_) != 1) s += "/" + denominator(q_).str();
            return s;
        }
        return z_.str();
    }

    /// Grammar: optional sign, digits, optional "/digits". A '-' sign is
    /// rejected in rigs without negatives; "/..." is only meaningful in Q.
    static Scalar parse(const std::string& text, const Rig& r) {
        if (text.empty()) throw ParseError("empty scalar");
        std::size_t i = 0;
        bool neg = false;
        if (text[i] == '+' || text[i] == '-') {
            neg = (text[i] == '-');
            ++i;
        }
        if (neg && !r.has_negatives()) throw NoNegativesError();
        std::size_t digits_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == digits_start) throw ParseError("malformed scalar: " + text);
        BigInt num(text.substr(digits_start, i - digits_start));
        if (neg) num = -num;
        if (i == text.size()) {
            if (r.kind() == RigKind::Booleans && num != 0 && num != 1)
                throw ParseError("boolean scalar must be 0 or 1");
            return from_integer(r, num);
        }
        if (text[i] != '/') throw ParseError("malformed scalar: " + text);
        ++i;
        std::size_t den_start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i != text.size() || i == den_start) throw ParseError("malformed scalar: " + text);
        if (r.kind() != RigKind::Rationals) throw ParseError("fractions only live in Q");
        BigInt den(text.substr(den_start, i - den_start));
        if (den == 0) throw ParseError("denominator 0");
        return rational(std::move(num), std::move(den));
    }

private:
    void check_same(const Scalar& b) const {
        if (rig_ != b.rig_) throw RigMismatchError();
    }

    Rig rig_;
    BigInt z_;
    BigRat q_;
};

}  // namespace modality

#endif
