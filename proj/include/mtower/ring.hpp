#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>

namespace mtower {

struct ring_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Coefficient ring: the integers, or integers mod m (m >= 2).
/// All arithmetic is exact; Z uses arbitrary precision throughout.
class RingSpec {
public:
    enum class Kind { Integers, IntegersMod };

    RingSpec() : kind_(Kind::Integers), mod_(0) {}

    static RingSpec integers() { return RingSpec(); }
    static RingSpec integers_mod(const mpz_class& m) {
        if (m < 2) throw ring_error("IntegersMod requires modulus >= 2");
        RingSpec r;
        r.kind_ = Kind::IntegersMod;
        r.mod_ = m;
        return r;
    }

    Kind kind() const { return kind_; }
    bool is_integers() const { return kind_ == Kind::Integers; }
    bool is_mod() const { return kind_ == Kind::IntegersMod; }
    const mpz_class& modulus() const {
        if (!is_mod()) throw ring_error("modulus() on ring Z");
        return mod_;
    }

    /// Canonical representative: identity over Z, value in [0, m) over Z/m.
    mpz_class reduce(const mpz_class& v) const {
        if (is_integers()) return v;
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
        return r;
    }

    bool is_unit(const mpz_class& v) const {
        if (is_integers()) return v == 1 || v == -1;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), v.get_mpz_t(), mod_.get_mpz_t());
        return g == 1;
    }

    bool operator==(const RingSpec& o) const {
        return kind_ == o.kind_ && (is_integers() || mod_ == o.mod_);
    }
    bool operator!=(const RingSpec& o) const { return !(*this == o); }

    std::string str() const {
        return is_integers() ? "Z" : "Z/" + mod_.get_str();
    }

private:
    Kind kind_;
    mpz_class mod_;
};

inline void require_same_ring(const RingSpec& a, const RingSpec& b, const char* where) {
    if (a != b) throw ring_error(std::string("ring mismatch in ") + where + ": " + a.str() + " vs " + b.str());
}

} // namespace mtower
