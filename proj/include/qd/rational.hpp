#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace qd {

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator. Thin value wrapper around GMP's mpq_class;
/// construction canonicalizes, arithmetic is exact.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(long v) : q_(v) {} // NOLINT: implicit by design, mirrors integer literals
    Rat(long num, long den) : q_(num, den) {
        if (den == 0) throw std::domain_error("Rat: zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpz_class& v) : q_(v) {}
    explicit Rat(mpq_class v) : q_(std::move(v)) {
        if (q_.get_den() == 0) throw std::domain_error("Rat: zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const std::string& s) : q_(s) {
        if (q_.get_den() == 0) throw std::domain_error("Rat: zero denominator");
        q_.canonicalize();
    }

    mpz_class num() const { return q_.get_num(); }
    mpz_class den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_one() const { return q_ == 1; }
    int sign() const { return sgn(q_); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }

    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

    /// Exact integer power; negative exponents require a nonzero base.
    Rat pow(long e) const {
        if (e == 0) return Rat(1);
        if (is_zero() && e < 0) throw std::domain_error("Rat: zero to negative power");
        mpq_class base = e > 0 ? q_ : mpq_class(1 / q_);
        unsigned long k = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
        mpq_class out;
        mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), k);
        mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), k);
        out.canonicalize();
        return Rat(std::move(out));
    }

    std::string str() const { return q_.get_str(); }

private:
    mpq_class q_;
};

inline Rat rat_factorial(long k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return Rat(f);
}

/// (-1)^k as a Rat.
inline Rat rat_sign_pow(long k) { return (k % 2 == 0) ? Rat(1) : Rat(-1); }

} // namespace qd
