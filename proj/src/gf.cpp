#include "ffgeom/gf.hpp"

#include <string>

#include "ffgeom/error.hpp"

namespace ffgeom::gf {

namespace {

using Poly = std::vector<std::uint32_t>;  // c_0 .. c_d over GF(p)

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// remainder of a modulo monic b
Poly poly_mod(Poly a, const Poly& b, std::uint32_t p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() > db) {
        const std::uint32_t lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) {
            const std::uint64_t t = static_cast<std::uint64_t>(lead) * b[i] % p;
            a[i + shift] = static_cast<std::uint32_t>((a[i + shift] + p - t) % p);
        }
        trim(a);
    }
    return a;
}

Poly unpack(std::uint64_t code, std::uint32_t p, unsigned len) {
    Poly a(len);
    for (unsigned i = 0; i < len; ++i) {
        a[i] = static_cast<std::uint32_t>(code % p);
        code /= p;
    }
    return a;
}

bool is_irreducible(const Poly& f, std::uint32_t p) {
    const unsigned deg = static_cast<unsigned>(f.size() - 1);
    for (unsigned d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly g = unpack(code, p, d);
            g.push_back(1);
            if (poly_mod(f, g, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

Field Field::make(std::uint32_t p, unsigned k) {
    if (!is_prime(p)) throw Error(Errc::non_prime, std::to_string(p) + " is not prime");
    if (k < 1 || k > max_degree) throw Error(Errc::degree_too_large, "extension degree " + std::to_string(k));
    std::uint64_t q = 1;
    for (unsigned i = 0; i < k; ++i) q *= p;
    if (q > max_order) throw Error(Errc::degree_too_large, "field order " + std::to_string(q) + " exceeds 2^20");

    Field f;
    f.p_ = p;
    f.k_ = k;
    f.q_ = static_cast<std::uint32_t>(q);

    if (k == 1) {
        f.modulus_ = {0, 1};
    } else {
        // first monic irreducible when the lower coefficients are read as a base-p number
        bool found = false;
        for (std::uint64_t code = 0; code < q && !found; ++code) {
            Poly cand = unpack(code, p, k);
            cand.push_back(1);
            if (is_irreducible(cand, p)) {
                f.modulus_ = cand;
                found = true;
            }
        }
        if (!found) throw Error(Errc::no_irreducible_found, "degree " + std::to_string(k) + " over GF(" + std::to_string(p) + ")");
    }

    f.neg_.resize(f.q_);
    for (Elem a = 0; a < f.q_; ++a) {
        Poly d = unpack(a, p, k);
        for (auto& c : d) c = (p - c) % p;
        f.neg_[a] = f.from_digits(d);
    }
    if (k > 1 && p != 2 && f.q_ <= 256) {
        f.add_table_.resize(static_cast<std::size_t>(f.q_) * f.q_);
        for (Elem a = 0; a < f.q_; ++a)
            for (Elem b = 0; b < f.q_; ++b) f.add_table_[a * f.q_ + b] = f.add_digits(a, b);
    }

    // primitive element: smallest g whose order is q - 1
    const auto order = f.q_ - 1;
    const auto factors = prime_factors(order);
    auto slow_pow = [&f](Elem a, std::uint64_t e) {
        Elem r = 1;
        while (e) {
            if (e & 1) r = f.mul_reference(r, a);
            a = f.mul_reference(a, a);
            e >>= 1;
        }
        return r;
    };
    f.generator_ = 0;
    for (Elem g = 1; g < f.q_; ++g) {
        bool primitive = true;
        for (auto r : factors)
            if (slow_pow(g, order / r) == 1) {
                primitive = false;
                break;
            }
        if (primitive) {
            f.generator_ = g;
            break;
        }
    }
    if (f.generator_ == 0) throw Error(Errc::internal, "no primitive element");

    f.log_.assign(f.q_, 0);
    f.exp_.assign(2 * static_cast<std::size_t>(order) + 1, 0);
    Elem x = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
        f.exp_[i] = x;
        f.exp_[i + order] = x;
        f.log_[x] = i;
        x = f.mul_reference(x, f.generator_);
    }
    if (x != 1) throw Error(Errc::internal, "generator order mismatch");
    return f;
}

Field Field::of_order(std::uint32_t q) {
    if (q < 2 || q > max_order) throw Error(Errc::unsupported_field, "order " + std::to_string(q));
    auto factors = prime_factors(q);
    if (factors.size() != 1) throw Error(Errc::unsupported_field, std::to_string(q) + " is not a prime power");
    const auto p = static_cast<std::uint32_t>(factors[0]);
    unsigned k = 0;
    for (std::uint32_t t = q; t > 1; t /= p) ++k;
    if (k > max_degree) throw Error(Errc::unsupported_field, "order " + std::to_string(q) + " needs degree > 4");
    return make(p, k);
}

Elem Field::add_digits(Elem a, Elem b) const {
    Elem r = 0, scale = 1;
    for (unsigned i = 0; i < k_; ++i) {
        const Elem s = (a % p_ + b % p_) % p_;
        r += s * scale;
        scale *= p_;
        a /= p_;
        b /= p_;
    }
    return r;
}

Elem Field::inv(Elem a) const {
    if (a == 0) throw Error(Errc::out_of_range, "inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Elem Field::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
}

Elem Field::from_int(std::int64_t v) const {
    auto r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<Elem>(r);
}

Elem Field::conjugate(Elem a) const {
    if (k_ != 2) throw Error(Errc::wrong_degree, "conjugation needs a degree-2 field, got k=" + std::to_string(k_));
    return frobenius(a);
}

bool Field::is_square(Elem a) const {
    if (a == 0 || p_ == 2) return true;
    return log_[a] % 2 == 0;
}

std::vector<std::uint32_t> Field::digits(Elem a) const { return unpack(a, p_, k_); }

Elem Field::from_digits(std::span<const std::uint32_t> d) const {
    Elem r = 0, scale = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        r += (d[i] % p_) * scale;
        scale *= p_;
    }
    return r;
}

Elem Field::mul_reference(Elem a, Elem b) const {
    if (k_ == 1) return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
    Poly x = unpack(a, p_, k_), y = unpack(b, p_, k_);
    Poly prod(2 * k_ - 1, 0);
    for (unsigned i = 0; i < k_; ++i)
        for (unsigned j = 0; j < k_; ++j)
            prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + static_cast<std::uint64_t>(x[i]) * y[j]) % p_);
    Poly r = poly_mod(prod, modulus_, p_);
    return from_digits(r);
}

}  // namespace ffgeom::gf
