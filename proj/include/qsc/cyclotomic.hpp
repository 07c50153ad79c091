#pragma once

// Cyclotomic polynomials, q-integers and q-shifted factorials.

#include "qsc/laurent.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <vector>

namespace qsc {

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("divisors of non-positive integer");
    std::vector<std::int64_t> small, large;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        small.push_back(d);
        if (d * d != n) large.push_back(n / d);
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        result -= result / p;
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace detail {

class CyclotomicCache {
public:
    static CyclotomicCache& instance() {
        static CyclotomicCache cache;
        return cache;
    }

    const QPoly& get(std::int64_t n) {
        {
            std::shared_lock lock(mutex_);
            auto it = table_.find(n);
            if (it != table_.end()) return it->second;
        }
        // Phi_n = (q^n - 1) / prod_{d | n, d < n} Phi_d
        QPoly value = QPoly::q_power(n) - QPoly(Rational(1));
        QPoly proper(Rational(1));
        for (std::int64_t d : divisors(n)) {
            if (d != n) proper *= get(d);
        }
        value = exact_div(value, proper);
        std::unique_lock lock(mutex_);
        return table_.try_emplace(n, std::move(value)).first->second;
    }

private:
    std::shared_mutex mutex_;
    std::map<std::int64_t, QPoly> table_;  // node-based: references stay valid
};

}  // namespace detail

/// The n-th cyclotomic polynomial (memoized, thread-safe).
inline const QPoly& cyclotomic(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("cyclotomic index must be positive");
    return detail::CyclotomicCache::instance().get(n);
}

/// [m]_q = (1 - q^m) / (1 - q). For m <= 0 this is a Laurent polynomial:
/// [0] = 0 and [-m] = -q^-m [m].
inline QPoly q_integer(std::int64_t m) {
    if (m == 0) return QPoly();
    std::int64_t lo = m > 0 ? 0 : m;
    std::int64_t len = m > 0 ? m : -m;
    Rational c = m > 0 ? Rational(1) : Rational(-1);
    return QPoly::from_coeffs(lo, std::vector<Rational>(static_cast<std::size_t>(len), c));
}

/// (q^c; q^s)_k = prod_{j<k} (1 - q^(c + j s)).
inline QPoly q_pochhammer(std::int64_t c, std::int64_t s, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("q_pochhammer length must be non-negative");
    QPoly out(Rational(1));
    for (std::int64_t j = 0; j < k; ++j) {
        out *= QPoly::one_minus_q_power(c + j * s);
        if (out.is_zero()) break;
    }
    return out;
}

}  // namespace qsc
