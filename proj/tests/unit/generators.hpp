#pragma once

#include <cstdint>
#include <vector>

#include "heightforge/arith.hpp"
#include "heightforge/polynomial.hpp"

namespace gen {

// splitmix64
class Source {
public:
    explicit Source(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }

    bool coin() { return next() & 1; }

    heightforge::Rational rational(long bound) {
        heightforge::Rational q(range(-bound, bound), range(1, bound));
        q.canonicalize();
        return q;
    }

    heightforge::Rational nonzero(long bound) {
        for (;;) {
            heightforge::Rational q = rational(bound);
            if (q != 0) return q;
        }
    }

    heightforge::Polynomial integer_poly(int degree, long bound) {
        std::vector<heightforge::Rational> c;
        for (int i = 0; i < degree; ++i) c.emplace_back(range(-bound, bound));
        long lead = 0;
        while (lead == 0) lead = range(-bound, bound);
        c.emplace_back(lead);
        return heightforge::Polynomial(c);
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<long>(v.size()) - 1))];
    }

private:
    std::uint64_t state_;
};

}  // namespace gen
