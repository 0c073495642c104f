#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace mdli {

using Bits = double;

// Lightweight expected/error pair. Failures are normal control flow during
// parsing and expression evaluation, so no exceptions on the hot paths.
template <class T>
struct Result {
    std::optional<T> value;
    std::string error;

    static Result ok(T v) {
        Result r;
        r.value = std::move(v);
        return r;
    }
    static Result fail(std::string msg) {
        Result r;
        r.error = std::move(msg);
        return r;
    }
    explicit operator bool() const { return value.has_value(); }
    const T& operator*() const { return *value; }
    T& operator*() { return *value; }
    const T* operator->() const { return &*value; }
};

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Deterministic RNG with portable output (std distributions are not
// reproducible across standard library implementations).
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed ^ 0x5851f42d4c957f2dull) {}
    uint64_t next() { return splitmix64(state); }
    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
    int range(int lo, int hi) {  // inclusive bounds
        if (hi <= lo) return lo;
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }
};

inline uint64_t hash_combine(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 12) + (h >> 4);
    return h;
}

} // namespace mdli
