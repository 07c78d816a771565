#pragma once

#include <cstdint>

namespace pcmt {

// Splittable deterministic PRNG (splitmix64 core). Every randomized routine
// in the project draws from one master seed through derive(), so outputs are
// bit-identical across platforms and independent of thread scheduling.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n) by rejection.
    uint64_t below(uint64_t n) {
        const uint64_t limit = ~uint64_t{0} - ~uint64_t{0} % n;
        uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Independent child stream; stream i is decorrelated from stream j != i.
    Rng derive(uint64_t index) const {
        Rng child(state_ ^ ((index + 0x632be59bd9b4e019ull) * 0xd1342543de82ef95ull));
        child.next_u64();
        return child;
    }

  private:
    uint64_t state_;
};

}  // namespace pcmt
