#include "cosetqkd/rng.hpp"

#include <algorithm>
#include <cmath>

#include "cosetqkd/errors.hpp"

namespace cosetqkd {

uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

uint64_t derive_seed(uint64_t seed, uint64_t tag, uint64_t index) {
    uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ (tag * 0xd6e8feb86659fd93ull));
    s = splitmix64(s ^ (index * 0xa0761d6478bd642full));
    return s;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t Rng::uniform_below(uint64_t bound) {
    require_valid(bound > 0, "uniform_below: bound must be positive");
    if ((bound & (bound - 1)) == 0) {
        return engine_() & (bound - 1);
    }
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % bound;
}

double Rng::gaussian() {
    // u in (0, 1] so the log is finite.
    double u = 1.0 - uniform();
    double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

std::vector<int> Rng::sample_subset(int n, int k) {
    require_valid(0 <= k && k <= n, "sample_subset: need 0 <= k <= n");
    // Partial Fisher-Yates on an index array.
    std::vector<int> idx(n);
    for (int i = 0; i < n; i++) {
        idx[i] = i;
    }
    for (int i = 0; i < k; i++) {
        int j = i + static_cast<int>(uniform_below(static_cast<uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace cosetqkd
