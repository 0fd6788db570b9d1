#include "langevin/rng.hpp"

namespace langevin {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream) noexcept {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ splitmix64(replica + 0x632be59bd9b4e019ULL));
    return splitmix64(s ^ splitmix64(stream + 0x8cb92ba72f3d8dd7ULL));
}

}  // namespace langevin
