#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oresync {

inline void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

struct VecHash {
  template <class T>
  std::size_t operator()(const std::vector<T>& v) const {
    std::size_t h = v.size();
    for (const auto& x : v) hash_mix(h, std::hash<T>{}(x));
    return h;
  }
};

struct PairVecHash {
  template <class A, class B>
  std::size_t operator()(const std::pair<A, B>& p) const {
    std::size_t h = VecHash{}(p.first);
    hash_mix(h, VecHash{}(p.second));
    return h;
  }
};

}  // namespace oresync
