/*
   Copyright 2026 The beamtrack Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstdint>
#include <string_view>

namespace beamtrack {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t fnv1a(std::string_view text,
                                     std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

/// Child seed for component `a` (and sub-index `b`) of a run seeded with `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                           std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ splitmix64(b + 0x51ed27ULL));
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view component) {
    return derive_seed(seed, fnv1a(component));
}

} // namespace beamtrack
