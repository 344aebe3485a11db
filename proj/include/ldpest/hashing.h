// Copyright 2026 The ldpest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LDPEST_HASHING_H_
#define LDPEST_HASHING_H_

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ldpest {

// XXH64 (Yann Collet's xxHash, 64-bit variant), implemented in-repo so that
// hashed cohort assignments and design matrices are identical on every
// platform. Matches the reference implementation bit for bit.
uint64_t Xxh64(const void* data, size_t len, uint64_t seed);

inline uint64_t Xxh64(std::string_view s, uint64_t seed) {
  return Xxh64(s.data(), s.size(), seed);
}

}  // namespace ldpest

#endif  // LDPEST_HASHING_H_
