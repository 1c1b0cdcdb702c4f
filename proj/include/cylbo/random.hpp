/*
 * Copyright 2026 The cylbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CYLBO_RANDOM_HPP
#define CYLBO_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string>

namespace cylbo {

using Rng = std::mt19937_64;

// Derives an independent stream from `parent`; the parent advances.
Rng fork_rng(Rng& parent);

// 64-bit FNV-1a digest of the full engine state, hex encoded.
std::string rng_digest(const Rng& rng);

} // namespace cylbo

#endif
