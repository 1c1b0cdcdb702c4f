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

#ifndef CYLBO_SELFTEST_HPP
#define CYLBO_SELFTEST_HPP

#include <string>
#include <vector>

namespace cylbo {

struct SelftestOptions {
    /// Fault injection for testing the harness itself.
    bool corrupt_benchmark_constant = false;
};

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast property checks: PSD spot-check, block-solve equivalence, warp
/// monotonicity and benchmark minima.
std::vector<SelftestCheck> run_selftest(const SelftestOptions& options = {});

} // namespace cylbo

#endif
