// Copyright 2026 The parrep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace parrep {

// Pairwise (cascade) summation with a fixed split order, so the result only
// depends on the input sequence and never on how work was scheduled.
double pairwise_sum(std::span<const double> values);

// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

// Parses a decimal string; throws std::invalid_argument on trailing garbage.
double parse_double(const std::string& text);

std::uint64_t binomial(unsigned n, unsigned k);

// Worker count: PARREP_THREADS if set and positive, else hardware concurrency.
unsigned default_thread_count();

}  // namespace parrep
