// Copyright 2026 The qcbm-molgan Authors
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

#pragma once

#include <span>
#include <vector>

namespace qmg {

double mean(std::span<const double> x);

/// Average ranks (ties share the mean of their positions), starting at 0.
std::vector<double> fractional_ranks(std::span<const double> x);

/// Pearson correlation; 0 when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace qmg
