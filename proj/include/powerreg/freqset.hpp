// Copyright 2026 The powerreg Authors
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

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace powerreg {

/// The finite, ordered set of legal clock frequencies of one voltage island,
/// in GHz. Immutable once built.
class FrequencySet {
public:
    /// Sorts and deduplicates `values`. Throws powerreg::Error on an empty
    /// list or on any non-positive or non-finite entry.
    static FrequencySet from_list(std::span<const double> values);
    static FrequencySet from_list(std::initializer_list<double> values) {
        return from_list(std::span<const double>(values.begin(), values.size()));
    }

    /// The 16 levels of the four-core Haswell part used for the reference runs.
    static FrequencySet haswell();

    /// Nearest level to `u`; the lower level wins when two are equidistant.
    /// Inputs outside the range clamp to an endpoint. Throws on non-finite u.
    double project(double u) const;

    /// Exact membership test.
    bool contains(double v) const;

    std::span<const double> levels() const noexcept { return levels_; }
    std::size_t size() const noexcept { return levels_.size(); }
    double min() const noexcept { return levels_.front(); }
    double max() const noexcept { return levels_.back(); }

    friend bool operator==(const FrequencySet&, const FrequencySet&) = default;

private:
    explicit FrequencySet(std::vector<double> levels) : levels_(std::move(levels)) {}

    std::vector<double> levels_;
};

}  // namespace powerreg
