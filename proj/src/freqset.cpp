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

#include "powerreg/freqset.hpp"

#include <algorithm>
#include <cmath>

#include "powerreg/error.hpp"

namespace powerreg {

FrequencySet FrequencySet::from_list(std::span<const double> values) {
    if (values.empty()) {
        throw Error("frequency set: empty level list");
    }
    std::vector<double> levels(values.begin(), values.end());
    for (double v : levels) {
        if (!std::isfinite(v) || v <= 0.0) {
            throw Error("frequency set: levels must be finite and positive, got " +
                        std::to_string(v));
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return FrequencySet(std::move(levels));
}

FrequencySet FrequencySet::haswell() {
    return from_list({0.8, 1.0, 1.1, 1.3, 1.5, 1.7, 1.8, 2.0,
                      2.2, 2.4, 2.5, 2.7, 2.9, 3.1, 3.2, 3.4});
}

double FrequencySet::project(double u) const {
    if (!std::isfinite(u)) {
        throw Error("frequency set: cannot project a non-finite command");
    }
    auto hi = std::lower_bound(levels_.begin(), levels_.end(), u);
    if (hi == levels_.begin()) {
        return levels_.front();
    }
    if (hi == levels_.end()) {
        return levels_.back();
    }
    auto lo = std::prev(hi);
    // Ties go to the lower level.
    return (u - *lo <= *hi - u) ? *lo : *hi;
}

bool FrequencySet::contains(double v) const {
    return std::binary_search(levels_.begin(), levels_.end(), v);
}

}  // namespace powerreg
