// Copyright 2026 The loopsynth Authors
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

#ifndef LOOPSYNTH_ANGLES_H
#define LOOPSYNTH_ANGLES_H

#include <cmath>
#include <numbers>

namespace loopsynth {

/// All public interfaces take angles in degrees; conversion happens once, here.
inline constexpr double deg_to_rad(double deg) {
    return deg * (std::numbers::pi / 180.0);
}

inline constexpr double rad_to_deg(double rad) {
    return rad * (180.0 / std::numbers::pi);
}

/// Reduces an angle to [0, 360).
inline double wrap_degrees(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r < 0) {
        r += 360.0;
    }
    if (r >= 360.0) {
        r -= 360.0;
    }
    return r;
}

/// Distance between two angles on the circle, in degrees.
inline double angular_distance(double a_deg, double b_deg) {
    double d = wrap_degrees(a_deg - b_deg);
    return d > 180.0 ? 360.0 - d : d;
}

}  // namespace loopsynth

#endif
