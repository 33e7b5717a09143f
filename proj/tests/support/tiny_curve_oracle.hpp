//------------------------------------------------------------------------------
//
//   Copyright 2026 tfa-lab contributors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Brute-force oracle for the desk curve y^2 = x^3 + x + 1 over F_211,
// written against plain int64 arithmetic so it shares nothing with the
// library's field or group code.

#pragma once

#include <cstdint>
#include <vector>

#include "tfa/ec.hpp"

namespace tfa::testsupport {

struct TinyPoint {
    bool inf = true;
    std::int64_t x = 0;
    std::int64_t y = 0;

    static TinyPoint infinity() { return {}; }
    static TinyPoint at(std::int64_t px, std::int64_t py) { return {false, px, py}; }

    friend bool operator==(const TinyPoint& a, const TinyPoint& b) {
        if (a.inf || b.inf) return a.inf == b.inf;
        return a.x == b.x && a.y == b.y;
    }
};

class TinyGroup {
public:
    static constexpr std::int64_t p = 211;
    static constexpr std::int64_t a = 1;
    static constexpr std::int64_t b = 1;

    std::vector<TinyPoint> points;  // the whole group, built by enumeration

    TinyGroup() {
        points.push_back(TinyPoint::infinity());
        for (std::int64_t x = 0; x < p; ++x) {
            std::int64_t rhs = (x * x % p * x + a * x + b) % p;
            for (std::int64_t y = 0; y < p; ++y) {
                if (y * y % p == rhs) points.push_back(TinyPoint::at(x, y));
            }
        }
    }

    static std::int64_t mod(std::int64_t v) { return ((v % p) + p) % p; }

    // inverse by exhaustive search; independent of Fermat/extended-Euclid paths
    static std::int64_t inv(std::int64_t v) {
        v = mod(v);
        for (std::int64_t i = 1; i < p; ++i) {
            if (v * i % p == 1) return i;
        }
        return 0;
    }

    static TinyPoint add(const TinyPoint& p1, const TinyPoint& p2) {
        if (p1.inf) return p2;
        if (p2.inf) return p1;
        if (p1.x == p2.x && mod(p1.y + p2.y) == 0) return TinyPoint::infinity();
        std::int64_t lambda;
        if (p1 == p2) {
            lambda = mod((3 * p1.x % p * p1.x + a) * inv(2 * p1.y));
        } else {
            lambda = mod((p2.y - p1.y) * inv(p2.x - p1.x));
        }
        std::int64_t x3 = mod(lambda * lambda - p1.x - p2.x);
        std::int64_t y3 = mod(lambda * (p1.x - x3) - p1.y);
        return TinyPoint::at(x3, y3);
    }
};

inline ec::Point to_point(const TinyPoint& t) {
    if (t.inf) return ec::Point::identity();
    return ec::Point::affine(t.x, t.y);
}

inline TinyPoint from_point(const ec::Point& q) {
    if (q.infinity) return TinyPoint::infinity();
    return TinyPoint::at(static_cast<std::int64_t>(q.x), static_cast<std::int64_t>(q.y));
}

}  // namespace tfa::testsupport
