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

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "tfa/bytes.hpp"
#include "tfa/crypto.hpp"
#include "tfa/result.hpp"
#include "tfa/rng.hpp"

namespace tfa::ec {

using Int = boost::multiprecision::cpp_int;

/// Point in affine coordinates, or the group identity.
struct Point {
    bool infinity = true;
    Int x;
    Int y;

    static Point identity() { return Point{}; }
    static Point affine(Int px, Int py) { return Point{false, std::move(px), std::move(py)}; }

    friend bool operator==(const Point& a, const Point& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

/// Short Weierstrass curve y^2 = x^3 + ax + b over F_p with a base point of
/// prime order n.
struct CurveParams {
    std::string name;
    Int p;
    Int a;
    Int b;
    Point base;
    Int n;
    std::size_t field_bytes;  // fixed big-endian width of coordinates
};

/// Desk-scale curve, small enough for exhaustive group checks.
const CurveParams& tiny_curve();

/// NIST P-256 profile for realistic runs.
const CurveParams& std256_curve();

/// Profile lookup by CLI name ("tiny" or "std256").
Result<CurveParams> curve_by_name(std::string_view name);

bool on_curve(const Point& q, const CurveParams& c);

/// Group law, covering identity, doubling and inverse cases. Throws
/// std::invalid_argument if an input is off the curve.
Point add(const Point& p1, const Point& p2, const CurveParams& c);

Point negate(const Point& q, const CurveParams& c);

/// Double-and-add. k is reduced mod n; scalar_mul(0, q) is the identity.
Point scalar_mul(const Int& k, const Point& q, const CurveParams& c);

/// Canonical injective encoding: 0x00 for the identity, else
/// 0x04 ∥ x ∥ y with fixed-width big-endian coordinates.
Bytes encode_point(const Point& q, const CurveParams& c);
Result<Point> decode_point(ByteSpan data, const CurveParams& c);

/// 32-byte unit standing for a point inside hash inputs: the
/// length-prefixed digest of the canonical encoding.
Block32 point_digest(const Point& q, const CurveParams& c);

/// Uniform nonzero scalar in [1, n), rejection-sampled from rng blocks.
Int random_scalar(Rng& rng, const CurveParams& c);

}  // namespace tfa::ec
