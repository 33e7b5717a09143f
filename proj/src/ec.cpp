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

#include "tfa/ec.hpp"

#include <sstream>
#include <stdexcept>

namespace tfa::ec {

namespace {

Int mod(const Int& v, const Int& p) {
    Int r = v % p;
    if (r < 0) r += p;
    return r;
}

// extended Euclid; p is prime, so any nonzero v is invertible
Int inv_mod(const Int& v, const Int& p) {
    Int t = 0, newt = 1;
    Int r = p, newr = mod(v, p);
    while (newr != 0) {
        Int q = r / newr;
        t -= q * newt;
        std::swap(t, newt);
        r -= q * newr;
        std::swap(r, newr);
    }
    if (r != 1) throw std::invalid_argument("inv_mod: not invertible");
    return mod(t, p);
}

Int int_from_hex(std::string_view hex) {
    Int v;
    std::stringstream ss;
    ss << std::hex << std::string(hex);
    ss >> v;
    return v;
}

Bytes int_to_be(const Int& v, std::size_t width) {
    Bytes out(width, 0);
    Int t = v;
    for (std::size_t i = 0; i < width; ++i) {
        out[width - 1 - i] = static_cast<std::uint8_t>(t & 0xff);
        t >>= 8;
    }
    if (t != 0) throw std::invalid_argument("int_to_be: value too wide");
    return out;
}

Int be_to_int(ByteSpan data) {
    Int v = 0;
    for (std::uint8_t byte : data) v = (v << 8) | byte;
    return v;
}

}  // namespace

const CurveParams& tiny_curve() {
    static const CurveParams c = [] {
        CurveParams t;
        t.name = "tiny";
        t.p = 211;
        t.a = 1;
        t.b = 1;
        t.base = Point::affine(0, 1);
        t.n = 223;  // prime group order: every point generates the full group
        t.field_bytes = 2;
        return t;
    }();
    return c;
}

const CurveParams& std256_curve() {
    static const CurveParams c = [] {
        CurveParams s;
        s.name = "std256";
        s.p = int_from_hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
        s.a = s.p - 3;
        s.b = int_from_hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b");
        s.base = Point::affine(
            int_from_hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
            int_from_hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"));
        s.n = int_from_hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551");
        s.field_bytes = 32;
        return s;
    }();
    return c;
}

Result<CurveParams> curve_by_name(std::string_view name) {
    if (name == "tiny") return tiny_curve();
    if (name == "std256") return std256_curve();
    return Error::NotFound;
}

bool on_curve(const Point& q, const CurveParams& c) {
    if (q.infinity) return true;
    if (q.x < 0 || q.x >= c.p || q.y < 0 || q.y >= c.p) return false;
    Int lhs = mod(q.y * q.y, c.p);
    Int rhs = mod(q.x * q.x * q.x + c.a * q.x + c.b, c.p);
    return lhs == rhs;
}

namespace {

// group law without the validity precondition checks
Point add_unchecked(const Point& p1, const Point& p2, const CurveParams& c);

}  // namespace

Point add(const Point& p1, const Point& p2, const CurveParams& c) {
    if (!on_curve(p1, c) || !on_curve(p2, c)) throw std::invalid_argument("add: point off curve");
    return add_unchecked(p1, p2, c);
}

namespace {

Point add_unchecked(const Point& p1, const Point& p2, const CurveParams& c) {
    if (p1.infinity) return p2;
    if (p2.infinity) return p1;
    if (p1.x == p2.x && mod(p1.y + p2.y, c.p) == 0) return Point::identity();
    Int lambda;
    if (p1.x == p2.x && p1.y == p2.y) {
        lambda = mod((3 * p1.x * p1.x + c.a) * inv_mod(2 * p1.y, c.p), c.p);
    } else {
        lambda = mod((p2.y - p1.y) * inv_mod(p2.x - p1.x, c.p), c.p);
    }
    Int x3 = mod(lambda * lambda - p1.x - p2.x, c.p);
    Int y3 = mod(lambda * (p1.x - x3) - p1.y, c.p);
    return Point::affine(x3, y3);
}

}  // namespace

Point negate(const Point& q, const CurveParams& c) {
    if (!on_curve(q, c)) throw std::invalid_argument("negate: point off curve");
    if (q.infinity) return q;
    return Point::affine(q.x, mod(-q.y, c.p));
}

Point scalar_mul(const Int& k, const Point& q, const CurveParams& c) {
    if (!on_curve(q, c)) throw std::invalid_argument("scalar_mul: point off curve");
    Int e = mod(k, c.n);
    Point result = Point::identity();
    Point addend = q;
    while (e > 0) {
        if ((e & 1) != 0) result = add_unchecked(result, addend, c);
        addend = add_unchecked(addend, addend, c);
        e >>= 1;
    }
    return result;
}

Bytes encode_point(const Point& q, const CurveParams& c) {
    if (q.infinity) return Bytes{0x00};
    Bytes out;
    out.reserve(1 + 2 * c.field_bytes);
    out.push_back(0x04);
    Bytes x = int_to_be(q.x, c.field_bytes);
    Bytes y = int_to_be(q.y, c.field_bytes);
    out.insert(out.end(), x.begin(), x.end());
    out.insert(out.end(), y.begin(), y.end());
    return out;
}

Result<Point> decode_point(ByteSpan data, const CurveParams& c) {
    if (data.size() == 1 && data[0] == 0x00) return Point::identity();
    if (data.size() != 1 + 2 * c.field_bytes || data[0] != 0x04) return Error::ParseError;
    Point q = Point::affine(be_to_int(data.subspan(1, c.field_bytes)),
                            be_to_int(data.subspan(1 + c.field_bytes, c.field_bytes)));
    if (!on_curve(q, c)) return Error::ParseError;
    return q;
}

Block32 point_digest(const Point& q, const CurveParams& c) {
    return canonical_block(encode_point(q, c));
}

Int random_scalar(Rng& rng, const CurveParams& c) {
    std::size_t nbits = boost::multiprecision::msb(c.n) + 1;
    std::size_t nbytes = (nbits + 7) / 8;
    std::uint8_t top_mask =
        nbits % 8 == 0 ? 0xff : static_cast<std::uint8_t>((1u << (nbits % 8)) - 1);
    for (;;) {
        Block32 block = rng.next_block();
        Bytes draw(block.bytes().begin(), block.bytes().begin() + nbytes);
        draw[0] &= top_mask;
        Int v = be_to_int(draw);
        if (v >= 1 && v < c.n) return v;
    }
}

}  // namespace tfa::ec
