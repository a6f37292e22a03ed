#pragma once

// Standard surfaces and systems shared by the test suites.

#include "sarkisov/transform.hpp"

namespace fixtures {

using namespace sarkisov;

inline Fan point_fan() { return make_fan(0, {}, {{}}); }

inline Fan p1_fan() { return make_fan(1, {{Int(1)}, {Int(-1)}}, {{0}, {1}}); }

inline Fan p2_fan() {
    return make_fan(2, {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}},
                    {{0, 1}, {1, 2}, {2, 0}});
}

// Antipodal presentation of the plane (the destination of the Cremona run).
inline Fan p2_antipodal_fan() {
    return make_fan(2, {{Int(-1), Int(0)}, {Int(0), Int(-1)}, {Int(1), Int(1)}},
                    {{0, 1}, {1, 2}, {2, 0}});
}

// Hirzebruch surface F_n with rays e1, e2, (-1, n), -e2.
inline Fan hirzebruch_fan(int n) {
    return make_fan(2,
                    {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(n)}, {Int(0), Int(-1)}},
                    {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
}

// Blowup of P^2 at the fixed point of <e1, e2>; isomorphic to F_1 but keeps
// the P^2 coordinates (the model the Cremona game produces).
inline Fan p2_blowup_fan() {
    return make_fan(2,
                    {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(1), Int(1)}, {Int(-1), Int(-1)}},
                    {{0, 2}, {2, 1}, {1, 3}, {3, 0}});
}

inline ToricMoriFibreSpace p2_over_point() {
    return make_mfs(p2_fan(), point_fan(), Mat(0, 2));
}

inline ToricMoriFibreSpace p2_antipodal_over_point() {
    return make_mfs(p2_antipodal_fan(), point_fan(), Mat(0, 2));
}

// F_n fibred over P^1 by (a, b) -> a.
inline ToricMoriFibreSpace hirzebruch_over_p1(int n) {
    Mat proj(1, 2);
    proj.at(0, 0) = 1;
    return make_mfs(hirzebruch_fan(n), p1_fan(), proj);
}

// F_0 fibred the other way, (a, b) -> b.
inline ToricMoriFibreSpace f0_over_second_ruling() {
    Mat proj(1, 2);
    proj.at(0, 1) = 1;
    return make_mfs(hirzebruch_fan(0), p1_fan(), proj);
}

inline InvariantDivisor divisor_on(const Fan& f, const std::vector<std::pair<Vec, Rat>>& coeffs) {
    InvariantDivisor d(f.rays.size(), Rat(0));
    for (const auto& [ray, c] : coeffs) {
        int i = f.ray_index(ray);
        if (i < 0) fail(ErrorKind::InvalidInput, "fixture divisor names a nonexistent ray");
        d[i] = c;
    }
    return d;
}

// Sextics with three triple points: the total transform of |O(3)| under the
// standard quadratic involution, normalized with reference 6 D_{(-1,-1)}.
inline MonomialLinearSystem cremona_sextic_system(const Fan& p2) {
    MonomialLinearSystem h;
    for (long a = 0; a <= 3; ++a)
        for (long b = 0; b <= 3; ++b) {
            if (a + b < 3 || a + b > 6) continue;
            h.points.push_back({Int(a), Int(b)});
        }
    h.reference = divisor_on(p2, {{{Int(-1), Int(-1)}, Rat(6)}});
    h.scale = Rat(1);
    return h;
}

// Cubics with one triple point at the fixed point of <e1, e2>.
inline MonomialLinearSystem corner_triple_point_system(const Fan& p2) {
    MonomialLinearSystem h;
    for (long a = 0; a <= 3; ++a) h.points.push_back({Int(a), Int(3 - a)});
    h.reference = divisor_on(p2, {{{Int(-1), Int(-1)}, Rat(3)}});
    h.scale = Rat(1);
    return h;
}

// The full anticanonical multiple |O(3m)| on P^2.
inline MonomialLinearSystem o3m_system(const Fan& p2, long m) {
    MonomialLinearSystem h;
    for (long a = 0; a <= 3 * m; ++a)
        for (long b = 0; a + b <= 3 * m; ++b) h.points.push_back({Int(a), Int(b)});
    h.reference = divisor_on(p2, {{{Int(-1), Int(-1)}, Rat(3 * m)}});
    h.scale = Rat(1);
    return h;
}

inline ToricBirationalMap cremona_map() {
    Mat m(2, 2);
    m.at(0, 0) = -1;
    m.at(1, 1) = -1;
    return make_map(m, p2_over_point(), p2_over_point());
}

inline ToricBirationalMap identity_p2_map() {
    return make_map(Mat::identity(2), p2_over_point(), p2_over_point());
}

inline ToricBirationalMap ruling_swap_map() {
    return make_map(Mat::identity(2), hirzebruch_over_p1(0), f0_over_second_ruling());
}

} // namespace fixtures
