#pragma once

#include <cmath>

namespace thetalift {

template <class F>
void EllipsoidEnumerator::for_each_in_slice(long i2, F&& f) const {
    const double t2 = R_(2, 2) * i2;
    const double rest2 = bound - t2 * t2;
    if (rest2 < 0) return;
    const double c1 = -R_(1, 2) * i2 / R_(1, 1);
    const double r1 = std::sqrt(rest2) / R_(1, 1);
    const long lo1 = long(std::ceil(c1 - r1)), hi1 = long(std::floor(c1 + r1));
    for (long i1 = lo1; i1 <= hi1; ++i1) {
        const double t1 = R_(1, 1) * i1 + R_(1, 2) * i2;
        const double rest1 = rest2 - t1 * t1;
        if (rest1 < 0) continue;
        const double c0 = -(R_(0, 1) * i1 + R_(0, 2) * i2) / R_(0, 0);
        const double r0 = std::sqrt(rest1) / R_(0, 0);
        const long lo0 = long(std::ceil(c0 - r0)), hi0 = long(std::floor(c0 + r0));
        for (long i0 = lo0; i0 <= hi0; ++i0) {
            const double t0 = R_(0, 0) * i0 + R_(0, 1) * i1 + R_(0, 2) * i2;
            f(i0, i1, i2, t0 * t0 + t1 * t1 + t2 * t2);
        }
    }
}

}  // namespace thetalift
