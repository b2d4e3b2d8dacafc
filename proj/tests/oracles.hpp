// Test-side oracles, independent of the library implementation.
//
//  - torrey_w: closed-form resonant damped-Rabi inversion
//        w(t) = e^(-g t/2) [cos(wt t) + (g/(2 wt)) sin(wt t)],
//        wt = sqrt(Omega^2 - g^2/4), for the underdamped case Omega > g/2,
//    with w(0) = 1, dw/dt(0) = 0.
//  - expm_evolve: scaling-and-squaring Taylor matrix exponential of the 3x3
//    generator du/dt = -d v - g u, dv/dt = d u - O w - g v, dw/dt = O v.
#pragma once

#include <array>
#include <cmath>

namespace oracle {

inline double torrey_w(double omega, double gamma2, double t) {
    double wt = std::sqrt(omega * omega - 0.25 * gamma2 * gamma2);
    return std::exp(-0.5 * gamma2 * t) *
           (std::cos(wt * t) + (0.5 * gamma2 / wt) * std::sin(wt * t));
}

// Population of the target level for a system starting fully inverted.
inline double torrey_p_transfer(double omega, double gamma2, double t) {
    return 0.5 * (1.0 - torrey_w(omega, gamma2, t));
}

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

inline Mat3 matmul(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline Mat3 expm(Mat3 m) {
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) {
        double row = 0.0;
        for (int j = 0; j < 3; ++j) row += std::abs(m[i][j]);
        norm = std::max(norm, row);
    }
    int squarings = 0;
    while (norm > 0.5) {
        norm *= 0.5;
        ++squarings;
    }
    double scale = std::ldexp(1.0, -squarings);
    for (auto& row : m)
        for (double& v : row) v *= scale;

    const Mat3 identity{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Mat3 result = identity;
    Mat3 term = identity;
    for (int k = 1; k <= 24; ++k) {
        term = matmul(term, m);
        for (auto& row : term)
            for (double& v : row) v /= static_cast<double>(k);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) result = matmul(result, result);
    return result;
}

inline Mat3 bloch_generator(double omega, double delta, double gamma2) {
    return Mat3{{{-gamma2, -delta, 0.0}, {delta, -gamma2, -omega}, {0.0, omega, 0.0}}};
}

// Exact (u, v, w) after time t from the matrix exponential of the generator.
inline Vec3 expm_evolve(double omega, double delta, double gamma2, double t, const Vec3& x0) {
    Mat3 g = bloch_generator(omega, delta, gamma2);
    for (auto& row : g)
        for (double& v : row) v *= t;
    Mat3 phi = expm(g);
    Vec3 x{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x[i] += phi[i][j] * x0[j];
    return x;
}

} // namespace oracle
