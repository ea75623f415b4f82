#ifndef CENN_KALMAN_HPP
#define CENN_KALMAN_HPP

#include <array>
#include <cmath>
#include <stdexcept>

namespace cenn {

// Constant-velocity Kalman filter over two tracked quantities (position x/y,
// or box w/h), one frame per tick.  State: (p1, p2, v1, v2).
class KalmanFilter {
public:
    KalmanFilter() = default;

    // q: process noise diagonal; r: measurement noise diagonal.
    KalmanFilter(double p1, double p2, double q, double r) : q_(q), r_(r) {
        if (!(q > 0.0) || !(r > 0.0))
            throw std::invalid_argument("KalmanFilter: noise terms must be positive");
        x_ = {p1, p2, 0.0, 0.0};
        P_.fill(0.0);
        for (int i = 0; i < 4; ++i) P_[i * 4 + i] = 1.0;
    }

    double p1() const { return x_[0]; }
    double p2() const { return x_[1]; }
    double v1() const { return x_[2]; }
    double v2() const { return x_[3]; }

    void predict() {
        // x = F x with F = [I, I; 0, I]
        x_[0] += x_[2];
        x_[1] += x_[3];
        // P = F P F' + Q
        std::array<double, 16> FP{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double v = P_[i * 4 + j];
                if (i < 2) v += P_[(i + 2) * 4 + j];
                FP[i * 4 + j] = v;
            }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double v = FP[i * 4 + j];
                if (j < 2) v += FP[i * 4 + j + 2];
                P_[i * 4 + j] = v;
            }
        for (int i = 0; i < 4; ++i) P_[i * 4 + i] += q_;
        symmetrize();
        check();
    }

    void update(double m1, double m2) {
        // H picks (p1, p2); S = H P H' + R
        const double s00 = P_[0] + r_;
        const double s01 = P_[1];
        const double s10 = P_[4];
        const double s11 = P_[5] + r_;
        const double det = s00 * s11 - s01 * s10;
        if (!(det > 0.0))
            throw std::runtime_error("KalmanFilter: innovation covariance not positive definite");
        const double i00 = s11 / det, i01 = -s01 / det;
        const double i10 = -s10 / det, i11 = s00 / det;

        // K = P H' S^-1 (4x2)
        std::array<double, 8> K{};
        for (int i = 0; i < 4; ++i) {
            const double ph0 = P_[i * 4 + 0];
            const double ph1 = P_[i * 4 + 1];
            K[i * 2 + 0] = ph0 * i00 + ph1 * i10;
            K[i * 2 + 1] = ph0 * i01 + ph1 * i11;
        }
        const double y0 = m1 - x_[0];
        const double y1 = m2 - x_[1];
        for (int i = 0; i < 4; ++i) x_[i] += K[i * 2] * y0 + K[i * 2 + 1] * y1;

        // P = (I - K H) P
        std::array<double, 16> P2{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                P2[i * 4 + j] = P_[i * 4 + j] - K[i * 2] * P_[j] - K[i * 2 + 1] * P_[4 + j];
        P_ = P2;
        symmetrize();
        check();
    }

private:
    void symmetrize() {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const double m = 0.5 * (P_[i * 4 + j] + P_[j * 4 + i]);
                P_[i * 4 + j] = m;
                P_[j * 4 + i] = m;
            }
    }

    void check() const {
        for (int i = 0; i < 4; ++i)
            if (!(P_[i * 4 + i] >= 0.0) || !std::isfinite(P_[i * 4 + i]))
                throw std::runtime_error("KalmanFilter: covariance lost positive semidefiniteness");
    }

    std::array<double, 4> x_{};
    std::array<double, 16> P_{};
    double q_ = 1.0;
    double r_ = 1.0;
};

}  // namespace cenn

#endif
