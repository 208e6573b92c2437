#include "heteronet/dopri5.hpp"

#include <algorithm>
#include <cmath>

namespace heteronet {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;

// 5th-minus-4th order error weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

// Dense-output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

constexpr double kSafety = 0.9;
constexpr double kShrink = 0.2;
constexpr double kGrow = 5.0;

using State = Dopri5::State;

}  // namespace

void Dopri5::start(double t0, const State& y0) {
    t_ = t_prev_ = t0;
    y_ = y_prev_ = y0;
    h_ = opts_.h_init;
    h_limit_ = 0.0;
    k1_ = rhs_(y0);
    have_k1_ = true;
}

void Dopri5::limit_to(double t_stop) { h_limit_ = t_stop; }

bool Dopri5::step() {
    while (true) {
        double h = std::min(h_, opts_.h_max);
        if (h_limit_ > t_ && t_ + h > h_limit_) h = h_limit_ - t_;
        if (h < opts_.h_min) return false;

        const State& k1 = k1_;
        State y2, y3, y4, y5, y6, ynew;
        for (size_t i = 0; i < 4; ++i) y2[i] = y_[i] + h * a21 * k1[i];
        const State k2 = rhs_(y2);
        for (size_t i = 0; i < 4; ++i) y3[i] = y_[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = rhs_(y3);
        for (size_t i = 0; i < 4; ++i)
            y4[i] = y_[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = rhs_(y4);
        for (size_t i = 0; i < 4; ++i)
            y5[i] = y_[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = rhs_(y5);
        for (size_t i = 0; i < 4; ++i)
            y6[i] = y_[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        const State k6 = rhs_(y6);
        for (size_t i = 0; i < 4; ++i)
            ynew[i] = y_[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        const State k7 = rhs_(ynew);  // FSAL stage

        double err = 0.0;
        for (size_t i = 0; i < 4; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y_[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / 4.0);

        if (err <= 1.0) {
            // Dense-output coefficients for the accepted step.
            for (size_t i = 0; i < 4; ++i) {
                const double dy = ynew[i] - y_[i];
                const double bspl = h * k1[i] - dy;
                rcont_[0][i] = y_[i];
                rcont_[1][i] = dy;
                rcont_[2][i] = bspl;
                rcont_[3][i] = dy - h * k7[i] - bspl;
                rcont_[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                    d6 * k6[i] + d7 * k7[i]);
            }
            t_prev_ = t_;
            y_prev_ = y_;
            t_ += h;
            y_ = ynew;
            k1_ = k7;

            double factor = kGrow;
            if (err > 0.0) factor = std::min(kGrow, std::max(kShrink, kSafety * std::pow(err, -0.2)));
            h_ = h * factor;
            return true;
        }
        h_ = h * std::max(kShrink, kSafety * std::pow(err, -0.2));
        if (h_ < opts_.h_min) return false;
    }
}

Dopri5::State Dopri5::interpolate(double t_interp) const {
    const double h = t_ - t_prev_;
    const double theta = h != 0.0 ? (t_interp - t_prev_) / h : 0.0;
    const double tho = 1.0 - theta;
    State out;
    for (size_t i = 0; i < 4; ++i)
        out[i] = rcont_[0][i] +
                 theta * (rcont_[1][i] +
                          tho * (rcont_[2][i] + theta * (rcont_[3][i] + tho * rcont_[4][i])));
    return out;
}

}  // namespace heteronet
