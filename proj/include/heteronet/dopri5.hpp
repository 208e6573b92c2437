#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>

namespace heteronet {

/// Dormand-Prince 5(4) embedded pair for 4-dimensional systems, with the
/// standard quartic dense-output interpolant. Step control uses a fixed
/// safety factor of 0.9 and growth limits [0.2, 5].
class Dopri5 {
public:
    using State = std::array<double, 4>;
    using Rhs = std::function<State(const State&)>;

    struct Options {
        double abs_tol = 1e-12;
        double rel_tol = 1e-9;
        double h_init = 1e-3;
        double h_min = 1e-14;
        double h_max = 1.0;
    };

    Dopri5(Rhs rhs, const Options& opts) : rhs_(std::move(rhs)), opts_(opts) {}

    void start(double t0, const State& y0);

    /// Advance one accepted step. Returns false on step-size underflow.
    bool step();

    double t_prev() const { return t_prev_; }
    double t() const { return t_; }
    const State& y_prev() const { return y_prev_; }
    const State& y() const { return y_; }

    /// Dense evaluation anywhere inside the last accepted step.
    State interpolate(double t_interp) const;

    /// Clamp the next attempted step so it lands exactly on t_stop.
    void limit_to(double t_stop);

private:
    Rhs rhs_;
    Options opts_;
    double t_ = 0, t_prev_ = 0, h_ = 0, h_limit_ = 0;
    State y_{}, y_prev_{}, k1_{};
    std::array<State, 5> rcont_{};  // dense-output coefficients
    bool have_k1_ = false;
};

}  // namespace heteronet
