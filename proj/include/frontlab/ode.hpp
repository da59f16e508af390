#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace frontlab {

using State = std::vector<double>;
using VectorField = std::function<void(double, const State&, State&)>;

/// One accepted Dormand-Prince step with the data needed for dense output.
struct DenseStep {
    double t0, h;
    State y0;
    std::array<State, 7> k;

    State eval(double t) const {
        static const double P[7][4] = {
            {1, -8048581381.0 / 2820520608.0, 8663915743.0 / 2820520608.0, -12715105075.0 / 11282082432.0},
            {0, 0, 0, 0},
            {0, 131558114200.0 / 32700410799.0, -68118460800.0 / 10900136933.0, 87487479700.0 / 32700410799.0},
            {0, -1754552775.0 / 470086768.0, 14199869525.0 / 1410260304.0, -10690763975.0 / 1880347072.0},
            {0, 127303824393.0 / 49829197408.0, -318862633887.0 / 49829197408.0, 701980252875.0 / 199316789632.0},
            {0, -282668133.0 / 205662961.0, 2019193451.0 / 616988883.0, -1453857185.0 / 822651844.0},
            {0, 40617522.0 / 29380423.0, -110615467.0 / 29380423.0, 69997945.0 / 29380423.0}};
        double th = (t - t0) / h;
        double pw[4] = {th, th * th, th * th * th, th * th * th * th};
        State y = y0;
        for (int s = 0; s < 7; ++s) {
            double q = 0;
            for (int m = 0; m < 4; ++m) q += P[s][m] * pw[m];
            if (q == 0) continue;
            for (size_t i = 0; i < y.size(); ++i) y[i] += h * k[s][i] * q;
        }
        return y;
    }
};

struct Trajectory {
    std::vector<double> t;
    std::vector<State> y;
    bool blew_up = false;
    bool stopped = false;  // by the step observer
    std::string message;
};

struct IntegrateOptions {
    double rtol = 1e-9;
    double atol = 1e-9;
    double h0 = 0;  // 0: automatic
    double max_step = 0;  // 0: unlimited
    double blowup = 1e8;
    long max_steps = 10000000;
    bool record = true;
};

/// Adaptive Dormand-Prince 5(4). `observer` sees every accepted step and may stop integration.
inline Trajectory integrate(const VectorField& f, State y, double t0, double t_end, const IntegrateOptions& opt = {},
                            const std::function<bool(const DenseStep&)>& observer = nullptr) {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;
    size_t n = y.size();
    Trajectory tr;
    if (opt.record) {
        tr.t.push_back(t0);
        tr.y.push_back(y);
    }
    if (t_end == t0) return tr;
    double dir = t_end > t0 ? 1.0 : -1.0;
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), yn(n);
    double t = t0;
    f(t, y, k1);
    double h = opt.h0;
    if (h <= 0) {
        double d0 = 0, d1 = 0;
        for (size_t i = 0; i < n; ++i) {
            double sc = opt.atol + opt.rtol * std::abs(y[i]);
            d0 += std::pow(y[i] / sc, 2);
            d1 += std::pow(k1[i] / sc, 2);
        }
        d0 = std::sqrt(d0 / std::max<size_t>(n, 1));
        d1 = std::sqrt(d1 / std::max<size_t>(n, 1));
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, std::abs(t_end - t0));
    }
    long steps = 0;
    while (dir * (t_end - t) > 0) {
        if (++steps > opt.max_steps) {
            tr.message = "maximum step count reached";
            break;
        }
        if (opt.max_step > 0) h = std::min(h, opt.max_step);
        if (dir * (t + dir * h - t_end) > 0) h = std::abs(t_end - t);
        double hs = dir * h;
        auto axpy = [&](std::initializer_list<std::pair<double, const State*>> terms) {
            for (size_t i = 0; i < n; ++i) {
                double s = y[i];
                for (auto& [c, v] : terms) s += hs * c * (*v)[i];
                tmp[i] = s;
            }
        };
        axpy({{a21, &k1}});
        f(t + c2 * hs, tmp, k2);
        axpy({{a31, &k1}, {a32, &k2}});
        f(t + c3 * hs, tmp, k3);
        axpy({{a41, &k1}, {a42, &k2}, {a43, &k3}});
        f(t + c4 * hs, tmp, k4);
        axpy({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        f(t + c5 * hs, tmp, k5);
        axpy({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        f(t + hs, tmp, k6);
        for (size_t i = 0; i < n; ++i)
            yn[i] = y[i] + hs * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(t + hs, yn, k7);
        double err = 0;
        for (size_t i = 0; i < n; ++i) {
            double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / std::max<size_t>(n, 1));
        if (!std::isfinite(err)) {
            h *= 0.1;
            if (h < 1e-300) {
                tr.blew_up = true;
                tr.message = "non-finite state";
                break;
            }
            continue;
        }
        if (err <= 1.0) {
            DenseStep ds{t, hs, y, {k1, k2, k3, k4, k5, k6, k7}};
            t += hs;
            y = yn;
            k1 = k7;
            if (opt.record) {
                tr.t.push_back(t);
                tr.y.push_back(y);
            }
            double nrm = 0;
            for (double v : y) nrm = std::max(nrm, std::abs(v));
            if (nrm > opt.blowup) {
                tr.blew_up = true;
                tr.message = "state norm exceeded blow-up threshold";
                break;
            }
            if (observer && observer(ds)) {
                tr.stopped = true;
                break;
            }
            double fac = err == 0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    if (!opt.record) {
        tr.t.push_back(t);
        tr.y.push_back(y);
    }
    return tr;
}

}  // namespace frontlab
