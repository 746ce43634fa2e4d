// Adaptive embedded Runge-Kutta integration (Dormand-Prince 8(5,3), the
// classic 12-stage pair) over complex state vectors. The driver integrates
// leg by leg between caller-supplied stop points and never steps across one,
// which keeps the order intact for piecewise-smooth right-hand sides; the
// step size persists across legs. Error control is per unit step with
// atol = rtol = tol.

#ifndef SLQ_RK_HPP
#define SLQ_RK_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include "slq/numerics.hpp"

namespace slq {

struct StepSizeUnderflow : std::runtime_error {
    explicit StepSizeUnderflow(double where)
        : std::runtime_error("step-size underflow at x = " +
                             std::to_string(where)),
          x(where) {}
    double x;
};

namespace dop853 {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

}  // namespace dop853

template <std::size_t N>
using RkState = std::array<cplx, N>;

// Integrates y' = rhs(x, y, dy/dx) from xa to xb (xa < xb), landing on xb
// exactly. `h` carries the step size across calls (pass 0 on the first leg).
template <std::size_t N, typename RHS>
void dop853_leg(RHS&& rhs, double xa, double xb, RkState<N>& y, double tol,
                double& h) {
    namespace t = dop853;
    if (!(xb > xa)) return;
    const double atol = tol, rtol = tol;

    RkState<N> k1, k2, k3, k4, k5, k6, k7, k8, k9, k10, k11, k12, yw, dy;
    double x = xa;
    rhs(x, y, k1);

    if (h <= 0.0) {
        // standard two-evaluation starting-step heuristic
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::abs(y[i]);
            d0 += std::norm(y[i]) / (sc * sc);
            d1 += std::norm(k1[i]) / (sc * sc);
        }
        double h0 = (d0 > 1e-10 && d1 > 1e-10)
                        ? 0.01 * std::sqrt(d0 / d1)
                        : 1e-6;
        h0 = std::min(h0, xb - xa);
        for (std::size_t i = 0; i < N; ++i) yw[i] = y[i] + h0 * k1[i];
        rhs(x + h0, yw, k2);
        double d2 = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::abs(y[i]);
            d2 += std::norm(k2[i] - k1[i]) / (sc * sc);
        }
        d2 = std::sqrt(d2) / h0;
        const double dm = std::max(std::sqrt(d1), d2);
        const double h1 =
            dm > 1e-15 ? std::pow(0.01 / dm, 1.0 / 8.0) : std::max(1e-6, h0 * 1e-3);
        h = std::min({100.0 * h0, h1, xb - xa});
    }

    bool rejected = false;
    for (long step = 0;; ++step) {
        if (step > 200000000L)
            throw std::runtime_error("dop853: step budget exhausted");
        if (h < 64.0 * 2.220446049250313e-16 * std::max(1.0, std::abs(x)))
            throw StepSizeUnderflow(x);
        bool last = false;
        const double h_full = h;
        if (x + h >= xb - 1e-14 * std::max(1.0, std::abs(xb))) {
            h = xb - x;
            last = true;
        }

        auto stage = [&](double c, const auto&... terms) {
            (void)c;
            for (std::size_t i = 0; i < N; ++i) {
                cplx acc = 0.0;
                ((acc += terms.first * terms.second[i]), ...);
                yw[i] = y[i] + h * acc;
            }
        };
        using P = std::pair<double, const RkState<N>&>;
        stage(t::c2, P{t::a21, k1});
        rhs(x + t::c2 * h, yw, k2);
        stage(t::c3, P{t::a31, k1}, P{t::a32, k2});
        rhs(x + t::c3 * h, yw, k3);
        stage(t::c4, P{t::a41, k1}, P{t::a43, k3});
        rhs(x + t::c4 * h, yw, k4);
        stage(t::c5, P{t::a51, k1}, P{t::a53, k3}, P{t::a54, k4});
        rhs(x + t::c5 * h, yw, k5);
        stage(t::c6, P{t::a61, k1}, P{t::a64, k4}, P{t::a65, k5});
        rhs(x + t::c6 * h, yw, k6);
        stage(t::c7, P{t::a71, k1}, P{t::a74, k4}, P{t::a75, k5}, P{t::a76, k6});
        rhs(x + t::c7 * h, yw, k7);
        stage(t::c8, P{t::a81, k1}, P{t::a84, k4}, P{t::a85, k5}, P{t::a86, k6},
              P{t::a87, k7});
        rhs(x + t::c8 * h, yw, k8);
        stage(t::c9, P{t::a91, k1}, P{t::a94, k4}, P{t::a95, k5}, P{t::a96, k6},
              P{t::a97, k7}, P{t::a98, k8});
        rhs(x + t::c9 * h, yw, k9);
        stage(t::c10, P{t::a101, k1}, P{t::a104, k4}, P{t::a105, k5},
              P{t::a106, k6}, P{t::a107, k7}, P{t::a108, k8}, P{t::a109, k9});
        rhs(x + t::c10 * h, yw, k10);
        stage(t::c11, P{t::a111, k1}, P{t::a114, k4}, P{t::a115, k5},
              P{t::a116, k6}, P{t::a117, k7}, P{t::a118, k8}, P{t::a119, k9},
              P{t::a1110, k10});
        rhs(x + t::c11 * h, yw, k11);
        stage(1.0, P{t::a121, k1}, P{t::a124, k4}, P{t::a125, k5},
              P{t::a126, k6}, P{t::a127, k7}, P{t::a128, k8}, P{t::a129, k9},
              P{t::a1210, k10}, P{t::a1211, k11});
        rhs(x + h, yw, k12);

        double err5 = 0.0, err3 = 0.0;
        bool finite = true;
        for (std::size_t i = 0; i < N; ++i) {
            dy[i] = t::b1 * k1[i] + t::b6 * k6[i] + t::b7 * k7[i] +
                    t::b8 * k8[i] + t::b9 * k9[i] + t::b10 * k10[i] +
                    t::b11 * k11[i] + t::b12 * k12[i];
            yw[i] = y[i] + h * dy[i];
            if (!is_finite(yw[i])) finite = false;
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(yw[i]));
            const cplx e3 =
                dy[i] - t::bhh1 * k1[i] - t::bhh2 * k9[i] - t::bhh3 * k12[i];
            const cplx e5 = t::er1 * k1[i] + t::er6 * k6[i] + t::er7 * k7[i] +
                            t::er8 * k8[i] + t::er9 * k9[i] +
                            t::er10 * k10[i] + t::er11 * k11[i] +
                            t::er12 * k12[i];
            err3 += std::norm(e3) / (sc * sc);
            err5 += std::norm(e5) / (sc * sc);
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) deno = 1.0;
        double err = h * err5 / std::sqrt(static_cast<double>(N) * deno);
        if (!finite || !std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            x = last ? xb : x + h;
            y = yw;
            double scale =
                err == 0.0 ? 6.0
                           : std::clamp(0.9 * std::pow(err, -0.125), 1.0 / 3.0,
                                        6.0);
            if (rejected) scale = std::min(scale, 1.0);
            if (last) {
                // clipping to the leg end must not shrink the carried step
                h = std::max(h_full, h * scale);
                return;
            }
            h *= scale;
            rejected = false;
            rhs(x, y, k1);
        } else {
            h *= std::max(0.9 * std::pow(err, -0.125), 1.0 / 3.0);
            rejected = true;
        }
    }
}

}  // namespace slq

#endif
