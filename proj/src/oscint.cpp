#include "slq/oscint.hpp"

#include <cmath>
#include <stdexcept>

namespace slq {

namespace detail {

namespace {
// 12-point Gauss-Legendre on [0,1]
constexpr int gl_n = 12;
constexpr double gl_x[gl_n] = {
    0.00921968287664037465472545, 0.04794137181476257166076706,
    0.11504866290284765648155308, 0.20634102285669127635164879,
    0.31608425050090990312365423, 0.43738329574426554226377931,
    0.56261670425573445773622069, 0.68391574949909009687634577,
    0.79365897714330872364835121, 0.88495133709715234351844692,
    0.95205862818523742833923294, 0.99078031712335962534527455};
constexpr double gl_w[gl_n] = {
    0.02358766819325591359730798, 0.05346966299765921548012735,
    0.08003916427167311316732626, 0.10158371336153296087453222,
    0.11674626826917740438042494, 0.12457352290670799323731124,
    0.12457352290670799323731124, 0.11674626826917740438042494,
    0.10158371336153296087453222, 0.08003916427167311316732626,
    0.05346966299765921548012735, 0.02358766819325591359730798};
}  // namespace

cplx exp_moment(int k, double h, cplx w) {
    if (h == 0.0) return 0.0;
    const cplx wh = w * h;
    if (std::abs(wh) < 0.5) {
        // E_k = h^{k+1} sum_j (wh)^j / (j! (k+j+1))
        cplx term = 1.0;
        cplx sum = 1.0 / static_cast<double>(k + 1);
        for (int j = 1; j <= 24; ++j) {
            term *= wh / static_cast<double>(j);
            sum += term / static_cast<double>(k + j + 1);
        }
        return std::pow(h, k + 1) * sum;
    }
    const cplx ewh = std::exp(wh);
    cplx e = (ewh - 1.0) / w;
    double hk = 1.0;
    for (int j = 1; j <= k; ++j) {
        hk *= h;
        e = (hk * ewh - static_cast<double>(j) * e) / w;
    }
    return e;
}

cplx poly_exp_integral(const cplx coef[4], int degree, double h, cplx w) {
    cplx acc = 0.0;
    for (int k = 0; k <= degree; ++k)
        if (coef[k] != 0.0) acc += coef[k] * exp_moment(k, h, w);
    return acc;
}

}  // namespace detail

namespace {

using detail::exp_moment;

struct SegmentLocal {
    double p = 0.0;  // left endpoint
    cplx d0, d1;     // u(p + s) = d0 + d1 s
};

// int_0^h (d0 + d1 s) e^{v s} ds
cplx lin_exp(const SegmentLocal& sl, double h, cplx v) {
    return sl.d0 * exp_moment(0, h, v) + sl.d1 * exp_moment(1, h, v);
}

// int_0^h (d0 + d1 s)^2 e^{v s} ds
cplx quad_exp(const SegmentLocal& sl, double h, cplx v) {
    return sl.d0 * sl.d0 * exp_moment(0, h, v) +
           2.0 * sl.d0 * sl.d1 * exp_moment(1, h, v) +
           sl.d1 * sl.d1 * exp_moment(2, h, v);
}

struct SegValues {
    cplx b, a, A, B, U, w;
};

// b on the segment, as a function of the local offset s, given the
// accumulated prefix b_p at the left endpoint
cplx b_local(const SegmentLocal& sl, cplx bp, cplx phi_p, cplx phi_m, cplx w,
             double s) {
    const cplx jp = lin_exp(sl, s, w);
    const cplx jm = lin_exp(sl, s, -w);
    return bp + (phi_p * jp - phi_m * jm) / cplx(0.0, 2.0);
}

SegValues segment_values(const SegmentLocal& sl, double h, cplx z, cplx bp) {
    SegValues out{};
    if (!(h > 0.0)) return out;
    const cplx w = cplx(0.0, 2.0) * z;  // exponent: e^{w s} = e^{2 i z s}
    const cplx phi_p = std::exp(w * sl.p);
    const cplx phi_m = std::exp(-w * sl.p);
    const cplx jp = lin_exp(sl, h, w), jm = lin_exp(sl, h, -w);
    const cplx qp = quad_exp(sl, h, w), qm = quad_exp(sl, h, -w);
    const cplx inv_2i = cplx(0.0, -0.5);  // 1/(2i)

    out.b = (phi_p * jp - phi_m * jm) * inv_2i;
    out.a = (phi_p * jp + phi_m * jm) * 0.5;
    out.B = (phi_p * qp - phi_m * qm) * inv_2i;
    out.A = (phi_p * qp + phi_m * qm) * 0.5;
    out.U = sl.d0 * sl.d0 * h + sl.d0 * sl.d1 * h * h +
            sl.d1 * sl.d1 * h * h * h / 3.0;

    // w-functional: int_0^h u cos(2z t) b(t) dt over the segment
    if (std::abs(w) * h >= 0.5) {
        // exponential-basis reduction; divisions by w are well conditioned
        const cplx Kp = sl.d0 / w - sl.d1 / (w * w);
        const cplx Km = -sl.d0 / w - sl.d1 / (w * w);
        const cplx i2 = cplx(0.0, 2.0);
        const cplx P0 = phi_p * Kp / i2, P1 = phi_p * (sl.d1 / w) / i2;
        const cplx Q0 = -phi_m * Km / i2, Q1 = phi_m * (sl.d1 / w) / i2;
        const cplx K = bp - (phi_p * Kp - phi_m * Km) / i2;
        const cplx gp = 0.5 * phi_p, gm = 0.5 * phi_m;

        auto mul_lin = [](cplx a0, cplx a1, cplx b0, cplx b1, cplx out[4]) {
            out[0] = a0 * b0;
            out[1] = a0 * b1 + a1 * b0;
            out[2] = a1 * b1;
            out[3] = 0.0;
        };
        cplx poly[4], poly2[4];
        cplx acc = 0.0;
        // e^{w s}: g+ K u(s)
        poly[0] = gp * K * sl.d0;
        poly[1] = gp * K * sl.d1;
        poly[2] = poly[3] = 0.0;
        acc += detail::poly_exp_integral(poly, 1, h, w);
        // e^{2w s}: g+ u(s) (P0 + P1 s)
        mul_lin(sl.d0, sl.d1, P0, P1, poly);
        for (cplx& c : poly) c *= gp;
        acc += detail::poly_exp_integral(poly, 2, h, 2.0 * w);
        // e^{0}: g+ u(s)(Q0+Q1 s) + g- u(s)(P0+P1 s)
        mul_lin(sl.d0, sl.d1, Q0, Q1, poly);
        mul_lin(sl.d0, sl.d1, P0, P1, poly2);
        for (int k = 0; k < 4; ++k) poly[k] = gp * poly[k] + gm * poly2[k];
        acc += detail::poly_exp_integral(poly, 2, h, 0.0);
        // e^{-w s}: g- K u(s)
        poly[0] = gm * K * sl.d0;
        poly[1] = gm * K * sl.d1;
        poly[2] = poly[3] = 0.0;
        acc += detail::poly_exp_integral(poly, 1, h, -w);
        // e^{-2w s}: g- u(s)(Q0+Q1 s)
        mul_lin(sl.d0, sl.d1, Q0, Q1, poly);
        for (cplx& c : poly) c *= gm;
        acc += detail::poly_exp_integral(poly, 2, h, -2.0 * w);
        out.w = acc;
    } else {
        // non-oscillatory on this segment: fixed-order quadrature on the
        // pointwise-stable integrand
        cplx acc = 0.0;
        for (int i = 0; i < detail::gl_n; ++i) {
            const double s = h * detail::gl_x[i];
            const double t = sl.p + s;
            const cplx u = sl.d0 + sl.d1 * s;
            const cplx bt = b_local(sl, bp, phi_p, phi_m, w, s);
            acc += detail::gl_w[i] * u * std::cos(2.0 * z * t) * bt;
        }
        out.w = acc * h;
    }
    return out;
}

double check_x_range(double x) {
    if (x < -1e-12 || x > pi + 1e-12)
        throw std::domain_error("oscillatory integral: x outside [0, pi]");
    return std::clamp(x, 0.0, pi);
}

}  // namespace

OscEvaluator::OscEvaluator(const PotentialPrimitive& p, cplx z)
    : p_(&p), z_(z) {
    const auto& mesh = p.mesh();
    const std::size_t m = p.segment_count();
    bpre_.assign(m + 1, 0.0);
    apre_.assign(m + 1, 0.0);
    Apre_.assign(m + 1, 0.0);
    Bpre_.assign(m + 1, 0.0);
    Upre_.assign(m + 1, 0.0);
    wpre_.assign(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& seg = p.segments()[i];
        SegmentLocal sl{mesh[i], seg.c0 + seg.c1 * mesh[i], seg.c1};
        const SegValues v =
            segment_values(sl, mesh[i + 1] - mesh[i], z, bpre_[i]);
        bpre_[i + 1] = bpre_[i] + v.b;
        apre_[i + 1] = apre_[i] + v.a;
        Apre_[i + 1] = Apre_[i] + v.A;
        Bpre_[i + 1] = Bpre_[i] + v.B;
        Upre_[i + 1] = Upre_[i] + v.U;
        wpre_[i + 1] = wpre_[i] + v.w;
    }
}

OscEvaluator::Partial OscEvaluator::partial(std::size_t seg, double h) const {
    const auto& s = p_->segments()[seg];
    const double p0 = p_->mesh()[seg];
    SegmentLocal sl{p0, s.c0 + s.c1 * p0, s.c1};
    const SegValues v = segment_values(sl, h, z_, bpre_[seg]);
    return {v.b, v.a, v.A, v.B, v.U, v.w};
}

OscIntegrals OscEvaluator::eval(double x) const {
    OscIntegrals out;
    out.z = z_;
    out.x = check_x_range(x);
    const std::size_t j = p_->segment_index(out.x);
    const Partial part = partial(j, out.x - p_->mesh()[j]);
    out.b = bpre_[j] + part.b;
    out.a = apre_[j] + part.a;
    out.A = Apre_[j] + part.A;
    out.B = Bpre_[j] + part.B;
    out.U = Upre_[j] + part.U;
    out.w = wpre_[j] + part.w;
    if (z_ != 0.0)
        out.upsilon =
            out.b + 0.5 * out.U / z_ + 2.0 * out.w - 0.5 * out.A / z_;
    else
        out.upsilon = cplx(std::nan(""), std::nan(""));
    return out;
}

std::pair<cplx, cplx> first_order(double x, cplx z,
                                  const PotentialPrimitive& p) {
    const OscIntegrals v = OscEvaluator(p, z).eval(x);
    return {v.b, v.a};
}

SecondOrder second_order(double x, cplx z, const PotentialPrimitive& p) {
    const OscIntegrals v = OscEvaluator(p, z).eval(x);
    return {v.A, v.B, v.U};
}

cplx double_w(double x, cplx z, const PotentialPrimitive& p) {
    return OscEvaluator(p, z).eval(x).w;
}

cplx upsilon(double x, cplx z, const PotentialPrimitive& p) {
    if (z == 0.0) throw std::domain_error("upsilon: z must be nonzero");
    return OscEvaluator(p, z).eval(x).upsilon;
}

UpsilonPair upsilon_sup(cplx z, const PotentialPrimitive& p,
                        double grid_density) {
    if (z == 0.0) throw std::domain_error("upsilon_sup: z must be nonzero");
    const OscEvaluator ev(p, z);
    const double az = std::abs(z);
    const std::size_t npts = std::max<std::size_t>(
        64, static_cast<std::size_t>(std::ceil(grid_density * (1.0 + az))));
    const std::vector<double> grid = merged_grid(p.mesh(), npts);

    auto full_term = [&](double x, double& f, double& f1) {
        const OscIntegrals v = ev.eval(x);
        f1 = std::abs(v.b) + std::abs(v.a);
        f = f1 + 2.0 * std::abs(v.w) + 0.5 * std::abs(v.A) / az;
    };

    double sup_f = 0.0, sup_f1 = 0.0;
    std::size_t arg_f = 0, arg_f1 = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double f, f1;
        full_term(grid[i], f, f1);
        if (f > sup_f) {
            sup_f = f;
            arg_f = i;
        }
        if (f1 > sup_f1) {
            sup_f1 = f1;
            arg_f1 = i;
        }
    }
    // one refinement pass around each argmax
    auto refine = [&](std::size_t idx, bool first_only, double& sup) {
        const double lo = grid[idx == 0 ? 0 : idx - 1];
        const double hi = grid[std::min(idx + 1, grid.size() - 1)];
        for (int k = 1; k < 32; ++k) {
            const double x = lo + (hi - lo) * k / 32.0;
            double f, f1;
            full_term(x, f, f1);
            sup = std::max(sup, first_only ? f1 : f);
        }
    };
    refine(arg_f, false, sup_f);
    refine(arg_f1, true, sup_f1);

    const double tail = p.l2_norm() * p.l2_norm() / az;
    return {sup_f + tail, sup_f1 + tail};
}

DiscreteCoefficients discrete(int n, const PotentialPrimitive& p) {
    if (n < 1) throw std::domain_error("discrete: n must be >= 1");
    DiscreteCoefficients d;
    d.n = n;
    const OscIntegrals full = OscEvaluator(p, static_cast<double>(n)).eval(pi);
    d.b2n = full.b;
    d.a2n = full.a;
    d.A2n = full.A;
    d.B2n = full.B;
    d.w2n = full.w;
    d.U_pi = full.U;
    const OscIntegrals half = OscEvaluator(p, 0.5 * n).eval(pi);
    d.bn = half.b;
    d.an = half.a;
    d.An = half.A;
    d.Bn = half.B;
    d.mu_n = -d.b2n / pi + d.A2n / (2.0 * pi * n) - 2.0 * d.w2n / pi -
             d.U_pi / (2.0 * pi * n);
    return d;
}

WeightedTailIntegrals weighted_tail_integrals(const PotentialPrimitive& p,
                                              int n) {
    if (n < 1)
        throw std::domain_error("weighted_tail_integrals: n must be >= 1");
    WeightedTailIntegrals out;
    const cplx w = cplx(0.0, 2.0 * n);
    const auto& mesh = p.mesh();
    for (std::size_t i = 0; i < p.segment_count(); ++i) {
        const double a = mesh[i], h = mesh[i + 1] - a;
        const auto& seg = p.segments()[i];
        const cplx u0 = seg.c0 + seg.c1 * a;
        const double r0 = u0.real(), r1 = seg.c1.real();
        const double i0 = u0.imag(), i1 = seg.c1.imag();
        const double t0 = pi - a;  // tail weight (pi - t) = t0 - s
        const cplx phase = std::exp(w * a);

        auto tail_lin = [&](double g0, double g1, double outp[3]) {
            // (t0 - s)(g0 + g1 s)
            outp[0] = t0 * g0;
            outp[1] = t0 * g1 - g0;
            outp[2] = -g1;
        };
        auto tail_quad = [&](double q0, double q1, double q2, double outp[4]) {
            // (t0 - s)(q0 + q1 s + q2 s^2)
            outp[0] = t0 * q0;
            outp[1] = t0 * q1 - q0;
            outp[2] = t0 * q2 - q1;
            outp[3] = -q2;
        };
        auto integrate = [&](const double* c, int deg) {
            cplx poly[4] = {0.0, 0.0, 0.0, 0.0};
            for (int k = 0; k <= deg; ++k) poly[k] = c[k];
            return phase * detail::poly_exp_integral(poly, deg, h, w);
        };

        double c3[3], c4[4];
        tail_lin(r0, r1, c3);
        out.W1R += integrate(c3, 2).real();  // (pi-t) u_R cos(2nt)
        tail_lin(i0, i1, c3);
        out.W1I += integrate(c3, 2).real();
        // u_R^2 - u_I^2 and u_R u_I as quadratics in s
        tail_quad(r0 * r0 - i0 * i0, 2.0 * (r0 * r1 - i0 * i1),
                  r1 * r1 - i1 * i1, c4);
        out.W2R += integrate(c4, 3).imag();  // sin component
        tail_quad(r0 * i0, r0 * i1 + r1 * i0, r1 * i1, c4);
        out.W2I += integrate(c4, 3).imag();
    }
    return out;
}

}  // namespace slq
