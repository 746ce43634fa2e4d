#include "slq/odesolve.hpp"

#include <cmath>

namespace slq {

namespace {

struct Event {
    double x;
    long grid_index;  // -1: mesh alignment only
};

std::vector<Event> build_events(const PotentialPrimitive& p,
                                const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0 ||
        std::abs(grid.back() - pi) > 1e-12)
        throw std::invalid_argument("trace grid must run from 0 to pi");
    const auto& mesh = p.mesh();
    std::vector<Event> ev;
    ev.reserve(grid.size() + mesh.size());
    std::size_t gi = 1, mi = 1;
    while (gi < grid.size() || mi + 1 < mesh.size()) {
        const double gx = gi < grid.size() ? grid[gi] : 2.0 * pi;
        const double mx = mi + 1 < mesh.size() ? mesh[mi] : 2.0 * pi;
        if (std::abs(gx - mx) <= 1e-14) {
            ev.push_back({gx, static_cast<long>(gi)});
            ++gi;
            ++mi;
        } else if (gx < mx) {
            if (!(gx > (ev.empty() ? 0.0 : ev.back().x)))
                throw std::invalid_argument("trace grid must be increasing");
            ev.push_back({gx, static_cast<long>(gi)});
            ++gi;
        } else {
            ev.push_back({mx, -1});
            ++mi;
        }
    }
    return ev;
}

// walk the event list, rebuilding the segment-local right-hand side per leg;
// emit(grid_index, state) fires at every requested grid point
template <std::size_t N, typename MakeRhs, typename Emit>
void run_legs(const PotentialPrimitive& p, const std::vector<double>& grid,
              double tol, RkState<N>& y, MakeRhs&& make_rhs, Emit&& emit) {
    emit(0, y);
    const std::vector<Event> events = build_events(p, grid);
    double x = 0.0, h = 0.0;
    for (const Event& e : events) {
        const auto seg = p.segment_index(0.5 * (x + e.x));
        auto rhs = make_rhs(p.segments()[seg]);
        dop853_leg(rhs, x, e.x, y, tol, h);
        x = e.x;
        if (e.grid_index >= 0) emit(static_cast<std::size_t>(e.grid_index), y);
    }
}

std::vector<double> default_grid(const PotentialPrimitive& p) {
    return merged_grid(p.mesh(), 256);
}

bool use_rotated(cplx lambda, Formulation f) {
    switch (f) {
        case Formulation::original:
            return false;
        case Formulation::rotated:
            return true;
        default:
            return std::abs(lambda) >= 1.0;
    }
}

template <bool WithVariational>
struct QuasiResultFill {
    SolutionTrace* trace;
    bool rotated;
    cplx z;

    void operator()(std::size_t i, const RkState<WithVariational ? 4 : 2>& y) const {
        if (rotated) {
            trace->omega[i] = y[0] / z;
            trace->omega_q1[i] = y[1];
            if constexpr (WithVariational) {
                trace->omega_dl[i] = y[2] / z - y[0] / (2.0 * z * z * z);
                trace->omega_dl_q1[i] = y[3];
            }
        } else {
            trace->omega[i] = y[0];
            trace->omega_q1[i] = y[1];
            if constexpr (WithVariational) {
                trace->omega_dl[i] = y[2];
                trace->omega_dl_q1[i] = y[3];
            }
        }
    }
};

}  // namespace

SolutionTrace integrate_quasi(cplx lambda, const PotentialPrimitive& p,
                              double tol, std::vector<double> grid) {
    if (grid.empty()) grid = default_grid(p);
    SolutionTrace tr;
    tr.lambda = lambda;
    tr.grid = std::move(grid);
    tr.omega.resize(tr.grid.size());
    tr.omega_q1.resize(tr.grid.size());
    const bool rot = use_rotated(lambda, Formulation::automatic);
    const cplx z = std::sqrt(lambda);
    QuasiResultFill<false> fill{&tr, rot, z};
    RkState<2> y;
    if (rot) {
        y = {cplx(0.0), cplx(1.0)};
        run_legs<2>(
            p, tr.grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, z](double x, const RkState<2>& v, RkState<2>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    d[0] = u * v[0] + z * v[1];
                    d[1] = -(z + u * u / z) * v[0] - u * v[1];
                };
            },
            fill);
    } else {
        y = {cplx(0.0), cplx(1.0)};
        run_legs<2>(
            p, tr.grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, lambda](double x, const RkState<2>& v,
                                   RkState<2>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    d[0] = u * v[0] + v[1];
                    d[1] = -(lambda + u * u) * v[0] - u * v[1];
                };
            },
            fill);
    }
    return tr;
}

SolutionTrace integrate_variational(cplx lambda, const PotentialPrimitive& p,
                                    double tol, std::vector<double> grid) {
    if (grid.empty()) grid = default_grid(p);
    SolutionTrace tr;
    tr.lambda = lambda;
    tr.grid = std::move(grid);
    const std::size_t n = tr.grid.size();
    tr.omega.resize(n);
    tr.omega_q1.resize(n);
    tr.omega_dl.resize(n);
    tr.omega_dl_q1.resize(n);
    const bool rot = use_rotated(lambda, Formulation::automatic);
    const cplx z = std::sqrt(lambda);
    QuasiResultFill<true> fill{&tr, rot, z};
    RkState<4> y = {cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0)};
    if (rot) {
        run_legs<4>(
            p, tr.grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, z](double x, const RkState<4>& v, RkState<4>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    const cplx u2 = u * u;
                    const cplx diag = z + u2 / z;
                    d[0] = u * v[0] + z * v[1];
                    d[1] = -diag * v[0] - u * v[1];
                    d[2] = u * v[2] + z * v[3] + v[1] / (2.0 * z);
                    d[3] = -diag * v[2] - u * v[3] -
                           (1.0 - u2 / (z * z)) / (2.0 * z) * v[0];
                };
            },
            fill);
    } else {
        run_legs<4>(
            p, tr.grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, lambda](double x, const RkState<4>& v,
                                   RkState<4>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    const cplx coef = lambda + u * u;
                    d[0] = u * v[0] + v[1];
                    d[1] = -coef * v[0] - u * v[1];
                    d[2] = u * v[2] + v[3];
                    d[3] = -coef * v[2] - u * v[3] - v[0];
                };
            },
            fill);
    }
    return tr;
}

SolutionTrace integrate_pruefer(cplx lambda, const PotentialPrimitive& p,
                                double tol, std::vector<double> grid) {
    if (grid.empty()) grid = default_grid(p);
    SolutionTrace tr;
    tr.lambda = lambda;
    tr.grid = std::move(grid);
    const std::size_t n = tr.grid.size();
    tr.theta.resize(n);
    tr.r.resize(n);
    const cplx z = std::sqrt(lambda);
    if (z == 0.0)
        throw std::domain_error("integrate_pruefer: lambda must be nonzero");
    RkState<2> y = {cplx(0.0), cplx(0.0)};  // (theta, log r)
    try {
        run_legs<2>(
            p, tr.grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, z](double x, const RkState<2>& v, RkState<2>& d) {
                    if (std::abs(v[0].imag()) > 60.0)
                        throw ThetaExistenceError(
                            x, "theta-existence threshold violated (blow-up)");
                    const cplx u = s.c0 + s.c1 * x;
                    const cplx u2 = u * u;
                    const cplx c2t = std::cos(2.0 * v[0]);
                    const cplx s2t = std::sin(2.0 * v[0]);
                    d[0] = z + u2 / z * 0.5 * (1.0 - c2t) + u * s2t;
                    d[1] = -(u * c2t + 0.5 * u2 / z * s2t);
                };
            },
            [&](std::size_t i, const RkState<2>& v) {
                tr.theta[i] = v[0];
                tr.r[i] = std::exp(v[1]);
            });
    } catch (const StepSizeUnderflow& e) {
        throw ThetaExistenceError(
            e.x, "theta-existence threshold violated (step underflow)");
    }
    return tr;
}

CharValues characteristic_values(cplx lambda, const PotentialPrimitive& p,
                                 double tol, Formulation f) {
    const bool rot = use_rotated(lambda, f);
    const cplx z = std::sqrt(lambda);
    const std::vector<double> grid = {0.0, pi};
    CharValues out;
    if (rot) {
        RkState<4> y = {cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0)};
        run_legs<4>(
            p, grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, z](double x, const RkState<4>& v, RkState<4>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    const cplx u2 = u * u;
                    const cplx diag = z + u2 / z;
                    d[0] = u * v[0] + z * v[1];
                    d[1] = -diag * v[0] - u * v[1];
                    d[2] = u * v[2] + z * v[3] + v[1] / (2.0 * z);
                    d[3] = -diag * v[2] - u * v[3] -
                           (1.0 - u2 / (z * z)) / (2.0 * z) * v[0];
                };
            },
            [&](std::size_t i, const RkState<4>& v) {
                if (i == 1) {
                    out.omega_pi = v[0] / z;
                    out.omega_q1_pi = v[1];
                    out.omega_dl_pi = v[2] / z - v[0] / (2.0 * z * z * z);
                }
            });
    } else {
        RkState<4> y = {cplx(0.0), cplx(1.0), cplx(0.0), cplx(0.0)};
        run_legs<4>(
            p, grid, tol, y,
            [&](const PotentialPrimitive::Segment& s) {
                return [s, lambda](double x, const RkState<4>& v,
                                   RkState<4>& d) {
                    const cplx u = s.c0 + s.c1 * x;
                    const cplx coef = lambda + u * u;
                    d[0] = u * v[0] + v[1];
                    d[1] = -coef * v[0] - u * v[1];
                    d[2] = u * v[2] + v[3];
                    d[3] = -coef * v[2] - u * v[3] - v[0];
                };
            },
            [&](std::size_t i, const RkState<4>& v) {
                if (i == 1) {
                    out.omega_pi = v[0];
                    out.omega_q1_pi = v[1];
                    out.omega_dl_pi = v[2];
                }
            });
    }
    return out;
}

double estimate_pruefer_threshold(const PotentialPrimitive& p, double tol) {
    const std::vector<double> coarse = merged_grid(p.mesh(), 16);
    for (double lam = 1.0; lam <= 1048576.0; lam *= 2.0) {
        try {
            integrate_pruefer(lam, p, tol, coarse);
            return lam;
        } catch (const ThetaExistenceError&) {
            continue;
        }
    }
    throw std::runtime_error(
        "phase equation failed to integrate for any lambda up to 2^20");
}

}  // namespace slq
