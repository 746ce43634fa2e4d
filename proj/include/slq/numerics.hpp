// Shared numeric utilities: complex alias, composite Gauss-Legendre
// quadrature over a breakpoint grid, grid-sup estimation with a parabolic
// refinement pass, least-squares trend statistics and a small thread pool
// helper with deterministic per-index output slots.

#ifndef SLQ_NUMERICS_HPP
#define SLQ_NUMERICS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace slq {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

inline bool is_finite(cplx v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}

// 4-point Gauss-Legendre nodes/weights on [0,1].
struct GaussRule4 {
    static constexpr int n = 4;
    static constexpr double node[4] = {
        0.069431844202973712388026755553,
        0.330009478207571867598667120448,
        0.669990521792428132401332879552,
        0.930568155797026287611973244447};
    static constexpr double weight[4] = {
        0.173927422568726928686531974611,
        0.326072577431273071313468025389,
        0.326072577431273071313468025389,
        0.173927422568726928686531974611};
};

// Quadrature grid over [a, b]: breakpoints plus per-interval Gauss nodes.
// all_points() lists breakpoints and interior nodes in increasing order, so
// a function sampled on it supports both integration and sup estimates.
class QuadGrid {
  public:
    QuadGrid() = default;
    explicit QuadGrid(std::vector<double> breakpoints);

    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& breakpoints() const { return breaks_; }

    // Integrate sampled values (one per point, same order as points()).
    template <typename T>
    T integrate(const std::vector<T>& values) const {
        if (values.size() != points_.size())
            throw std::invalid_argument("QuadGrid: sample count mismatch");
        T acc{};
        for (std::size_t i = 0; i < quad_index_.size(); ++i)
            acc += quad_weight_[i] * values[quad_index_[i]];
        return acc;
    }

    template <typename T, typename F>
    T integrate_transformed(const std::vector<T>& values, F&& f) const {
        if (values.size() != points_.size())
            throw std::invalid_argument("QuadGrid: sample count mismatch");
        auto acc = f(values[quad_index_[0]]) * quad_weight_[0];
        for (std::size_t i = 1; i < quad_index_.size(); ++i)
            acc += quad_weight_[i] * f(values[quad_index_[i]]);
        return acc;
    }

  private:
    std::vector<double> breaks_;
    std::vector<double> points_;
    std::vector<std::size_t> quad_index_;
    std::vector<double> quad_weight_;
};

inline QuadGrid::QuadGrid(std::vector<double> breakpoints) {
    if (breakpoints.size() < 2)
        throw std::invalid_argument("QuadGrid: need at least two breakpoints");
    breaks_ = std::move(breakpoints);
    points_.reserve(breaks_.size() * (GaussRule4::n + 1));
    quad_index_.reserve((breaks_.size() - 1) * GaussRule4::n);
    quad_weight_.reserve(quad_index_.capacity());
    for (std::size_t i = 0; i + 1 < breaks_.size(); ++i) {
        const double a = breaks_[i], b = breaks_[i + 1];
        const double h = b - a;
        if (!(h > 0.0))
            throw std::invalid_argument("QuadGrid: breakpoints not increasing");
        points_.push_back(a);
        for (int k = 0; k < GaussRule4::n; ++k) {
            quad_index_.push_back(points_.size());
            quad_weight_.push_back(h * GaussRule4::weight[k]);
            points_.push_back(a + h * GaussRule4::node[k]);
        }
    }
    points_.push_back(breaks_.back());
}

// Union of mesh points and a uniform subdivision of [0, pi] into at least
// `min_intervals` pieces; duplicates (within 1e-14) are merged.
std::vector<double> merged_grid(const std::vector<double>& mesh,
                                std::size_t min_intervals);

// Grid sup of |values| with one parabolic refinement pass around each local
// maximum; an under-approximation of the continuous sup, second order in the
// grid spacing.
double sup_abs_refined(const std::vector<double>& x,
                       const std::vector<cplx>& values);

// Ordinary least squares fit y = a + b x; returns slope and its standard
// error (zero SE when fewer than three points).
struct TrendFit {
    double slope = 0.0;
    double slope_se = 0.0;
    double intercept = 0.0;
};
TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y);

// Runs fn(i) for i in [0, count) over at most `threads` workers. Exceptions
// are captured and the first one is rethrown after joining. fn must only
// write to data owned by index i.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn);

unsigned default_thread_count();

// Round-trip decimal formatting (17 significant digits).
std::string format_full(double v);

}  // namespace slq

#endif
