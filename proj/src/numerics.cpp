#include "slq/numerics.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>

namespace slq {

std::vector<double> merged_grid(const std::vector<double>& mesh,
                                std::size_t min_intervals) {
    std::vector<double> g;
    g.reserve(mesh.size() + min_intervals + 1);
    for (std::size_t i = 0; i <= min_intervals; ++i)
        g.push_back(pi * static_cast<double>(i) /
                    static_cast<double>(min_intervals));
    g.insert(g.end(), mesh.begin(), mesh.end());
    std::sort(g.begin(), g.end());
    std::vector<double> out;
    out.reserve(g.size());
    for (double x : g) {
        if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
    }
    // endpoints must stay exact
    out.front() = 0.0;
    out.back() = pi;
    return out;
}

double sup_abs_refined(const std::vector<double>& x,
                       const std::vector<cplx>& values) {
    if (x.size() != values.size() || x.empty())
        throw std::invalid_argument("sup_abs_refined: size mismatch");
    double best = 0.0;
    for (const cplx& v : values) best = std::max(best, std::abs(v));
    // refinement: fit a parabola through |f| at each interior local max and
    // take the vertex value when it lies inside the bracketing interval
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double fm = std::abs(values[i - 1]);
        const double f0 = std::abs(values[i]);
        const double fp = std::abs(values[i + 1]);
        if (f0 < fm || f0 < fp) continue;
        const double denom = fm - 2.0 * f0 + fp;
        if (denom >= -1e-300) continue;  // not concave
        const double t = 0.5 * (fm - fp) / denom;  // vertex offset in units of h
        if (std::abs(t) > 1.0) continue;
        const double fv = f0 - 0.25 * (fm - fp) * t;
        best = std::max(best, fv);
    }
    return best;
}

TrendFit fit_trend(const std::vector<double>& x, const std::vector<double>& y) {
    TrendFit fit;
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) return fit;
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    if (n > 2) {
        double rss = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - (fit.intercept + fit.slope * x[i]);
            rss += r * r;
        }
        fit.slope_se = std::sqrt(rss / (static_cast<double>(n - 2) * sxx));
    }
    return fit;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned nw =
        static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned t = 0; t < nw; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

unsigned default_thread_count() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace slq
