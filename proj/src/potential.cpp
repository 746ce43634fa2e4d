#include "slq/potential.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace slq {

namespace {

double segment_l2(const PotentialPrimitive::Segment& s, double a, double b) {
    // integral of |c0 + c1 t|^2 = |c0|^2 + 2 Re(conj(c0) c1) t + |c1|^2 t^2
    const double q0 = std::norm(s.c0);
    const double q1 = 2.0 * (std::conj(s.c0) * s.c1).real();
    const double q2 = std::norm(s.c1);
    const double d1 = b - a;
    const double d2 = 0.5 * (b * b - a * a);
    const double d3 = (b * b * b - a * a * a) / 3.0;
    return q0 * d1 + q1 * d2 + q2 * d3;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

[[noreturn]] void bad_params(const std::string& name, const char* what) {
    throw std::invalid_argument("potential catalogue '" + name + "': " + what);
}

}  // namespace

PotentialPrimitive::PotentialPrimitive(std::vector<double> mesh,
                                       std::vector<Segment> segments)
    : mesh_(std::move(mesh)), segments_(std::move(segments)) {
    if (mesh_.size() < 2 || segments_.size() + 1 != mesh_.size())
        throw std::invalid_argument("potential: mesh/segment size mismatch");
    if (std::abs(mesh_.front()) > 1e-12 || std::abs(mesh_.back() - pi) > 1e-9)
        throw std::invalid_argument("potential: mesh must cover [0, pi]");
    mesh_.front() = 0.0;
    mesh_.back() = pi;
    for (std::size_t i = 0; i + 1 < mesh_.size(); ++i)
        if (!(mesh_[i] < mesh_[i + 1]))
            throw std::invalid_argument("potential: mesh not strictly increasing");
    for (const Segment& s : segments_)
        if (!is_finite(s.c0) || !is_finite(s.c1))
            throw std::invalid_argument("potential: non-finite coefficients");
    double acc = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i)
        acc += segment_l2(segments_[i], mesh_[i], mesh_[i + 1]);
    l2_norm_ = std::sqrt(std::max(acc, 0.0));
}

std::size_t PotentialPrimitive::segment_index(double t) const {
    if (t <= mesh_.front()) return 0;
    if (t >= mesh_.back()) return segments_.size() - 1;
    const auto it = std::upper_bound(mesh_.begin(), mesh_.end(), t);
    return static_cast<std::size_t>(it - mesh_.begin()) - 1;
}

cplx PotentialPrimitive::value(double t) const {
    const Segment& s = segments_[segment_index(t)];
    return s.c0 + s.c1 * t;
}

cplx PotentialPrimitive::mean() const {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const double a = mesh_[i], b = mesh_[i + 1];
        acc += segments_[i].c0 * (b - a) + segments_[i].c1 * 0.5 * (b * b - a * a);
    }
    return acc / pi;
}

PotentialPrimitive PotentialPrimitive::shifted(cplx c) const {
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) s.c0 += c;
    return PotentialPrimitive(mesh_, std::move(segs));
}

PotentialPrimitive PotentialPrimitive::conjugated() const {
    std::vector<Segment> segs = segments_;
    for (Segment& s : segs) {
        s.c0 = std::conj(s.c0);
        s.c1 = std::conj(s.c1);
    }
    return PotentialPrimitive(mesh_, std::move(segs));
}

bool PotentialPrimitive::is_zero() const { return l2_norm_ == 0.0; }

PotentialPrimitive PotentialPrimitive::from_samples(
    const std::vector<double>& grid, const std::vector<cplx>& values) {
    if (grid.size() != values.size())
        throw std::invalid_argument("from_samples: grid/value length mismatch");
    if (grid.size() < 2)
        throw std::invalid_argument("from_samples: need at least two samples");
    for (const cplx& v : values)
        if (!is_finite(v))
            throw std::invalid_argument("from_samples: non-finite value");
    std::vector<PotentialPrimitive::Segment> segs(grid.size() - 1);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        if (!(h > 0))
            throw std::invalid_argument("from_samples: grid not increasing");
        const cplx c1 = (values[i + 1] - values[i]) / h;
        segs[i] = {values[i] - c1 * grid[i], c1};
    }
    return PotentialPrimitive(grid, std::move(segs));
}

PotentialPrimitive PotentialPrimitive::from_catalogue(
    const std::string& name, const std::vector<cplx>& params) {
    auto require = [&](std::size_t n) {
        if (params.size() != n) bad_params(name, "wrong parameter count");
    };
    if (name == "zero") {
        require(0);
        return PotentialPrimitive({0.0, pi}, {{cplx(0), cplx(0)}});
    }
    if (name == "constant") {
        require(1);
        return PotentialPrimitive({0.0, pi}, {{params[0], cplx(0)}});
    }
    if (name == "linear") {
        require(1);
        return PotentialPrimitive({0.0, pi}, {{cplx(0), params[0]}});
    }
    if (name == "step") {
        require(2);
        if (std::abs(params[1].imag()) > 1e-12)
            bad_params(name, "x0 must be real");
        const double x0 = params[1].real();
        if (!(x0 > 0.0 && x0 < pi)) bad_params(name, "x0 must lie in (0, pi)");
        return PotentialPrimitive({0.0, x0, pi},
                                  {{cplx(0), cplx(0)}, {params[0], cplx(0)}});
    }
    if (name == "sawtooth") {
        require(2);
        if (std::abs(params[1].imag()) > 1e-12 ||
            params[1].real() != std::floor(params[1].real()))
            bad_params(name, "k must be a positive integer");
        const int k = static_cast<int>(params[1].real());
        if (k < 1) bad_params(name, "k must be a positive integer");
        const cplx c = params[0];
        std::vector<double> mesh(k + 1);
        std::vector<Segment> segs(k);
        const double h = pi / k;
        for (int i = 0; i <= k; ++i) mesh[i] = pi * i / static_cast<double>(k);
        mesh.back() = pi;
        for (int i = 0; i < k; ++i) {
            // linear ramp from -c to +c on each tooth
            const cplx slope = 2.0 * c / h;
            segs[i] = {-c - slope * mesh[i], slope};
        }
        return PotentialPrimitive(std::move(mesh), std::move(segs));
    }
    if (name == "rough_fourier") {
        require(3);
        const double s = params[0].real();
        if (std::abs(params[1].imag()) > 1e-12 ||
            params[1].real() != std::floor(params[1].real()) ||
            params[1].real() < 1)
            bad_params(name, "K must be a positive integer");
        const int K = static_cast<int>(params[1].real());
        if (params[2].real() < 0 || std::abs(params[2].imag()) > 1e-12)
            bad_params(name, "seed must be a nonnegative integer");
        const auto seed = static_cast<std::uint64_t>(params[2].real());
        if (s <= 0.5)
            std::fprintf(stderr,
                         "warning: rough_fourier s=%.17g <= 1/2, the series "
                         "does not converge in L2\n",
                         s);
        std::uint64_t state = seed;
        std::vector<double> xi(K), eta(K);
        for (int k = 0; k < K; ++k) {
            const std::uint64_t r = splitmix64(state);
            xi[k] = (r & 1u) ? 1.0 : -1.0;
            eta[k] = (r & 2u) ? 1.0 : -1.0;
        }
        const std::size_t m = std::max<std::size_t>(512, 16u * K);
        std::vector<double> grid(m + 1);
        std::vector<cplx> vals(m + 1);
        for (std::size_t i = 0; i <= m; ++i) {
            const double t = pi * static_cast<double>(i) / static_cast<double>(m);
            grid[i] = t;
            double v = 0.0;
            for (int k = 1; k <= K; ++k)
                v += std::pow(k, -s) *
                     (xi[k - 1] * std::cos(k * t) + eta[k - 1] * std::sin(k * t));
            vals[i] = v;
        }
        grid.back() = pi;
        return from_samples(grid, vals);
    }
    throw std::invalid_argument("unknown potential catalogue name '" + name +
                                "'");
}

}  // namespace slq
