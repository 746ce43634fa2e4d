// Piecewise-linear complex antiderivative u on [0, pi]. The potential of the
// operator -y'' + q y is the distribution q = u', so u is the sole
// representation of q; it is defined only up to an additive constant
// (gauge_shift). Discontinuities of u sit exactly on mesh points, which is
// what makes step potentials (q with Dirac parts) first-class.

#ifndef SLQ_POTENTIAL_HPP
#define SLQ_POTENTIAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "slq/numerics.hpp"

namespace slq {

class PotentialPrimitive {
  public:
    // u(t) = c0 + c1 * t on [mesh[i], mesh[i+1]] (global-coordinate form)
    struct Segment {
        cplx c0;
        cplx c1;
    };

    // mesh must start at 0, end at pi, strictly increasing;
    // segments.size() == mesh.size() - 1
    PotentialPrimitive(std::vector<double> mesh, std::vector<Segment> segments);

    // catalogue entries: zero | constant(c) | linear(c) | step(kappa, x0) |
    // sawtooth(c, k) | rough_fourier(s, K, seed)
    static PotentialPrimitive from_catalogue(const std::string& name,
                                             const std::vector<cplx>& params);
    static PotentialPrimitive from_samples(const std::vector<double>& grid,
                                           const std::vector<cplx>& values);

    const std::vector<double>& mesh() const { return mesh_; }
    const std::vector<Segment>& segments() const { return segments_; }
    std::size_t segment_count() const { return segments_.size(); }
    double l2_norm() const { return l2_norm_; }

    cplx value(double t) const;           // right-continuous at mesh points
    std::size_t segment_index(double t) const;
    cplx mean() const;                    // (1/pi) * integral of u

    PotentialPrimitive shifted(cplx c) const;      // u -> u + c, same mesh
    PotentialPrimitive conjugated() const;         // u -> conj(u)

    bool is_zero() const;

  private:
    std::vector<double> mesh_;
    std::vector<Segment> segments_;
    double l2_norm_ = 0.0;
};

inline PotentialPrimitive gauge_shift(const PotentialPrimitive& p, cplx c) {
    return p.shifted(c);
}

// half-strip height alpha (for z = sqrt(lambda)) and the empirical lower
// bound on Re(lambda) below which the phase equation may fail to exist
struct RegionParams {
    double alpha = 1.0;
    double re_threshold = 1.0;
};

}  // namespace slq

#endif
