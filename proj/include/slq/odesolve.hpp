// Initial-value integration of the regularized equation -w'' + q w = lambda w
// with q = u'. The quasi-derivative w^[1] = w' - u w turns it into a first
// order system with integrable coefficients:
//
//   w'     = u w + w^[1]
//   w^[1]' = -(lambda + u^2) w - u w^[1],     w(0) = 0, w^[1](0) = 1.
//
// For |lambda| >= 1 the system is integrated in the rotated variables
// (Y, V) = (z w, w^[1]), z = sqrt(lambda), which keeps both components O(1);
// the original variables stay available because they are entire in lambda
// (needed for contour work near the branch cut of z).
//
// The phase/modulus substitution w = r sin(theta), w^[1] = z r cos(theta)
// obeys
//   theta' = z + u^2 sin^2(theta)/z + u sin(2 theta),   theta(0) = 0
//   r'     = -r [u cos(2 theta) + u^2 sin(2 theta)/(2z)],   r(0) = 1,
// so r sin(theta) equals z times the quasi-derivative-normalized solution.
// r is recovered as exp of the integrated logarithmic derivative and never
// vanishes.

#ifndef SLQ_ODESOLVE_HPP
#define SLQ_ODESOLVE_HPP

#include <stdexcept>
#include <vector>

#include "slq/potential.hpp"
#include "slq/rk.hpp"

namespace slq {

struct SolutionTrace {
    cplx lambda;
    std::vector<double> grid;
    std::vector<cplx> omega, omega_q1;        // quasi normalization (0, 1)
    std::vector<cplx> omega_dl, omega_dl_q1;  // d/dlambda, when requested
    std::vector<cplx> theta, r;               // phase/modulus, when requested
};

struct ThetaExistenceError : std::runtime_error {
    ThetaExistenceError(double where, const char* what)
        : std::runtime_error(std::string(what) + " at x = " +
                             std::to_string(where)),
          x(where) {}
    double x;
};

enum class Formulation { automatic, original, rotated };

// Output grid must be increasing with grid.front() == 0, grid.back() == pi;
// an empty grid selects mesh-union-uniform(256). Integration never steps
// across a potential mesh point. tol is the local error target per unit step.
SolutionTrace integrate_quasi(cplx lambda, const PotentialPrimitive& p,
                              double tol, std::vector<double> grid = {});
SolutionTrace integrate_variational(cplx lambda, const PotentialPrimitive& p,
                                    double tol, std::vector<double> grid = {});
SolutionTrace integrate_pruefer(cplx lambda, const PotentialPrimitive& p,
                                double tol, std::vector<double> grid = {});

struct CharValues {
    cplx omega_pi;     // w(pi, lambda)
    cplx omega_dl_pi;  // d/dlambda w(pi, lambda)
    cplx omega_q1_pi;  // w^[1](pi, lambda)
};
CharValues characteristic_values(cplx lambda, const PotentialPrimitive& p,
                                 double tol,
                                 Formulation f = Formulation::automatic);

// Smallest lambda = 2^k on which the phase equation integrates across
// [0, pi]; the existence threshold of the phase representation is not
// constructive, so it is probed empirically.
double estimate_pruefer_threshold(const PotentialPrimitive& p,
                                  double tol = 1e-8);

}  // namespace slq

#endif
