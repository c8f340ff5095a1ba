#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "capdirac/algebra.hpp"
#include "capdirac/model.hpp"

namespace capdirac {

struct BoxEig {
  cplx value;
  int multiplicity = 1;
};

// All eigenvalues of A inside the box, clustered into (value, algebraic
// multiplicity) pairs: eigenvalues closer than 1e-8 * scale are merged, where
// scale = max(1, largest |eigenvalue|).  Sorted by real part.
std::vector<BoxEig> eigs_in_box(const MatX& A, const SpectralBox& box);

// Same, but also returns the right eigenvectors (columns matched to the
// unclustered filtered eigenvalues).
struct BoxEigvecs {
  std::vector<cplx> values;
  MatX vectors;
};
BoxEigvecs eigs_in_box_with_vectors(const MatX& A, const SpectralBox& box);

// Rank of the Riesz projector (1/2pi i) contour-int (A - z)^{-1} dz over the
// circle |z - center| = radius, by trapezoid quadrature (nodes doubled from
// `nodes0` until the rank, counted as singular values >= 1/2, is stable).
// For matrices above `deflate_above`, the problem is first compressed onto the
// invariant subspace of eigenvalues within 1.5x the circle.
int riesz_rank(const MatX& A, cplx center, double radius, int nodes0 = 64,
               int deflate_above = 600);

// || (A - z)^{-1} ||_2 = 1 / sigma_min(A - z).
double resolvent_norm(const MatX& A, cplx z);

// Spectral norm by power iteration on A^* A (deterministic start vector);
// adequate for defect matrices whose top singular value is well separated.
double op_norm_2(const MatX& A, int iters = 120, std::uint64_t seed = 99);

// Scaled essential curve: points +/- c sqrt(lam/(1+theta)^2 + m^2 c^2),
// lam in [0, lam_max], principal square root.  Both branches, interleaved
// [+ branch | - branch].
std::vector<cplx> essential_curve(const DistortionParam& th,
                                  const PhysParams& p, double lam_max, int n);

// Distance from z to the scaled essential curve (coarse scan in lam followed
// by golden-section refinement on each branch).
double essential_distance(cplx z, const DistortionParam& th,
                          const PhysParams& p);

// Full admissibility of a resonance window: shape, l > m c^2, b < 0 <= t and
// positive separation from the essential curve of the reference distortion.
void check_box_admissible(const SpectralBox& box, const DistortionParam& th,
                          const PhysParams& p);

// A resonance candidate identified by distortion independence.
struct Resonance {
  cplx z;              // value at the reference distortion
  int multiplicity;
  double drift;        // relative |z(theta1) - z(theta2)| / (1 + |z|)
  double ess_dist;     // distance to the reference essential curve
};

// Pairs the box eigenvalues of two distorted operators (reciprocal nearest
// neighbours), keeps pairs whose relative drift is below drift_tol and which
// stay at least ess_margin away from the essential curve; discretized
// essential-spectrum eigenvalues rotate with theta and fail both filters.
std::vector<Resonance> identify_resonances(const std::vector<BoxEig>& ref,
                                           const std::vector<BoxEig>& check,
                                           const SpectralBox& box,
                                           const DistortionParam& th_ref,
                                           const PhysParams& p,
                                           double drift_tol = 1e-6,
                                           double ess_margin = 1e-3);

}  // namespace capdirac
