#include "capdirac/spectra.hpp"

#include <algorithm>
#include <cmath>

#include "capdirac/errors.hpp"
#include "capdirac/lapack_wrap.hpp"

namespace capdirac {

namespace {
std::vector<BoxEig> cluster(std::vector<cplx> vals) {
  double scale = 1.0;
  for (const cplx& v : vals) scale = std::max(scale, std::abs(v));
  const double tol = 1e-8 * scale;
  std::sort(vals.begin(), vals.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<BoxEig> out;
  for (const cplx& v : vals) {
    if (!out.empty() && std::abs(v - out.back().value) <= tol)
      ++out.back().multiplicity;
    else
      out.push_back({v, 1});
  }
  return out;
}
}  // namespace

std::vector<BoxEig> eigs_in_box(const MatX& A, const SpectralBox& box) {
  box.validate_shape();
  const VecX w = eigvals_general(A);
  std::vector<cplx> inside;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (box.contains(w[i])) inside.push_back(w[i]);
  return cluster(std::move(inside));
}

BoxEigvecs eigs_in_box_with_vectors(const MatX& A, const SpectralBox& box) {
  box.validate_shape();
  auto [w, vr] = eig_general(A);
  BoxEigvecs out;
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (box.contains(w[i])) idx.push_back(i);
  out.values.reserve(idx.size());
  out.vectors.resize(A.rows(), static_cast<Eigen::Index>(idx.size()));
  for (size_t k = 0; k < idx.size(); ++k) {
    out.values.push_back(w[idx[k]]);
    out.vectors.col(static_cast<Eigen::Index>(k)) = vr.col(idx[k]);
  }
  return out;
}

namespace {
// Trapezoid contour quadrature of the Riesz projector on a fixed node count.
MatX riesz_projector(const MatX& A, cplx center, double radius, int nodes) {
  const Eigen::Index n = A.rows();
  MatX acc = MatX::Zero(n, n);
  const MatX id = MatX::Identity(n, n);
  for (int q = 0; q < nodes; ++q) {
    const double t = 2.0 * M_PI * q / nodes;
    const cplx z = center + radius * std::exp(cplx(0.0, t));
    const cplx dz = radius * cplx(0.0, 1.0) * std::exp(cplx(0.0, t));
    // (1/2pi i) (A - z)^{-1} dz, trapezoid weight 2pi/nodes
    acc += solve_lu(A - z * id, id) * (dz / cplx(0.0, double(nodes)));
  }
  return acc;
}

int rank_by_singvals(const MatX& P) {
  const VecXr s = singular_values(P);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] >= 0.5) ++r;
  return r;
}
}  // namespace

int riesz_rank(const MatX& A, cplx center, double radius, int nodes0,
               int deflate_above) {
  if (!(radius > 0.0)) throw config_error("riesz_rank: radius must be positive");
  MatX B = A;
  if (A.rows() > deflate_above) {
    // Compress onto the invariant subspace of eigenvalues near the circle
    // before quadrature; the projector rank is unchanged.
    auto [w, vr] = eig_general(A);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (std::abs(w[i] - center) <= 1.5 * radius) idx.push_back(i);
    if (idx.empty()) return 0;
    MatX basis(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k)
      basis.col(static_cast<Eigen::Index>(k)) = vr.col(idx[k]);
    const Eigen::HouseholderQR<MatX> qr(basis);
    const MatX Q = qr.householderQ() * MatX::Identity(
                       A.rows(), static_cast<Eigen::Index>(idx.size()));
    B = Q.adjoint() * A * Q;
  }
  int nodes = nodes0;
  int prev = -1;
  for (int iter = 0; iter < 6; ++iter) {
    const int r = rank_by_singvals(riesz_projector(B, center, radius, nodes));
    if (r == prev) return r;
    prev = r;
    nodes *= 2;
  }
  throw solver_error("riesz_rank: rank did not stabilize under node doubling");
}

double resolvent_norm(const MatX& A, cplx z) {
  MatX shifted = A;
  shifted.diagonal().array() -= z;
  const VecXr s = singular_values(std::move(shifted));
  const double smin = s[s.size() - 1];
  if (smin == 0.0) throw solver_error("resolvent_norm: z is an eigenvalue");
  return 1.0 / smin;
}

double op_norm_2(const MatX& A, int iters, std::uint64_t seed) {
  const Eigen::Index n = A.cols();
  if (n == 0) return 0.0;
  // Deterministic pseudo-random start (splitmix64 stream).
  VecX v(n);
  std::uint64_t s = seed;
  auto next = [&s]() {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  for (Eigen::Index i = 0; i < n; ++i)
    v[i] = cplx(double(next() >> 11) * 0x1p-53 - 0.5,
                double(next() >> 11) * 0x1p-53 - 0.5);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    VecX w = A * v;
    sigma = w.norm();
    if (sigma == 0.0) return 0.0;
    v = A.adjoint() * w;
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
  }
  return sigma;
}

namespace {
cplx curve_point(double lam, int sign, const DistortionParam& th,
                 const PhysParams& p) {
  const cplx j = 1.0 + th.theta;
  const cplx arg = lam / (j * j) + p.m * p.m * p.c * p.c;
  return double(sign) * p.c * std::sqrt(arg);
}
}  // namespace

std::vector<cplx> essential_curve(const DistortionParam& th,
                                  const PhysParams& p, double lam_max, int n) {
  std::vector<cplx> pts;
  pts.reserve(2 * n);
  for (int sign : {+1, -1})
    for (int i = 0; i < n; ++i)
      pts.push_back(curve_point(lam_max * i / (n - 1.0), sign, th, p));
  return pts;
}

double essential_distance(cplx z, const DistortionParam& th,
                          const PhysParams& p) {
  // lam scale where the curve reaches |z|: lam ~ (|z|/c)^2 |1+theta|^2; scan a
  // few times past that, then refine the best bracket by golden section.
  const double labs = std::norm(z / p.c) * std::norm(1.0 + th.theta);
  const double lam_hi = std::max(4.0 * labs, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (int sign : {+1, -1}) {
    const int n = 600;
    double bl = 0.0, bm = 0.0;
    double dbest = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
      const double lam = lam_hi * i / n;
      const double d = std::abs(z - curve_point(lam, sign, th, p));
      if (d < dbest) {
        dbest = d;
        bm = lam;
      }
    }
    bl = std::max(0.0, bm - lam_hi / n);
    double br = std::min(lam_hi, bm + lam_hi / n);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = bl, b = br;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = std::abs(z - curve_point(x1, sign, th, p));
    double f2 = std::abs(z - curve_point(x2, sign, th, p));
    for (int it = 0; it < 100; ++it) {
      if (f1 < f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - gr * (b - a);
        f1 = std::abs(z - curve_point(x1, sign, th, p));
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + gr * (b - a);
        f2 = std::abs(z - curve_point(x2, sign, th, p));
      }
    }
    best = std::min({best, f1, f2, dbest});
  }
  return best;
}

void check_box_admissible(const SpectralBox& box, const DistortionParam& th,
                          const PhysParams& p) {
  box.validate_resonance_window(p);
  // Sample the curve densely where it could meet the box and check separation.
  const double corner =
      std::max({std::abs(cplx(box.l, box.b)), std::abs(cplx(box.r, box.b)),
                std::abs(cplx(box.l, box.t)), std::abs(cplx(box.r, box.t))});
  const double lam_max = 4.0 * corner * corner / (p.c * p.c) *
                         std::norm(1.0 + th.theta);
  for (const cplx& pt : essential_curve(th, p, std::max(lam_max, 1.0), 4000))
    if (box.contains(pt))
      throw config_error(
          "box: window intersects the scaled essential spectrum curve");
}

std::vector<Resonance> identify_resonances(const std::vector<BoxEig>& ref,
                                           const std::vector<BoxEig>& check,
                                           const SpectralBox& box,
                                           const DistortionParam& th_ref,
                                           const PhysParams& p,
                                           double drift_tol, double ess_margin) {
  std::vector<Resonance> out;
  if (ref.empty() || check.empty()) return out;
  // Reciprocal nearest-neighbour pairing.
  std::vector<int> to_check(ref.size(), -1);
  for (size_t i = 0; i < ref.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < check.size(); ++j) {
      const double d = std::abs(ref[i].value - check[j].value);
      if (d < best) {
        best = d;
        to_check[i] = static_cast<int>(j);
      }
    }
  }
  for (size_t i = 0; i < ref.size(); ++i) {
    const int j = to_check[i];
    if (j < 0) continue;
    // reciprocal?
    double best = std::numeric_limits<double>::infinity();
    size_t back = 0;
    for (size_t k = 0; k < ref.size(); ++k) {
      const double d = std::abs(ref[k].value - check[j].value);
      if (d < best) {
        best = d;
        back = k;
      }
    }
    if (back != i) continue;
    const cplx z = ref[i].value;
    const double drift =
        std::abs(z - check[j].value) / (1.0 + std::abs(z));
    if (drift > drift_tol) continue;
    const double dist = essential_distance(z, th_ref, p);
    if (dist < ess_margin) continue;
    if (!box.contains(z)) continue;
    out.push_back({z, ref[i].multiplicity, drift, dist});
  }
  return out;
}

}  // namespace capdirac
