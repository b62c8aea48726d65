#include "spectrace/systems.hpp"

#include <cmath>
#include <numeric>

#include "spectrace/linalg.hpp"

namespace spectrace {

AffineSystem AffineSystem::make(CMatrix a, CVector b, CVector c) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "system matrix must be square");
  }
  if (b.size() != a.rows() || c.size() != a.rows()) {
    throw Error(ErrorCode::dimension_mismatch,
                "initial state and drive must have length dim");
  }
  return AffineSystem{std::move(a), std::move(b), std::move(c)};
}

AffineSystem AffineSystem::homogeneous(CMatrix a, CVector b) {
  CVector c = CVector::Zero(a.rows());
  return make(std::move(a), std::move(b), std::move(c));
}

// ---------------------------------------------------------------------------
// JordanSpec

int JordanSpec::multiplicity(std::size_t s) const {
  return std::accumulate(blocks.at(s).begin(), blocks.at(s).end(), 0);
}

int JordanSpec::dim() const {
  int d = 0;
  for (std::size_t s = 0; s < blocks.size(); ++s) d += multiplicity(s);
  return d;
}

int JordanSpec::offset(std::size_t s) const {
  int off = 0;
  for (std::size_t k = 0; k < s; ++k) off += multiplicity(k);
  return off;
}

void JordanSpec::validate() const {
  if (eigenvalues.empty()) {
    throw Error(ErrorCode::invalid_argument, "Jordan spec has no eigenvalues");
  }
  if (eigenvalues.size() != blocks.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "one block list is required per eigenvalue");
  }
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    for (std::size_t j = i + 1; j < eigenvalues.size(); ++j) {
      if (eigenvalues[i] == eigenvalues[j]) {
        throw Error(ErrorCode::invalid_argument,
                    "Jordan spec eigenvalues must be pairwise distinct");
      }
    }
  }
  for (const auto& sizes : blocks) {
    if (sizes.empty()) {
      throw Error(ErrorCode::invalid_argument, "empty block list");
    }
    for (std::size_t k = 0; k < sizes.size(); ++k) {
      if (sizes[k] < 1) {
        throw Error(ErrorCode::invalid_argument, "block sizes must be >= 1");
      }
      if (k > 0 && sizes[k] > sizes[k - 1]) {
        throw Error(ErrorCode::invalid_argument,
                    "block sizes must be non-increasing");
      }
    }
  }
  const int d = dim();
  if (U.rows() != d || U.cols() != d) {
    throw Error(ErrorCode::dimension_mismatch,
                "similarity matrix must be " + std::to_string(d) + "x" +
                    std::to_string(d));
  }
  const RVector s = singular_values(U);
  if (!(s(s.size() - 1) > 1e-12 * s(0))) {
    throw Error(ErrorCode::singular_matrix,
                "similarity matrix is numerically singular");
  }
}

CMatrix JordanSpec::nilpotent(std::size_t s) const {
  const int h = multiplicity(s);
  CMatrix n = CMatrix::Zero(h, h);
  int start = 0;
  for (int size : blocks.at(s)) {
    for (int k = 1; k < size; ++k) n(start + k, start + k - 1) = 1.0;
    start += size;
  }
  return n;
}

CMatrix JordanSpec::jordan_matrix() const {
  const int d = dim();
  CMatrix j = CMatrix::Zero(d, d);
  for (std::size_t s = 0; s < eigenvalues.size(); ++s) {
    const int h = multiplicity(s);
    const int off = offset(s);
    j.block(off, off, h, h) =
        eigenvalues[s] * CMatrix::Identity(h, h) + nilpotent(s);
  }
  return j;
}

CMatrix JordanSpec::system_matrix() const {
  // U J U^{-1} computed as (U^{-T} (U J)^T)^T to avoid an explicit inverse.
  const CMatrix uj = U * jordan_matrix();
  return U.transpose().partialPivLu().solve(uj.transpose()).transpose();
}

bool JordanSpec::diagonalizable() const {
  for (const auto& sizes : blocks) {
    if (sizes.front() > 1) return false;
  }
  return true;
}

AffineSystem build_from_jordan(const JordanSpec& spec, const CVector& b,
                               const CVector& c) {
  spec.validate();
  return AffineSystem::make(spec.system_matrix(), b, c);
}

// ---------------------------------------------------------------------------
// Simulation

Trajectory simulate_discrete(const AffineSystem& sys, int steps) {
  if (steps < 1) {
    throw Error(ErrorCode::invalid_argument, "simulation needs steps >= 1");
  }
  Trajectory traj;
  traj.sampling = Sampling::discrete();
  traj.states.reserve(static_cast<std::size_t>(steps));
  traj.states.push_back(sys.b);
  for (int t = 1; t < steps; ++t) {
    traj.states.push_back(sys.A * traj.states.back() + sys.c);
  }
  return traj;
}

CMatrix g_function(double t, const CMatrix& a) {
  const Eigen::Index d = a.rows();
  const CMatrix ta = t * a;
  const RVector s = singular_values(a);
  if (s.size() > 0 && s(s.size() - 1) > 1e-10 * s(0)) {
    // g(t; A) A = e^{tA} - I, and g commutes with A.
    const CMatrix rhs = expm(ta) - CMatrix::Identity(d, d);
    return a.transpose().partialPivLu().solve(rhs.transpose()).transpose();
  }

  // Power series at t / 2^k, then g(2u) = g(u) + e^{uA} g(u) k times.
  int halvings = 0;
  const double norm = ta.cwiseAbs().colwise().sum().maxCoeff();
  while (norm / std::ldexp(1.0, halvings) > 0.5) ++halvings;
  const double scale = std::ldexp(t, -halvings);

  const CMatrix ua = scale * a;
  CMatrix term = scale * CMatrix::Identity(d, d);
  CMatrix sum = term;
  for (int k = 0; k < 200; ++k) {
    term = term * ua / static_cast<double>(k + 2);
    sum += term;
    if (term.norm() < 1e-16 * sum.norm()) break;
  }
  CMatrix e = expm(ua);
  for (int k = 0; k < halvings; ++k) {
    sum = sum + e * sum;
    e = e * e;
  }
  return sum;
}

Trajectory simulate_continuous(const AffineSystem& sys, double dt, int steps) {
  if (steps < 1) {
    throw Error(ErrorCode::invalid_argument, "simulation needs steps >= 1");
  }
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "time step must be positive");
  }
  // x((l+1) dt) = e^{dt A} x(l dt) + g(dt; A) c.
  const CMatrix step = expm(dt * sys.A);
  const CVector drive = g_function(dt, sys.A) * sys.c;
  Trajectory traj;
  traj.sampling = Sampling::continuous(dt);
  traj.states.reserve(static_cast<std::size_t>(steps));
  traj.states.push_back(sys.b);
  for (int l = 1; l < steps; ++l) {
    traj.states.push_back(step * traj.states.back() + drive);
  }
  return traj;
}

ObservedSeries observe(const Trajectory& traj, const IndexSet& omega) {
  if (traj.states.empty()) {
    throw Error(ErrorCode::invalid_argument, "empty trajectory");
  }
  const int d = static_cast<int>(traj.states.front().size());
  ObservedSeries out;
  out.omega = normalize_omega(omega, d);
  out.sampling = traj.sampling;
  out.samples.resize(traj.length(), static_cast<Eigen::Index>(out.omega.size()));
  for (int t = 0; t < traj.length(); ++t) {
    for (std::size_t k = 0; k < out.omega.size(); ++k) {
      out.samples(t, static_cast<Eigen::Index>(k)) = traj.states[t](out.omega[k] - 1);
    }
  }
  return out;
}

ObservedSeries difference_transform(const ObservedSeries& series) {
  if (series.length() < 2) {
    throw Error(ErrorCode::insufficient_samples,
                "differencing needs at least 2 samples");
  }
  ObservedSeries out;
  out.omega = series.omega;
  out.sampling = series.sampling;
  const Eigen::Index m = series.samples.rows();
  out.samples = series.samples.bottomRows(m - 1) - series.samples.topRows(m - 1);
  return out;
}

}  // namespace spectrace
