#include "spectrace/recoverability.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spectrace/hankel.hpp"
#include "spectrace/linalg.hpp"

namespace spectrace {

namespace {

int count_above(const RVector& sigma, double threshold) {
  int n = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > threshold) ++n;
  }
  return n;
}

CMatrix selection(const IndexSet& omega, int d) {
  CMatrix s = CMatrix::Zero(static_cast<Eigen::Index>(omega.size()), d);
  for (std::size_t k = 0; k < omega.size(); ++k) s(static_cast<Eigen::Index>(k), omega[k] - 1) = 1.0;
  return s;
}

}  // namespace

int min_poly_degree(const CMatrix& a, const CVector& b, double rel) {
  const Eigen::Index d = a.rows();
  if (b.size() != d) throw Error(ErrorCode::dimension_mismatch, "vector length differs from matrix size");
  CMatrix k(d, d + 1);
  CVector v = b;
  for (Eigen::Index j = 0; j <= d; ++j) {
    const double n = v.norm();
    k.col(j) = n > 0.0 ? CVector(v / n) : v;
    v = a * k.col(j);
  }
  if (k.norm() == 0.0) return 0;
  return numerical_rank(k, rel);
}

int annihilator_degree(const ObservedSeries& series, int d, double rel) {
  if (d < 1) throw Error(ErrorCode::invalid_argument, "dimension must be >= 1");
  if (series.length() < 2 * d) {
    throw Error(ErrorCode::insufficient_samples,
                "annihilator degree from data needs M >= 2d = " + std::to_string(2 * d));
  }
  const HankelPair pair = build_hankel(series, d);
  if (pair.full.norm() == 0.0) return 0;
  return numerical_rank(pair.full, rel);
}

int annihilator_degree(const CMatrix& a, const CVector& b, const IndexSet& omega, double rel) {
  const int d = static_cast<int>(a.rows());
  if (b.size() != d) throw Error(ErrorCode::dimension_mismatch, "vector length differs from matrix size");
  const IndexSet om = normalize_omega(omega, d);
  const CMatrix q = krylov_basis(a, b, rel);
  if (q.cols() == 0) return 0;
  const CMatrix t = q.adjoint() * a * q;
  const CMatrix c = selection(om, d) * q;
  return static_cast<int>(krylov_basis(t.adjoint(), c.adjoint(), rel).cols());
}

const char* to_string(OraclePath p) {
  switch (p) {
    case OraclePath::jordan_exact: return "jordan-exact";
    case OraclePath::numeric_diagonalizable: return "numeric-diagonalizable";
    case OraclePath::data_fallback: return "data-fallback";
  }
  return "unknown";
}

std::vector<Complex> RecoverabilityReport::recoverable_roots() const {
  std::vector<Complex> out;
  for (const auto& rec : eigenvalues) {
    for (int k = 0; k < rec.local_degree; ++k) out.push_back(rec.value);
  }
  return out;
}

std::vector<int> local_min_poly_degrees(const JordanSpec& spec, const CVector& v, double rel) {
  spec.validate();
  if (v.size() != spec.dim()) throw Error(ErrorCode::dimension_mismatch, "vector length differs from spec dimension");
  const CVector z = spec.U.partialPivLu().solve(v);
  std::vector<int> degrees;
  for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
    const CMatrix n = spec.nilpotent(s);
    CVector y = z.segment(spec.offset(s), spec.multiplicity(s));
    int deg = 0;
    for (int k = 0; k < spec.multiplicity(s); ++k) {
      if (y.norm() > rel * z.norm()) deg = k + 1;
      y = n * y;
    }
    degrees.push_back(deg);
  }
  return degrees;
}

RecoverabilityReport recoverable_set_jordan(const JordanSpec& spec, const CVector& v,
                                            const IndexSet& omega, const OracleTolerances& tol) {
  spec.validate();
  const int d = spec.dim();
  if (v.size() != d) throw Error(ErrorCode::dimension_mismatch, "vector length differs from spec dimension");
  RecoverabilityReport rep;
  rep.omega = normalize_omega(omega, d);
  rep.effective_vector = v;
  rep.path = OraclePath::jordan_exact;
  const CVector z = spec.U.partialPivLu().solve(v);

  for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
    const int h = spec.multiplicity(s);
    const int off = spec.offset(s);
    const CMatrix n = spec.nilpotent(s);
    EigenRecord rec;
    rec.value = spec.eigenvalues[s];
    rec.multiplicity = h;
    for (int i : rep.omega) {
      // <N_s^k z_s, (U^* e_i)_s> for k = 0..h-1; the largest nonvanishing k
      // fixes the power of (z - lambda_s) needed to annihilate index i.
      const CVector u = spec.U.row(i - 1).segment(off, h).transpose();
      const double scale = z.norm() * spec.U.row(i - 1).norm();
      CVector y = z.segment(off, h);
      for (int k = 0; k < h; ++k) {
        const Complex ak = (u.array() * y.array()).sum();
        if (std::abs(ak) > tol.orth_rel * scale) rec.local_degree = std::max(rec.local_degree, k + 1);
        y = n * y;
      }
    }
    rec.recoverable = rec.local_degree >= 1;
    rep.total_degree += rec.local_degree;
    rep.eigenvalues.push_back(rec);
  }
  return rep;
}

RecoverabilityReport recoverable_set_numeric(const CMatrix& a, const CVector& v,
                                             const IndexSet& omega, const OracleTolerances& tol) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d || v.size() != d) {
    throw Error(ErrorCode::dimension_mismatch, "matrix must be square and match the vector");
  }
  RecoverabilityReport rep;
  rep.omega = normalize_omega(omega, d);
  rep.effective_vector = v;
  rep.path = OraclePath::numeric_diagonalizable;

  CVector evals;
  CMatrix evecs;
  CMatrix left;  // rows are the dual basis
  if ((a - a.adjoint()).norm() <= 1e-14 * std::max(1.0, a.norm())) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
    evals = solver.eigenvalues().cast<Complex>();
    evecs = solver.eigenvectors();
    left = evecs.adjoint();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> solver(a);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::numerical_failure, "eigenvalue iteration did not converge");
    }
    evals = solver.eigenvalues();
    evecs = solver.eigenvectors();
    const RVector sv = singular_values(evecs);
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
    if (!(cond <= tol.max_condition)) {
      rep.path = OraclePath::data_fallback;
      rep.total_degree = annihilator_degree(a, v, rep.omega, tol.orth_rel);
      rep.warnings.push_back("eigenvectors too ill-conditioned for spectral projectors; "
                             "only the total degree is reported");
      return rep;
    }
    left = evecs.partialPivLu().inverse();
  }

  const std::vector<Complex> values(evals.data(), evals.data() + evals.size());
  std::vector<int> owner;
  const auto clusters = cluster_values(values, tol.cluster, &owner);

  const CMatrix q = krylov_basis(a, v, tol.orth_rel);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    CMatrix p = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (owner[j] == static_cast<int>(c)) p += evecs.col(static_cast<Eigen::Index>(j)) * left.row(static_cast<Eigen::Index>(j));
    }
    EigenRecord rec;
    rec.value = clusters[c].center;
    rec.multiplicity = clusters[c].multiplicity;
    for (int i : rep.omega) {
      // Recoverable through index i unless P_s^* e_i is orthogonal to K(A, v).
      const CVector pe = p.row(i - 1).adjoint();
      if (q.cols() > 0 && (q.adjoint() * pe).norm() > tol.orth_rel * pe.norm()) rec.recoverable = true;
    }
    rec.local_degree = rec.recoverable ? 1 : 0;
    rep.total_degree += rec.local_degree;
    rep.eigenvalues.push_back(rec);
  }
  return rep;
}

CVector effective_vector(const AffineSystem& sys, const Sampling& sampling) {
  const Eigen::Index d = sys.A.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  if (sampling.kind == StepKind::discrete) return (sys.A - id) * sys.b + sys.c;
  if (!(sampling.dt > 0.0)) throw Error(ErrorCode::invalid_argument, "time step must be positive");
  return (expm(sampling.dt * sys.A) - id) * sys.b + g_function(sampling.dt, sys.A) * sys.c;
}

PenthouseFamily penthouse(const JordanSpec& spec) {
  spec.validate();
  const int d = spec.dim();
  PenthouseFamily fam;
  for (std::size_t s = 0; s < spec.eigenvalues.size(); ++s) {
    std::vector<int> idx;
    CMatrix p = CMatrix::Zero(d, d);
    int start = spec.offset(s);
    for (int size : spec.blocks[s]) {
      const int k = start + size - 1;
      idx.push_back(k + 1);
      p(k, k) = 1.0;
      start += size;
    }
    fam.cyclic_indices.push_back(std::move(idx));
    fam.projections.push_back(std::move(p));
  }
  return fam;
}

UniversalityCertificate is_universal(const JordanSpec& spec, const IndexSet& omega, double rel) {
  spec.validate();
  const int d = spec.dim();
  const IndexSet om = normalize_omega(omega, d);
  UniversalityCertificate cert;

  const CMatrix a = spec.system_matrix();
  cert.krylov_rank = static_cast<int>(krylov_basis(a.adjoint(), selection(om, d).transpose(), rel).cols());
  cert.krylov_criterion = cert.krylov_rank == d;

  const PenthouseFamily fam = penthouse(spec);
  const CMatrix ue = spec.U.adjoint() * selection(om, d).transpose();  // columns U^* e_i
  const double threshold = rel * std::max(1.0, singular_values(spec.U)(0));
  cert.penthouse_criterion = true;
  for (std::size_t s = 0; s < fam.cyclic_indices.size(); ++s) {
    const auto& idx = fam.cyclic_indices[s];
    CMatrix rows(static_cast<Eigen::Index>(idx.size()), ue.cols());
    for (std::size_t k = 0; k < idx.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = ue.row(idx[k] - 1);
    const int rank = count_above(singular_values(rows), threshold);
    cert.penthouse_ranks.push_back(rank);
    cert.block_counts.push_back(static_cast<int>(idx.size()));
    if (rank < static_cast<int>(idx.size())) cert.penthouse_criterion = false;
  }

  cert.universal = cert.krylov_criterion && cert.penthouse_criterion;
  if (cert.krylov_criterion != cert.penthouse_criterion) {
    cert.warnings.push_back("Krylov and penthouse criteria disagree; the spec is numerically borderline");
  }
  return cert;
}

}  // namespace spectrace
