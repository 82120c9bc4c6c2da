#pragma once

#include <cstddef>
#include <functional>

#include "fermat/linalg.hpp"

namespace fermat {

// Dense symmetric eigensolver: Householder reduction to tridiagonal form
// followed by implicit-shift QL iteration with eigenvector accumulation.
// Eigenvalues ascend; evecs column k pairs with evals[k].  Off-diagonal
// convergence tolerance is relative machine epsilon; throws NotConverged
// after 64 sweeps on one element.
void sym_eig_dense(const Mat& a, Vec& evals, Mat& evecs);

// Eigenvalues only.
void sym_eig_values(const Mat& a, Vec& evals);

// Smallest K eigenpairs of a symmetric operator given through its matvec,
// by Lanczos with full reorthogonalization and a deterministic start
// vector.  Residual tolerance is measured against |lambda| + |shift scale|.
void lanczos_smallest(const std::function<Vec(const Vec&)>& apply, std::size_t n, std::size_t k,
                      Vec& evals, Mat& evecs, double tol = 1e-10,
                      std::size_t max_iter = 0);

}  // namespace fermat
