#pragma once

#include <Eigen/Dense>

namespace clipcs {

/// Unitary DFT pair, F(k,l) = exp(-j 2 pi k l / N) / sqrt(N). FFTW-backed
/// with a process-wide plan cache; any N is supported. ||Fv|| = ||v||.
namespace fourier {

/// v (time) -> F v (frequency).
Eigen::VectorXcd dft(const Eigen::VectorXcd& v);

/// v (frequency) -> F^H v (time).
Eigen::VectorXcd idft(const Eigen::VectorXcd& v);

/// Row k of the unitary DFT matrix, as a column vector of length n.
Eigen::VectorXcd dft_row(int n, int k);

} // namespace fourier

} // namespace clipcs
