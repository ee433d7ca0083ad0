#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "emrsense/signal.hpp"

namespace emrsense {

// 2m x n matrix over {-1, +1}: rows 0..m-1 hold the signs of the real parts,
// rows m..2m-1 the signs of the imaginary parts. Stored bit packed per row
// (bit 1 encodes +1) so that sign-product sums reduce to XOR + popcount;
// the semantic contract is the dense +-1 matrix regardless of storage.
class SignFrame {
 public:
  SignFrame() = default;
  SignFrame(int antennas, int samples);

  int antennas() const { return antennas_; }
  int rows() const { return 2 * antennas_; }
  int samples() const { return samples_; }
  int words_per_row() const { return words_per_row_; }

  int sign(int row, int t) const;
  void set_sign(int row, int t, int value);

  std::span<const std::uint64_t> row_bits(int row) const;
  std::span<std::uint64_t> row_bits(int row);

  // Zeroes the unused bits of each row's final word. Required after writing
  // whole words into row_bits(); positions t >= samples() must stay zero so
  // XOR-based counts see them as agreements.
  void mask_tail();

  // Number of sample positions where rows i and j disagree.
  int disagreements(int i, int j) const;

  // sum_t z_i(t) z_j(t), exactly, as an integer in [-n, n].
  int sign_product_sum(int i, int j) const { return samples_ - 2 * disagreements(i, j); }

  Eigen::MatrixXd to_matrix() const;

 private:
  int antennas_ = 0;
  int samples_ = 0;
  int words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Eq.-style one-bit quantization: keeps the signs of real and imaginary
// parts, stacked. sgn(0) := +1.
SignFrame one_bit_quantize(const ComplexFrame& frame);
void one_bit_quantize(const ComplexFrame& frame, SignFrame& out);

// 2m x 2m one-bit sample covariance (1/n) sum_t z(t) z(t)^T. Symmetric with
// a unit diagonal by construction.
Eigen::MatrixXd one_bit_scm(const SignFrame& frame);

// m x m Hermitian sample covariance (1/n) sum_t x(t) x(t)^H.
Eigen::MatrixXcd full_res_scm(const ComplexFrame& frame);

// Expected one-bit SCM under Gaussian inputs with covariance R: builds the
// real composite covariance of [Re x; Im x] and maps its correlations
// through (2/pi) asin(.). Throws std::domain_error when R is not a valid
// covariance (non-positive diagonal or correlations outside [-1, 1]).
Eigen::MatrixXd arcsin_expected_scm(const Eigen::MatrixXcd& population_cov);

}  // namespace emrsense
