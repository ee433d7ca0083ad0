#include "emrsense/quantizer.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace emrsense {

SignFrame::SignFrame(int antennas, int samples)
    : antennas_(antennas),
      samples_(samples),
      words_per_row_((samples + 63) / 64),
      bits_(static_cast<std::size_t>(2 * antennas) * words_per_row_, 0) {
  if (antennas < 1 || samples < 1)
    throw std::invalid_argument("SignFrame: antennas and samples must be >= 1");
}

int SignFrame::sign(int row, int t) const {
  const std::uint64_t word =
      bits_[static_cast<std::size_t>(row) * words_per_row_ + (t >> 6)];
  return (word >> (t & 63)) & 1 ? +1 : -1;
}

void SignFrame::set_sign(int row, int t, int value) {
  std::uint64_t& word =
      bits_[static_cast<std::size_t>(row) * words_per_row_ + (t >> 6)];
  const std::uint64_t mask = std::uint64_t{1} << (t & 63);
  if (value > 0)
    word |= mask;
  else
    word &= ~mask;
}

std::span<const std::uint64_t> SignFrame::row_bits(int row) const {
  return {bits_.data() + static_cast<std::size_t>(row) * words_per_row_,
          static_cast<std::size_t>(words_per_row_)};
}

std::span<std::uint64_t> SignFrame::row_bits(int row) {
  return {bits_.data() + static_cast<std::size_t>(row) * words_per_row_,
          static_cast<std::size_t>(words_per_row_)};
}

void SignFrame::mask_tail() {
  const int tail = samples_ & 63;
  if (tail == 0) return;
  const std::uint64_t mask = (std::uint64_t{1} << tail) - 1;
  for (int r = 0; r < rows(); ++r)
    bits_[static_cast<std::size_t>(r + 1) * words_per_row_ - 1] &= mask;
}

int SignFrame::disagreements(int i, int j) const {
  const std::uint64_t* a = bits_.data() + static_cast<std::size_t>(i) * words_per_row_;
  const std::uint64_t* b = bits_.data() + static_cast<std::size_t>(j) * words_per_row_;
  int count = 0;
  for (int w = 0; w < words_per_row_; ++w) count += std::popcount(a[w] ^ b[w]);
  return count;
}

Eigen::MatrixXd SignFrame::to_matrix() const {
  Eigen::MatrixXd m(rows(), samples_);
  for (int r = 0; r < rows(); ++r)
    for (int t = 0; t < samples_; ++t) m(r, t) = sign(r, t);
  return m;
}

void one_bit_quantize(const ComplexFrame& frame, SignFrame& out) {
  const int m = static_cast<int>(frame.rows());
  const int n = static_cast<int>(frame.cols());
  if (out.antennas() != m || out.samples() != n) out = SignFrame(m, n);
  const int wpr = out.words_per_row();
  for (int k = 0; k < m; ++k) {
    std::uint64_t* re_row = out.row_bits(k).data();
    std::uint64_t* im_row = out.row_bits(m + k).data();
    for (int w = 0; w < wpr; ++w) {
      re_row[w] = 0;
      im_row[w] = 0;
    }
    for (int t = 0; t < n; ++t) {
      const std::complex<double> v = frame(k, t);
      const std::uint64_t mask = std::uint64_t{1} << (t & 63);
      if (v.real() >= 0.0) re_row[t >> 6] |= mask;  // sgn(0) := +1
      if (v.imag() >= 0.0) im_row[t >> 6] |= mask;
    }
  }
}

SignFrame one_bit_quantize(const ComplexFrame& frame) {
  SignFrame out;
  one_bit_quantize(frame, out);
  return out;
}

Eigen::MatrixXd one_bit_scm(const SignFrame& frame) {
  const int dim = frame.rows();
  const double n = frame.samples();
  Eigen::MatrixXd s(dim, dim);
  for (int i = 0; i < dim; ++i) {
    s(i, i) = 1.0;
    for (int j = i + 1; j < dim; ++j) {
      const double value = static_cast<double>(frame.sign_product_sum(i, j)) / n;
      s(i, j) = value;
      s(j, i) = value;
    }
  }
  return s;
}

Eigen::MatrixXcd full_res_scm(const ComplexFrame& frame) {
  const int m = static_cast<int>(frame.rows());
  const int n = static_cast<int>(frame.cols());
  if (n < 1) throw std::invalid_argument("full_res_scm: need at least one snapshot");
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(m, m);
  phi.selfadjointView<Eigen::Lower>().rankUpdate(frame, 1.0 / n);
  phi = phi.selfadjointView<Eigen::Lower>();
  return phi;
}

Eigen::MatrixXd arcsin_expected_scm(const Eigen::MatrixXcd& population_cov) {
  const int m = static_cast<int>(population_cov.rows());
  if (population_cov.cols() != m)
    throw std::invalid_argument("arcsin_expected_scm: covariance must be square");

  // Covariance of the stacked real vector [Re x; Im x] for circular x.
  Eigen::MatrixXd composite(2 * m, 2 * m);
  const Eigen::MatrixXd re = 0.5 * population_cov.real();
  const Eigen::MatrixXd im = 0.5 * population_cov.imag();
  composite.topLeftCorner(m, m) = re;
  composite.topRightCorner(m, m) = -im;
  composite.bottomLeftCorner(m, m) = im;
  composite.bottomRightCorner(m, m) = re;

  Eigen::MatrixXd expected(2 * m, 2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    const double di = composite(i, i);
    if (!(di > 0.0))
      throw std::domain_error("arcsin_expected_scm: non-positive diagonal");
    expected(i, i) = 1.0;
    for (int j = i + 1; j < 2 * m; ++j) {
      const double dj = composite(j, j);
      if (!(dj > 0.0))
        throw std::domain_error("arcsin_expected_scm: non-positive diagonal");
      double rho = composite(i, j) / std::sqrt(di * dj);
      if (std::fabs(rho) > 1.0 + 1e-12)
        throw std::domain_error("arcsin_expected_scm: correlation outside [-1, 1]");
      rho = std::clamp(rho, -1.0, 1.0);
      const double value = M_2_PI * std::asin(rho);
      expected(i, j) = value;
      expected(j, i) = value;
    }
  }
  return expected;
}

}  // namespace emrsense
