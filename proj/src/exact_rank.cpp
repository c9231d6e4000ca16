#include "greenlie/exact_rank.hpp"

#include <stdexcept>
#include <utility>

namespace greenlie {

bool RationalMatrix::is_zero() const
{
  for (const auto& q : data_)
    if (q != 0) return false;
  return true;
}

std::size_t RationalMatrix::nonzero_count() const
{
  std::size_t n = 0;
  for (const auto& q : data_)
    if (q != 0) ++n;
  return n;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b)
{
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shapes do not match");
  RationalMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j)
        if (b(k, j) != 0) out(i, j) += aik * b(k, j);
    }
  return out;
}

std::size_t exact_rank(const RationalMatrix& m)
{
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::vector<Integer>> a(rows, std::vector<Integer>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    Integer lcm = 1;
    for (std::size_t c = 0; c < cols; ++c) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), m(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < cols; ++c) a[r][c] = m(r, c).get_num() * (lcm / m(r, c).get_den());
  }

  Integer prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    const Integer p = a[rank][col];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        Integer v = p * a[r][c] - a[r][col] * a[rank][c];
        // Bareiss: the division by the previous pivot is exact.
        mpz_divexact(a[r][c].get_mpz_t(), v.get_mpz_t(), prev_pivot.get_mpz_t());
      }
      a[r][col] = 0;
    }
    prev_pivot = p;
    ++rank;
  }
  return rank;
}

}  // namespace greenlie
