#include "bcpred/matrix.hpp"

#include <algorithm>

#include "bcpred/error.hpp"

namespace bcpred {

ValidationError::ValidationError(std::map<std::string, std::string> fields)
    : Error([&] {
        std::string msg = "invalid request:";
        for (const auto& [name, reason] : fields) msg += " " + name + " (" + reason + ");";
        return msg;
      }()),
      fields_(std::move(fields)) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  if (rows.empty()) return m;
  m.cols_ = rows.front().size();
  m.data_.reserve(rows.size() * m.cols_);
  for (const auto& r : rows) m.append_row(r);
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) {
    throw PreconditionError("row arity " + std::to_string(values.size()) +
                            " does not match matrix width " + std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> cols) const {
  Matrix out(rows_, cols.size());
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) out(r, j) = (*this)(r, cols[j]);
  return out;
}

}  // namespace bcpred
