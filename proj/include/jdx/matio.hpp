#pragma once

#include <map>
#include <optional>
#include <string>

#include "jdx/types.hpp"

namespace jdx {

/// Where a matrix comes from: a named generator or a file on disk.
struct MatrixSource {
  std::string kind;  // generator name, or "file"
  std::string path;  // used when kind == "file"
  std::string format;  // "matrix-market" or "harwell-boeing"
  std::map<std::string, double> parameters;
};

/// One outer-iteration row of a convergence history.
struct ConvergenceRecord {
  std::size_t outer_iter = 1;   // >= 1
  std::size_t restart_index = 0;
  Scalar ritz{};
  double resnorm = 0.0;
  std::size_t subspace_dim = 1;
  std::optional<double> angle_to_ref;
};

/// Builds one of the named experiment matrices:
///   example1          4x4 with a singular projected operator
///   diag100           diag((j/100)^2 - 0.8), j = 1..100
///   blockdiag-complex order-102 block diagonal with a conjugate pair
///   tridiag200        order 200, diagonal 2.4 + i/2 (last entry
///                     2.4 + 200/1.5), every off-diagonal entry 1
///   qtq100            Q T Q with T = tridiag(-1, 2, -1) and Q a
///                     Householder reflector
SparseMatrix gen_matrix(const MatrixSource& source);

enum class FileFormat { MatrixMarket, HarwellBoeing };

SparseMatrix load_matrix(const std::string& path, FileFormat format);

/// Coordinate-format Matrix Market writer (complex general).
void write_matrix_market(const SparseMatrix& A, const std::string& path);

enum class HistoryFormat { Csv, Json };

/// Writes the history with full 17-significant-digit precision so runs
/// round-trip losslessly. Throws on an empty record list.
void write_history(const std::vector<ConvergenceRecord>& records,
                   const std::string& path, HistoryFormat format);

std::vector<ConvergenceRecord> read_history_csv(const std::string& path);

}  // namespace jdx
