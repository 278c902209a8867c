#include "jdx/matio.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "jdx/linalg.hpp"

namespace jdx {

namespace {

using Triplets = std::vector<std::tuple<std::size_t, std::size_t, Scalar>>;

SparseMatrix gen_example1() {
  Triplets t = {{0, 0, 1.0}, {1, 2, 2.0}, {2, 1, 2.0}, {3, 3, 1.0}};
  return SparseMatrix::from_triplets(4, std::move(t));
}

SparseMatrix gen_diag100() {
  Triplets t;
  for (std::size_t j = 1; j <= 100; ++j) {
    double d = (double(j) / 100.0) * (double(j) / 100.0) - 0.8;
    t.emplace_back(j - 1, j - 1, d);
  }
  return SparseMatrix::from_triplets(100, std::move(t));
}

SparseMatrix gen_blockdiag_complex() {
  Triplets t;
  t.emplace_back(0, 0, Scalar(0.8, 0.1));
  t.emplace_back(1, 1, Scalar(0.8, -0.1));
  for (std::size_t j = 1; j <= 100; ++j) {
    double d = (double(j) / 100.0) * (double(j) / 100.0) - 0.8;
    t.emplace_back(j + 1, j + 1, d);
  }
  return SparseMatrix::from_triplets(102, std::move(t));
}

SparseMatrix gen_tridiag200() {
  // Diagonal 2.4 + i/2 (last entry 2.4 + 200/1.5), every off-diagonal
  // entry equal to 1.  The all-ones coupling is what reproduces the
  // reference largest eigenvalue 2.561474561181774e+02.
  const std::size_t n = 200;
  Triplets t;
  for (std::size_t i = 1; i <= n; ++i) {
    double d = (i < n) ? 2.4 + double(i) / 2.0 : 2.4 + 200.0 / 1.5;
    for (std::size_t j = 1; j <= n; ++j)
      t.emplace_back(i - 1, j - 1, (i == j) ? d : 1.0);
  }
  return SparseMatrix::from_triplets(n, std::move(t));
}

SparseMatrix gen_qtq100() {
  const std::size_t n = 100;
  Vector h(n);
  double hn2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = std::sqrt(double(i + 1) + 0.45);
    hn2 += std::norm(h[i]);
  }
  // Q = I - 2 h h^T / ||h||^2
  DenseMatrix Q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      Q(i, j) = ((i == j) ? 1.0 : 0.0) - 2.0 * (h[i] * h[j]).real() / hn2;
  // T = tridiag(-1, 2, -1); diagonal 2 reproduces the reference
  // largest eigenvalue 3.999032564583972e+00.
  DenseMatrix T(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    T(i, i) = 2.0;
    if (i > 0) T(i, i - 1) = -1.0;
    if (i + 1 < n) T(i, i + 1) = -1.0;
  }
  DenseMatrix TQ(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Scalar s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += T(i, k) * Q(k, j);
      TQ(i, j) = s;
    }
  DenseMatrix A(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Scalar s = 0.0;
      for (std::size_t k = 0; k < n; ++k) s += Q(i, k) * TQ(k, j);
      A(i, j) = s;
    }
  return SparseMatrix::from_dense(A);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

SparseMatrix gen_matrix(const MatrixSource& source) {
  if (source.kind == "example1") return gen_example1();
  if (source.kind == "diag100") return gen_diag100();
  if (source.kind == "blockdiag-complex") return gen_blockdiag_complex();
  if (source.kind == "tridiag200") return gen_tridiag200();
  if (source.kind == "qtq100") return gen_qtq100();
  if (source.kind == "file") {
    FileFormat f = FileFormat::MatrixMarket;
    if (source.format == "harwell-boeing" || source.format == "hb")
      f = FileFormat::HarwellBoeing;
    else if (!source.format.empty() && source.format != "matrix-market" &&
             source.format != "mm")
      throw ParseError("unknown matrix file format: " + source.format);
    return load_matrix(source.path, f);
  }
  throw ParseError("unknown matrix generator: " + source.kind);
}

// ---- Matrix Market ----

namespace {

SparseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  ++lineno;
  std::istringstream hdr(line);
  std::string banner, object, fmt, field, symmetry;
  hdr >> banner >> object >> fmt >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix" || fmt != "coordinate")
    throw ParseError(path + ":1: expected a coordinate MatrixMarket header");
  const bool complex_field = (field == "complex");
  if (field != "real" && field != "complex")
    throw ParseError(path + ":1: unsupported field type '" + field + "'");
  const bool symmetric = (symmetry == "symmetric" || symmetry == "hermitian");
  if (!symmetric && symmetry != "general")
    throw ParseError(path + ":1: unsupported symmetry '" + symmetry + "'");

  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    break;
  }
  std::istringstream sz(line);
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(sz >> rows >> cols >> nnz) || rows != cols)
    throw ParseError(path + ":" + std::to_string(lineno) + ": bad size line");

  Triplets trip;
  trip.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!std::getline(in, line))
      throw ParseError(path + ":" + std::to_string(lineno) + ": truncated entries");
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '%') {
      --k;
      continue;
    }
    std::istringstream es(t);
    std::size_t i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(es >> i >> j >> re) || (complex_field && !(es >> im)))
      throw ParseError(path + ":" + std::to_string(lineno) + ": bad entry");
    if (i < 1 || j < 1 || i > rows || j > cols)
      throw ParseError(path + ":" + std::to_string(lineno) + ": index out of range");
    trip.emplace_back(i - 1, j - 1, Scalar(re, im));
    if (symmetric && i != j)
      trip.emplace_back(j - 1, i - 1,
                        symmetry == "hermitian" ? Scalar(re, -im) : Scalar(re, im));
  }
  return SparseMatrix::from_triplets(rows, std::move(trip));
}

// ---- Harwell-Boeing ----

struct FortranFormat {
  std::size_t per_line = 0;
  std::size_t width = 0;
};

FortranFormat parse_fortran_format(const std::string& spec, const std::string& path) {
  // Accepts forms like (16I5), (4D20.12), (1P,5E16.9), (1P5E16.9).
  std::string s;
  for (char c : spec)
    if (!std::isspace(static_cast<unsigned char>(c))) s += std::toupper(c);
  std::size_t pos = 0;
  auto read_int = [&]() {
    std::size_t v = 0;
    bool any = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + std::size_t(s[pos] - '0');
      ++pos;
      any = true;
    }
    if (!any) throw ParseError(path + ": bad Fortran format '" + spec + "'");
    return v;
  };
  if (pos < s.size() && s[pos] == '(') ++pos;
  // Skip scale factors like 1P and commas.
  while (pos < s.size()) {
    std::size_t save = pos;
    if (std::isdigit(static_cast<unsigned char>(s[pos]))) {
      (void)read_int();
      if (pos < s.size() && s[pos] == 'P') {
        ++pos;
        if (pos < s.size() && s[pos] == ',') ++pos;
        continue;
      }
      pos = save;
      break;
    }
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    break;
  }
  FortranFormat f;
  f.per_line = read_int();
  if (pos >= s.size() || std::string("IEDFG").find(s[pos]) == std::string::npos)
    throw ParseError(path + ": unsupported Fortran format '" + spec + "'");
  ++pos;
  f.width = read_int();
  return f;
}

std::vector<std::string> read_fixed_fields(std::ifstream& in, const FortranFormat& f,
                                           std::size_t count, const std::string& path,
                                           std::size_t& lineno) {
  std::vector<std::string> out;
  out.reserve(count);
  std::string line;
  while (out.size() < count) {
    if (!std::getline(in, line))
      throw ParseError(path + ":" + std::to_string(lineno) + ": truncated data");
    ++lineno;
    for (std::size_t k = 0; k < f.per_line && out.size() < count; ++k) {
      std::size_t off = k * f.width;
      if (off >= line.size()) break;
      std::string field = trim(line.substr(off, f.width));
      if (field.empty()) break;
      out.push_back(field);
    }
  }
  return out;
}

double parse_fortran_double(std::string s, const std::string& path) {
  for (auto& c : s)
    if (c == 'D' || c == 'd') c = 'E';
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw ParseError(path + ": bad numeric field '" + s + "'");
  }
}

SparseMatrix load_harwell_boeing(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string l1, l2, l3, l4;
  std::size_t lineno = 0;
  if (!std::getline(in, l1) || !std::getline(in, l2) || !std::getline(in, l3) ||
      !std::getline(in, l4))
    throw ParseError(path + ": truncated Harwell-Boeing header");
  lineno = 4;

  auto header_int = [&](const std::string& line, std::size_t idx) {
    std::size_t off = idx * 14;
    if (off >= line.size()) return std::size_t(0);
    return std::size_t(std::stoll("0" + trim(line.substr(off, 14))));
  };
  std::size_t rhscrd = header_int(l2, 4);

  std::string mxtype = l3.size() >= 3 ? l3.substr(0, 3) : "";
  for (auto& c : mxtype) c = std::toupper(c);
  if (mxtype != "RUA" && mxtype != "RSA")
    throw ParseError(path + ": unsupported HB type '" + mxtype +
                     "' (only RUA/RSA assembled real)");
  std::string l3rest = l3.substr(14);
  std::size_t nrow = std::size_t(std::stoll(trim(l3rest.substr(0, 14))));
  std::size_t ncol = std::size_t(std::stoll(trim(l3rest.substr(14, 14))));
  std::size_t nnz = std::size_t(std::stoll(trim(l3rest.substr(28, 14))));
  if (nrow != ncol) throw ParseError(path + ": matrix is not square");

  FortranFormat ptrfmt = parse_fortran_format(trim(l4.substr(0, 16)), path);
  FortranFormat indfmt = parse_fortran_format(trim(l4.substr(16, 16)), path);
  FortranFormat valfmt = parse_fortran_format(trim(l4.substr(32, 20)), path);
  if (rhscrd > 0) {
    std::string l5;
    std::getline(in, l5);  // right-hand-side descriptor, unused
    ++lineno;
  }

  auto ptr_fields = read_fixed_fields(in, ptrfmt, ncol + 1, path, lineno);
  auto ind_fields = read_fixed_fields(in, indfmt, nnz, path, lineno);
  auto val_fields = read_fixed_fields(in, valfmt, nnz, path, lineno);

  std::vector<std::size_t> colptr(ncol + 1);
  for (std::size_t j = 0; j <= ncol; ++j)
    colptr[j] = std::size_t(std::stoll(ptr_fields[j]));
  Triplets trip;
  trip.reserve(mxtype == "RSA" ? 2 * nnz : nnz);
  for (std::size_t j = 0; j < ncol; ++j) {
    for (std::size_t p = colptr[j]; p < colptr[j + 1]; ++p) {
      std::size_t i = std::size_t(std::stoll(ind_fields[p - 1]));
      double v = parse_fortran_double(val_fields[p - 1], path);
      trip.emplace_back(i - 1, j, v);
      if (mxtype == "RSA" && i - 1 != j) trip.emplace_back(j, i - 1, v);
    }
  }
  return SparseMatrix::from_triplets(nrow, std::move(trip));
}

}  // namespace

SparseMatrix load_matrix(const std::string& path, FileFormat format) {
  return format == FileFormat::MatrixMarket ? load_matrix_market(path)
                                            : load_harwell_boeing(path);
}

void write_matrix_market(const SparseMatrix& A, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << A.order() << " " << A.order() << " " << A.nnz() << "\n";
  char buf[96];
  for (std::size_t i = 0; i < A.order(); ++i)
    for (std::size_t p = A.row_ptr()[i]; p < A.row_ptr()[i + 1]; ++p) {
      std::snprintf(buf, sizeof(buf), "%zu %zu %.17g %.17g\n", i + 1,
                    A.col_idx()[p] + 1, A.values()[p].real(),
                    A.values()[p].imag());
      out << buf;
    }
}

// ---- convergence histories ----

void write_history(const std::vector<ConvergenceRecord>& records,
                   const std::string& path, HistoryFormat format) {
  if (records.empty()) throw DimensionError("write_history: empty record list");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17e", v);
    return std::string(buf);
  };
  if (format == HistoryFormat::Csv) {
    out << "iter,restart,ritz_re,ritz_im,resnorm,subspace_dim,angle\n";
    for (const auto& r : records) {
      out << r.outer_iter << "," << r.restart_index << "," << fmt(r.ritz.real())
          << "," << fmt(r.ritz.imag()) << "," << fmt(r.resnorm) << ","
          << r.subspace_dim << ","
          << (r.angle_to_ref ? fmt(*r.angle_to_ref) : "") << "\n";
    }
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
      nlohmann::json o;
      o["iter"] = r.outer_iter;
      o["restart"] = r.restart_index;
      o["ritz_re"] = r.ritz.real();
      o["ritz_im"] = r.ritz.imag();
      o["resnorm"] = r.resnorm;
      o["subspace_dim"] = r.subspace_dim;
      if (r.angle_to_ref)
        o["angle"] = *r.angle_to_ref;
      else
        o["angle"] = nullptr;
      arr.push_back(o);
    }
    out << arr.dump(2) << "\n";
  }
}

std::vector<ConvergenceRecord> read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty history");
  std::vector<ConvergenceRecord> out;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    while (f.size() < 7) f.push_back("");
    ConvergenceRecord r;
    r.outer_iter = std::size_t(std::stoll(f[0]));
    r.restart_index = std::size_t(std::stoll(f[1]));
    r.ritz = Scalar(std::stod(f[2]), std::stod(f[3]));
    r.resnorm = std::stod(f[4]);
    r.subspace_dim = std::size_t(std::stoll(f[5]));
    if (!trim(f[6]).empty()) r.angle_to_ref = std::stod(f[6]);
    out.push_back(r);
  }
  return out;
}

}  // namespace jdx
