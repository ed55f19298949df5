#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "bf/error.hpp"
#include "bf/operator_assembly.hpp"

namespace bf {

namespace {

void put(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
}

double get(std::ifstream& in) {
  std::uint64_t bits = 0;
  in.read(reinterpret_cast<char*>(&bits), sizeof bits);
  if (!in) throw Error(ErrorCode::IoError, "truncated matrix dump");
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

}  // namespace

void write_matrix_dump(const std::string& path, const TruncatedOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  const std::array<double, 8> header{kDumpMagic, 1.0, static_cast<double>(scalar_dim(op.band)),
                                     op.mu, op.eps, op.kappa, 0.0, 0.0};
  for (double h : header) put(out, h);
  for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) {
    for (Eigen::Index i = 0; i < op.matrix.rows(); ++i) {
      put(out, op.matrix(i, j).real());
      put(out, op.matrix(i, j).imag());
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

TruncatedOperator read_matrix_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::array<double, 8> h{};
  for (double& v : h) v = get(in);
  if (h[0] != kDumpMagic || h[1] != 1.0 || h[6] != 0.0) {
    throw Error(ErrorCode::IoError, path + " is not a version-1 matrix dump");
  }
  const int modes = static_cast<int>(h[2]);
  if (modes < 1 || modes % 2 == 0) throw Error(ErrorCode::IoError, "bad mode count in " + path);
  TruncatedOperator op;
  op.band = (modes - 1) / 2;
  op.mu = h[3];
  op.eps = h[4];
  op.kappa = h[5];
  const Eigen::Index n = operator_dim(op.band);
  op.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = get(in);
      op.matrix(i, j) = cplx(re, get(in));
    }
  }
  return op;
}

}  // namespace bf
