#include "bsk/bsk1_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bsk {

namespace {

constexpr int kDigitsAfterPoint = 16;

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific,
                           kDigitsAfterPoint);
  out.append(buf, res.ptr);
}

double parse_double(std::string_view s, std::string_view token) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw InvalidInput("malformed BSK1 entry '" + std::string(token) + "'");
  return v;
}

}  // namespace

std::string format_entry(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidInput("BSK1 cannot store non-finite values");
  std::string out;
  append_double(out, z.real());
  out += std::signbit(z.imag()) ? '-' : '+';
  append_double(out, std::abs(z.imag()));
  out += 'j';
  return out;
}

cplx parse_entry(std::string_view token) {
  if (token.empty()) throw InvalidInput("empty BSK1 entry");
  if (token.back() != 'j' && token.back() != 'J') return {parse_double(token, token), 0.0};

  const std::string_view body = token.substr(0, token.size() - 1);
  // The imaginary part starts at the last sign that is not a leading sign
  // and not an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, parse_double(body, token)};
  return {parse_double(body.substr(0, split), token), parse_double(body.substr(split), token)};
}

void write_bsk1(std::ostream& out, const Matrix& entries, Index d) {
  out << "BSK1 " << entries.rows() << ' ' << entries.cols() << ' ' << d << '\n';
  std::string line;
  for (Index i = 0; i < entries.rows(); ++i) {
    line.clear();
    for (Index j = 0; j < entries.cols(); ++j) {
      if (j > 0) line += ' ';
      line += format_entry(entries(i, j));
    }
    line += '\n';
    out << line;
  }
}

Bsk1Data read_bsk1(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw InvalidInput("empty BSK1 input");
  std::istringstream hs(header);
  std::string magic;
  long long rows = -1, cols = -1, d = -1;
  if (!(hs >> magic >> rows >> cols >> d) || magic != "BSK1")
    throw InvalidInput("bad BSK1 header '" + header + "'");
  if (rows < 1 || cols < 1 || d < 1) throw InvalidInput("BSK1 dimensions must be positive");

  Bsk1Data data;
  data.d = d;
  data.entries.resize(rows, cols);
  std::string line;
  for (long long i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw InvalidInput("BSK1 input ends after " + std::to_string(i) + " of " +
                         std::to_string(rows) + " rows");
    std::istringstream ls(line);
    std::string token;
    long long j = 0;
    while (ls >> token) {
      if (j >= cols)
        throw InvalidInput("BSK1 row " + std::to_string(i + 1) + " has too many entries");
      data.entries(i, j++) = parse_entry(token);
    }
    if (j != cols)
      throw InvalidInput("BSK1 row " + std::to_string(i + 1) + " has " + std::to_string(j) +
                         " entries, expected " + std::to_string(cols));
  }
  return data;
}

void save_bsk1(const std::filesystem::path& path, const Matrix& entries, Index d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  write_bsk1(out, entries, d);
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

Bsk1Data load_bsk1(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  return read_bsk1(in);
}

void save_matrix(const std::filesystem::path& path, const BlockMatrix& m) {
  save_bsk1(path, m.entries(), m.d());
}

void save_vector(const std::filesystem::path& path, const BlockVector& v) {
  save_bsk1(path, v.values(), v.shape().d());
}

BlockMatrix load_matrix(const std::filesystem::path& path) {
  Bsk1Data data = load_bsk1(path);
  return BlockMatrix(std::move(data.entries), data.d);
}

BlockVector load_block_vector(const std::filesystem::path& path) {
  Bsk1Data data = load_bsk1(path);
  if (data.entries.cols() != 1)
    throw InvalidInput("'" + path.string() + "' is not a single-column vector");
  return BlockVector(BlockShape::covering(data.entries.rows(), data.d), data.entries.col(0));
}

Vector load_vector(const std::filesystem::path& path) {
  Bsk1Data data = load_bsk1(path);
  if (data.entries.cols() != 1)
    throw InvalidInput("'" + path.string() + "' is not a single-column vector");
  return data.entries.col(0);
}

}  // namespace bsk
