#pragma once

// BSK1 text format for complex matrices and vectors.
//
//   BSK1 <rows> <cols> <d>
//   <entry> <entry> ...        (one line per row)
//
// Each entry is written as `re+imj` or `re-imj`, both parts in scientific
// notation with 17 significant digits, so a write/read cycle is exact.
// Vectors are single-column matrices; for them d is the block length of the
// rows, for matrices it is the block length of the columns.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "bsk/block.hpp"

namespace bsk {

struct Bsk1Data {
  Matrix entries;
  Index d = 1;
};

std::string format_entry(cplx z);
cplx parse_entry(std::string_view token);

void write_bsk1(std::ostream& out, const Matrix& entries, Index d);
Bsk1Data read_bsk1(std::istream& in);

void save_bsk1(const std::filesystem::path& path, const Matrix& entries, Index d);
Bsk1Data load_bsk1(const std::filesystem::path& path);

void save_matrix(const std::filesystem::path& path, const BlockMatrix& m);
void save_vector(const std::filesystem::path& path, const BlockVector& v);

BlockMatrix load_matrix(const std::filesystem::path& path);
/// Loads a single-column file as a block vector (rows partitioned by d).
BlockVector load_block_vector(const std::filesystem::path& path);
/// Loads a single-column file as a plain vector, ignoring d.
Vector load_vector(const std::filesystem::path& path);

}  // namespace bsk
