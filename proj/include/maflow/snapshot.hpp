#pragma once

// Field snapshot files.
//
// Layout: one line of JSON terminated by '\n',
//   {"kind":"scalar"|"hermitian","n":2,"period":6.28...,"resolution":16,"time":0.0}
// followed immediately by little-endian IEEE-754 float64 values.
//   scalar:    resolution^(2n) values in grid order (row-major, y_n fastest).
//   hermitian: for each grid point in grid order, the n real diagonal entries,
//              then for every (i, j) with i > j in row order (i ascending, then
//              j ascending) the pair (re, im) of entry (i, j).

#include <filesystem>
#include <variant>

#include "maflow/grid.hpp"

namespace maflow {

struct Snapshot {
  double time = 0.0;
  std::variant<ScalarField, HermitianField> field;
};

void write_snapshot(const std::filesystem::path& path, const ScalarField& f, double time);
void write_snapshot(const std::filesystem::path& path, const HermitianField& f, double time);
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace maflow
