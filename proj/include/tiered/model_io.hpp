#pragma once

#include <filesystem>
#include <iosfwd>

#include "tiered/grid_energy.hpp"

namespace tiered {

// Binary EnergyModel container, all fields little-endian:
//
//   char[4]  magic "TMRF"
//   u32      version (1)
//   u32      rows, cols, labels
//   u32      pairwise family tag (PairwiseFamily value)
//   f64      weight, truncation
//   u32      flags (bit 0: per-edge scales present)
//   f64[rows*cols*labels]   unary, pixel-major
//   f64[edges]              scales, if flagged
//   f64[labels^2]           GeneralTable only
//   f64[edges*labels^2]     EdgeTables only
//
// Edge order is the GridDims edge id order.
void write_model(std::ostream& out, const EnergyModel& model);
EnergyModel read_model(std::istream& in);

void save_model(const std::filesystem::path& path, const EnergyModel& model);
EnergyModel load_model(const std::filesystem::path& path);

}  // namespace tiered
