#pragma once

#include <string>

#include "fracflow/grid.hpp"

namespace fracflow {

enum class FieldFormat { Csv, Binary };

const char* to_string(FieldFormat f);
FieldFormat field_format_from_string(const std::string& name);
const char* extension(FieldFormat f);  // ".csv" / ".bin"

// CSV: header "# fracflow-field v1, ndim=<n>, dims=<NxN...>, length=<L>",
// then one row per node, "x[,y[,z]],value", row-major, 17 significant
// digits. Binary: magic "FFLD", u32 version 1, u8 ndim, per-axis u64 counts,
// per-axis f64 lengths, then the f64 little-endian row-major payload.
void write_field(const ScalarField& field, const std::string& path, FieldFormat format);

// Reads either format back (sniffed by the magic/header). Returned grids are
// periodic; the boundary tag is not serialized.
ScalarField read_field(const std::string& path);

// 1D samples with an explicit origin, CSV rows "x,value".
void write_line(const std::vector<double>& values, double origin, double dx,
                const std::string& path);

}  // namespace fracflow
