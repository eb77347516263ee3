#pragma once

// Field files.
//
// Binary (little-endian):
//   char[4] "GNPF", u32 version = 1, u32 n, u32 nt, u32 ny, u32 nx,
//   f64 lx, f64 ly, u32 stencil_order, then nt*ny^n*nx f64 values in
//   row-major (ix, it, iy1[, iy2]) order.
//
// CSV:
//   n,nt,ny,nx,lx,ly,stencil_order
//   <one line of header values>
//   value
//   <one value per line, same row-major order>

#include <iosfwd>
#include <string>

#include "gnpwe/fd.hpp"

namespace gnpwe::fd {

void write_binary(const GridField& field, std::ostream& out);
GridField read_binary(std::istream& in);

void write_csv(const GridField& field, std::ostream& out);
GridField read_csv(std::istream& in);

/// Chooses CSV for a ".csv" extension and binary otherwise.
void save_field(const GridField& field, const std::string& path);
GridField load_field(const std::string& path);

}  // namespace gnpwe::fd
