#pragma once

// LRGF1 field files: one ASCII header line
//   LRGF1 <dim> <res...> <lo...> <hi...> <periodic-bits> <components> [dg]
// followed by little-endian IEEE-754 doubles, row-major, component-fastest.
// The optional `dg` token announces a second block with dim*components values per sample
// (the weak derivatives, layout [component][axis]).

#include <iosfwd>
#include <optional>
#include <string>

#include "lrg/chart_grid.hpp"

namespace lrg {

struct LrgfFile {
  Field<double> field;
  std::optional<Field<double>> derivatives;
};

void write_lrgf(std::ostream& os, const Field<double>& f, const Field<double>* derivatives = nullptr);
void write_lrgf(const std::string& path, const Field<double>& f,
                const Field<double>* derivatives = nullptr);
LrgfFile read_lrgf(std::istream& is);
LrgfFile read_lrgf(const std::string& path);

}  // namespace lrg
