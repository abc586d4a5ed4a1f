#include "lrg/lrgf.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace lrg {

namespace {

static_assert(std::endian::native == std::endian::little, "LRGF1 I/O assumes a little-endian host");

void write_block(std::ostream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::vector<double> read_block(std::istream& is, std::size_t n) {
  std::vector<double> v(n);
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != n * sizeof(double))
    throw InputError("LRGF1: truncated data block");
  return v;
}

}  // namespace

void write_lrgf(std::ostream& os, const Field<double>& f, const Field<double>* derivatives) {
  const ChartGrid& g = f.grid;
  const int dim = g.dim();
  if (derivatives) {
    if (!(derivatives->grid == g) || derivatives->components != f.components * dim)
      throw InputError("LRGF1: derivative block does not match the field");
  }
  std::ostringstream hdr;
  hdr << std::setprecision(17) << "LRGF1 " << dim;
  for (int r : g.res()) hdr << ' ' << r;
  for (double v : g.lo()) hdr << ' ' << v;
  for (double v : g.hi()) hdr << ' ' << v;
  hdr << ' ';
  for (bool p : g.periodic()) hdr << (p ? '1' : '0');
  hdr << ' ' << f.components;
  if (derivatives) hdr << " dg";
  os << hdr.str() << '\n';
  write_block(os, f.values);
  if (derivatives) write_block(os, derivatives->values);
}

void write_lrgf(const std::string& path, const Field<double>& f, const Field<double>* derivatives) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("LRGF1: cannot open " + path + " for writing");
  write_lrgf(os, f, derivatives);
}

LrgfFile read_lrgf(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("LRGF1: missing header");
  std::istringstream hs(line);
  std::string magic;
  int dim = 0;
  hs >> magic >> dim;
  if (magic != "LRGF1") throw InputError("LRGF1: bad magic '" + magic + "'");
  if (dim < 1 || dim > 8) throw InputError("LRGF1: bad dimension");
  std::vector<int> res(dim);
  std::vector<double> lo(dim), hi(dim);
  for (auto& r : res) hs >> r;
  for (auto& v : lo) hs >> v;
  for (auto& v : hi) hs >> v;
  std::string bits;
  int comps = 0;
  hs >> bits >> comps;
  if (!hs || static_cast<int>(bits.size()) != dim || comps < 1)
    throw InputError("LRGF1: malformed header: " + line);
  std::vector<bool> periodic(dim);
  for (int a = 0; a < dim; ++a) {
    if (bits[a] != '0' && bits[a] != '1') throw InputError("LRGF1: bad periodic bits " + bits);
    periodic[a] = bits[a] == '1';
  }
  std::string flag;
  hs >> flag;
  const bool has_dg = flag == "dg";
  if (!flag.empty() && !has_dg) throw InputError("LRGF1: unknown header token " + flag);

  ChartGrid g(lo, hi, res, periodic);
  LrgfFile out;
  out.field = Field<double>(g, comps, read_block(is, g.size() * comps));
  if (has_dg) out.derivatives = Field<double>(g, comps * dim, read_block(is, g.size() * comps * dim));
  return out;
}

LrgfFile read_lrgf(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("LRGF1: cannot open " + path);
  return read_lrgf(is);
}

}  // namespace lrg
