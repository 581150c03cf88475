#include "tiered/model_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "tiered/image_io.hpp"

namespace tiered {

namespace {

constexpr char kMagic[4] = {'T', 'M', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint32_t kHasScales = 1u;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("model container truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw IoError("model container truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

std::vector<double> get_f64s(std::istream& in, std::size_t count) {
  std::vector<double> v(count);
  for (double& d : v) d = get_f64(in);
  return v;
}

}  // namespace

void write_model(std::ostream& out, const EnergyModel& model) {
  const GridDims& d = model.dims();
  const PairwisePotential& pw = model.pairwise();
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(d.rows));
  put_u32(out, static_cast<std::uint32_t>(d.cols));
  put_u32(out, static_cast<std::uint32_t>(model.num_labels()));
  put_u32(out, static_cast<std::uint32_t>(pw.family()));
  put_f64(out, pw.weight());
  put_f64(out, pw.truncation());
  put_u32(out, pw.scales().empty() ? 0u : kHasScales);
  for (double u : model.unary_costs()) put_f64(out, u);
  for (double s : pw.scales()) put_f64(out, s);
  if (pw.family() == PairwiseFamily::GeneralTable || pw.family() == PairwiseFamily::EdgeTables) {
    for (double t : pw.table()) put_f64(out, t);
  }
}

EnergyModel read_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) throw IoError("not a TMRF model container");
  const std::uint32_t version = get_u32(in);
  if (version != kVersion) throw IoError("unsupported model container version " + std::to_string(version));
  const auto rows = static_cast<int>(get_u32(in));
  const auto cols = static_cast<int>(get_u32(in));
  const auto K = static_cast<int>(get_u32(in));
  const std::uint32_t tag = get_u32(in);
  const double weight = get_f64(in);
  const double truncation = get_f64(in);
  const std::uint32_t flags = get_u32(in);
  if (rows < 1 || cols < 1 || K < 1 || rows > (1 << 20) || cols > (1 << 20) || K > (1 << 16)) {
    throw IoError("implausible model dimensions");
  }
  const GridDims d(rows, cols);
  const std::size_t E = static_cast<std::size_t>(d.num_edges());
  const std::size_t KK = static_cast<std::size_t>(K) * K;

  std::vector<double> unary = get_f64s(in, static_cast<std::size_t>(d.size()) * K);
  std::vector<double> scales;
  if (flags & kHasScales) scales = get_f64s(in, E);

  PairwisePotential pw = PairwisePotential::potts(weight);
  switch (static_cast<PairwiseFamily>(tag)) {
    case PairwiseFamily::Potts: break;
    case PairwiseFamily::Linear: pw = PairwisePotential::linear(weight); break;
    case PairwiseFamily::Quadratic: pw = PairwisePotential::quadratic(weight); break;
    case PairwiseFamily::TruncatedLinear: pw = PairwisePotential::truncated_linear(weight, truncation); break;
    case PairwiseFamily::TruncatedQuadratic:
      pw = PairwisePotential::truncated_quadratic(weight, truncation);
      break;
    case PairwiseFamily::GeneralTable: pw = PairwisePotential::general_table(get_f64s(in, KK)); break;
    case PairwiseFamily::EdgeTables: pw = PairwisePotential::edge_tables(get_f64s(in, E * KK)); break;
    default: throw IoError("unknown pairwise family tag " + std::to_string(tag));
  }
  return EnergyModel(d, K, std::move(unary), pw.with_scales(std::move(scales)));
}

void save_model(const std::filesystem::path& path, const EnergyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string() + ": cannot open for writing");
  write_model(out, model);
  if (!out) throw IoError(path.string() + ": write failed");
}

EnergyModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open");
  try {
    return read_model(in);
  } catch (const IoError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

}  // namespace tiered
